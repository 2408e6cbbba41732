#include <doctest.h>

#include "helpers.hpp"

using test::run_tool;

namespace {

std::string model(const std::string& name) { return test::models_dir() + "/" + name; }

void check_golden(const std::string& name, const std::string& actual) {
  std::string expected = test::read_file(test::golden_dir() + "/" + name);
  REQUIRE_FALSE(expected.empty());
  CHECK(actual == expected);
}

}  // namespace

TEST_CASE("validate reports acyclic pass-through models") {
  auto r = run_tool("validate " + model("example1_ten_integers.tm"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("acyclic: true") != std::string::npos);
  check_golden("validate_example1_ten_integers.txt", r.out);
}

TEST_CASE("validate exits 1 on structural violations") {
  std::string bad = "/tmp/thingc_bad_model.tm";
  std::ofstream(bad) << "model bad { machine a { process; receive; } "
                        "flow a.process -> a.receive; }\n";
  auto r = run_tool("validate " + bad);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("ok: false") != std::string::npos);
  CHECK(r.out.find("IllegalFlow") != std::string::npos);
}

TEST_CASE("validate honors repeat-marked edges") {
  auto plain = run_tool("validate " + model("traffic_light.tm"));
  CHECK(plain.exit_code == 0);
  CHECK(plain.out.find("acyclic: false") != std::string::npos);
  auto marked = run_tool("validate " + model("traffic_light.tm") +
                         " --repeat \"yellow.create->red.create\"");
  CHECK(marked.exit_code == 0);
  CHECK(marked.out.find("acyclic: true") != std::string::npos);
}

TEST_CASE("parse prints the canonical form and exits 3 on errors") {
  auto ok = run_tool("parse " + model("example2_odd_even.tm"));
  CHECK(ok.exit_code == 0);
  check_golden("parse_odd_even.txt", ok.out);

  std::string bad = "/tmp/thingc_bad_parse.tm";
  std::ofstream(bad) << "model broken { machine a { ";
  auto err = run_tool("parse " + bad);
  CHECK(err.exit_code == 3);
  CHECK(err.out.empty());
  CHECK_FALSE(err.err.empty());
}

TEST_CASE("simulate prints the trace and conformance gates the exit code") {
  auto accepted = run_tool("simulate " + model("palindrome.tm") +
                           " --input tape=[0,1,1,0] --trace-format tsv");
  CHECK(accepted.exit_code == 0);
  CHECK(accepted.out.find("# verdict\taccepted") != std::string::npos);

  auto rejected = run_tool("simulate " + model("palindrome.tm") +
                           " --input tape=[0,1,0,0] --trace-format tsv");
  CHECK(rejected.exit_code == 0);  // a rejecting verdict is still a clean run
  CHECK(rejected.out.find("# verdict\trejected") != std::string::npos);

  check_golden("simulate_odd_even.tsv",
               run_tool("simulate " + model("example2_odd_even.tm") +
                        " --trace-format tsv")
                   .out);
}

TEST_CASE("a non-conformant trace exits 1 after printing the trace") {
  std::string path = "/tmp/thingc_nonconformant.tm";
  std::ofstream(path) << "model skewed {\n"
                         "  machine a { create emit [x]; process; }\n"
                         "  flow a.create -> a.process;\n"
                         "}\n"
                         "event A over { a.create };\n"
                         "event B over { a.process };\n"
                         "behavior { B -> A; }\n";  // the trace runs A before B
  auto r = run_tool("simulate " + path + " --trace-format tsv");
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.out.empty());  // the trace still prints
  CHECK(r.err.find("does not conform") != std::string::npos);
}

TEST_CASE("simulate exits 4 when a limit cuts the run") {
  auto r = run_tool("simulate " + model("traffic_light.tm") +
                    " --limit-clock 330 --trace-format tsv");
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("# limit\tmax-clock") != std::string::npos);
}

TEST_CASE("export renders the three views") {
  auto behavior = run_tool("export " + model("restaurant.tm") + " --view behavior");
  CHECK(behavior.exit_code == 0);
  CHECK(test::count_occurrences(behavior.out, "label=\"E") == 6);
  check_golden("export_restaurant_behavior.dot", behavior.out);

  auto events = run_tool("export " + model("example1_ten_integers.tm") + " --view events");
  CHECK(events.exit_code == 0);
  CHECK(test::count_occurrences(events.out, "shape=note") == 2);

  auto statics = run_tool("export " + model("thermostat.tm") + " --view static");
  CHECK(statics.exit_code == 0);
  check_golden("export_thermostat_static.dot", statics.out);

  // A model without a behavior declaration renders an empty behavior graph.
  auto empty = run_tool("export " + model("palindrome.tm") + " --view behavior");
  CHECK(empty.exit_code == 0);
  CHECK(empty.out.find("digraph behavior {") == 0);

  auto bad = run_tool("export " + model("thermostat.tm") + " --view sideways");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("translate prints a model equal to the bundled one's shape") {
  auto r = run_tool("translate --fsm " + model("traffic_light.fsm"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("machine starter") != std::string::npos);
  CHECK(r.out.find("storage start_time = 0;") != std::string::npos);
  check_golden("translate_traffic.txt", r.out);
}

TEST_CASE("exports and traces are byte-identical across runs") {
  auto once = run_tool("export " + model("restaurant.tm") + " --view static");
  auto twice = run_tool("export " + model("restaurant.tm") + " --view static");
  CHECK(once.out == twice.out);
  auto sim1 = run_tool("simulate " + model("restaurant.tm"));
  auto sim2 = run_tool("simulate " + model("restaurant.tm"));
  CHECK(sim1.out == sim2.out);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_tool("simulate").exit_code == 2);
  CHECK(run_tool("frobnicate x.tm").exit_code == 2);
  CHECK(run_tool("validate /no/such/file.tm").exit_code == 2);
  CHECK(run_tool("simulate " + model("palindrome.tm") + " --wat").exit_code == 2);
  CHECK(run_tool("simulate " + model("palindrome.tm") + " --trace-format xml").exit_code ==
        2);
}

TEST_CASE("exit codes and validate output are stable across the corpus") {
  const char* names[] = {"restaurant",        "example1_ten_integers",
                         "example2_odd_even", "acceptor_01s0",
                         "palindrome",        "thermostat",
                         "traffic_light"};
  for (const char* name : names) {
    CAPTURE(name);
    auto r = run_tool("validate " + model(std::string(name) + ".tm"));
    CHECK(r.exit_code == 0);
    check_golden(std::string("validate_") + name + ".txt", r.out);
  }
}

TEST_CASE("THINGC_COLOR only colors diagnostics on stderr") {
  std::string bad = "/tmp/thingc_color_probe.tm";
  std::ofstream(bad) << "model broken { machine a { ";
  auto plain = run_tool("parse " + bad);
  test::CommandResult colored;
  {
    std::string command = "THINGC_COLOR=1 " + test::tool_path() + " parse " + bad +
                          " > /tmp/thingc_color_out 2> /tmp/thingc_color_err";
    int status = std::system(command.c_str());
    colored.exit_code = WEXITSTATUS(status);
    colored.out = test::read_file("/tmp/thingc_color_out");
    colored.err = test::read_file("/tmp/thingc_color_err");
  }
  CHECK(plain.exit_code == 3);
  CHECK(colored.exit_code == 3);
  CHECK(plain.out == colored.out);  // payload stream untouched
  CHECK(plain.err.find("\033[") == std::string::npos);
  CHECK(colored.err.find("\033[31m") != std::string::npos);
}

TEST_CASE("--help works for every command and exits 0") {
  CHECK(run_tool("--help").exit_code == 0);
  for (const char* cmd : {"parse", "validate", "simulate", "export", "translate"}) {
    auto r = run_tool(std::string(cmd) + " --help");
    CAPTURE(cmd);
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.out.empty());
  }
}

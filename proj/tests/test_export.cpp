#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "thingc/export.hpp"
#include "thingc/simulator.hpp"

using namespace thingc;

TEST_CASE("static DOT nests clusters and dashes triggers") {
  ModelDocument doc = test::load_model("restaurant.tm");
  std::string dot = export_dot_static(doc.model);
  // Customer contains Order: the order cluster opens inside the customer one.
  std::size_t customer = dot.find("label=\"customer\"");
  std::size_t order = dot.find("label=\"order\"");
  REQUIRE(customer != std::string::npos);
  REQUIRE(order != std::string::npos);
  CHECK(customer < order);
  CHECK(test::count_occurrences(dot, "[style=dashed]") ==
        static_cast<int>(doc.model.triggers().size()));
  CHECK(test::count_occurrences(dot, "shape=cylinder") == 2);  // sold, inventory
}

TEST_CASE("an empty model renders an empty graph body") {
  StaticModel model("empty");
  std::string dot = export_dot_static(model);
  CHECK(dot == "digraph \"empty\" {\n  node [shape=box, style=rounded];\n}\n");
}

TEST_CASE("the thermostat has exactly its four dashed trigger edges") {
  ModelDocument doc = test::load_model("thermostat.tm");
  REQUIRE(doc.model.triggers().size() == 4);
  std::string dot = export_dot_static(doc.model);
  CHECK(test::count_occurrences(dot, "[style=dashed]") == 4);
}

TEST_CASE("every flow and trigger appears exactly once as an edge") {
  ModelDocument doc = test::load_model("traffic_light.tm");
  std::string dot = export_dot_static(doc.model);
  int solid = 0;
  int dashed = 0;
  std::istringstream lines(dot);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find(" -> ") == std::string::npos) continue;
    if (line.find("style=dashed") != std::string::npos)
      ++dashed;
    else
      ++solid;
  }
  CHECK(solid == static_cast<int>(doc.model.flows().size()));
  CHECK(dashed == static_cast<int>(doc.model.triggers().size()));
}

TEST_CASE("the events overlay adds one boundary per event") {
  ModelDocument doc = test::load_model("example1_ten_integers.tm");
  std::string overlay = export_dot_events(doc.model, doc.events);
  CHECK(test::count_occurrences(overlay, "shape=note") == 2);
  CHECK(overlay.find("label=\"E1\"") != std::string::npos);
  CHECK(overlay.find("label=\"E2\"") != std::string::npos);
}

TEST_CASE("an empty overlay equals the static rendering byte for byte") {
  ModelDocument doc = test::load_model("restaurant.tm");
  CHECK(export_dot_events(doc.model, {}) == export_dot_static(doc.model));
}

TEST_CASE("overlapping regions both enclose the shared element") {
  ModelDocument doc = test::load_model("acceptor_01s0.tm");
  std::string overlay = export_dot_events(doc.model, doc.events);
  // E2_flag and E4_flagging share the flag cell; both boundaries reach it.
  StorageId flag = *doc.model.find_model_storage("flag");
  std::string flag_node = "d" + std::to_string(flag.index);
  int boundary_links = 0;
  std::istringstream lines(overlay);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find("-> " + flag_node + " [style=dotted") != std::string::npos)
      ++boundary_links;
  }
  CHECK(boundary_links == 2);
}

TEST_CASE("behavior DOT has a node per event and a self-loop per repeat") {
  ModelDocument restaurant = test::load_model("restaurant.tm");
  std::string dot = export_dot_behavior(*restaurant.behavior);
  CHECK(test::count_occurrences(dot, "label=\"E") == 6);
  CHECK(test::count_occurrences(dot, " -> ") == 5);

  ModelDocument stream = test::load_model("example1_ten_integers.tm");
  std::string stream_dot = export_dot_behavior(*stream.behavior);
  CHECK(test::count_occurrences(stream_dot, "label=\"E") == 2);
  CHECK(test::count_occurrences(stream_dot, "e0 -> e0") == 1);
  CHECK(test::count_occurrences(stream_dot, "e1 -> e1") == 1);
  CHECK(test::count_occurrences(stream_dot, " -> ") == 3);  // one edge, two loops

  BehaviorGraph single;
  StaticModel empty("e");
  single.events.push_back(EventDef{"only", std::nullopt, Region{}, 0});
  std::string single_dot = export_dot_behavior(single);
  CHECK(test::count_occurrences(single_dot, "label=\"only\"") == 1);
  CHECK(test::count_occurrences(single_dot, " -> ") == 0);
}

TEST_CASE("DOT exports are byte-identical across runs") {
  ModelDocument doc = test::load_model("restaurant.tm");
  CHECK(export_dot_static(doc.model) == export_dot_static(doc.model));
  CHECK(export_dot_events(doc.model, doc.events) ==
        export_dot_events(doc.model, doc.events));
  CHECK(export_dot_behavior(*doc.behavior) == export_dot_behavior(*doc.behavior));
}

TEST_CASE("empty traces export a summary record only") {
  StaticModel model("quiet");
  Trace trace;
  std::string jsonl = export_trace(model, trace, TraceFormat::Jsonl);
  CHECK(test::count_occurrences(jsonl, "\n") == 1);
  CHECK(jsonl.find("\"summary\":true") != std::string::npos);
  CHECK(jsonl.find("\"verdict\":null") != std::string::npos);
}

TEST_CASE("a tsv export carries the verdict-free summary with the output") {
  ModelDocument doc = test::load_model("example2_odd_even.tm");
  std::vector<InputFeed> feeds{{doc.inputs[0].stage, {Thing::integer(7)}}};
  Trace trace = execute(doc.model, feeds, {});
  std::string tsv = export_trace(doc.model, trace, TraceFormat::Tsv);
  CHECK(tsv.find("# output\todd.transfer\tOdd") != std::string::npos);
  CHECK(tsv.find("# verdict\t-") != std::string::npos);
}

TEST_CASE("exported jsonl parses back with one record per instance") {
  ModelDocument doc = test::load_model("restaurant.tm");
  Trace trace = execute(doc.model, {}, {});
  std::string jsonl = export_trace(doc.model, trace, TraceFormat::Jsonl);
  std::istringstream lines(jsonl);
  std::string line;
  int instances = 0;
  int summaries = 0;
  while (std::getline(lines, line)) {
    nlohmann::json record = nlohmann::json::parse(line);  // must be valid JSON
    if (record.contains("summary"))
      ++summaries;
    else
      ++instances;
  }
  CHECK(instances == static_cast<int>(trace.instances.size()));
  CHECK(summaries == 1);
}

TEST_CASE("unknown trace formats are rejected at the name level") {
  CHECK(trace_format_from("jsonl") == TraceFormat::Jsonl);
  CHECK(trace_format_from("tsv") == TraceFormat::Tsv);
  CHECK_FALSE(trace_format_from("xml").has_value());
}

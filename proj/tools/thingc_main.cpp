// thingc - parse, validate, simulate, export and translate TM models.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "thingc/export.hpp"
#include "thingc/fsm.hpp"
#include "thingc/parser.hpp"
#include "thingc/printer.hpp"
#include "thingc/simulator.hpp"
#include "thingc/validator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;  // validation or conformance failure
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitLimit = 4;

bool color_enabled() {
  const char* env = std::getenv("THINGC_COLOR");
  return env && std::string(env) == "1";
}

void print_diagnostics(const std::vector<thingc::ParseDiagnostic>& diagnostics) {
  bool color = color_enabled();
  for (const auto& d : diagnostics) {
    if (color)
      std::cerr << "\033[31m" << d.render() << "\033[0m\n";
    else
      std::cerr << d.render() << "\n";
  }
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<thingc::ModelDocument> load_document(const std::string& path, int& exit_code) {
  auto source = read_file(path);
  if (!source) {
    std::cerr << "thingc: cannot read `" << path << "`\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  thingc::ParseResult result = thingc::parse(*source, path);
  if (!result.ok()) {
    print_diagnostics(result.diagnostics);
    exit_code = kExitParse;
    return std::nullopt;
  }
  return std::move(result.document);
}

// `--repeat a.process->b.create` names a flow or trigger edge by endpoints.
std::optional<std::set<std::uint64_t>> repeat_edges(const thingc::StaticModel& model,
                                                    const std::vector<std::string>& specs) {
  std::set<std::uint64_t> marked;
  for (const std::string& spec : specs) {
    auto arrow = spec.find("->");
    if (arrow == std::string::npos) {
      std::cerr << "thingc: bad --repeat value `" << spec << "`, expected from->to\n";
      return std::nullopt;
    }
    auto trim = [](std::string s) {
      while (!s.empty() && s.front() == ' ') s.erase(s.begin());
      while (!s.empty() && s.back() == ' ') s.pop_back();
      return s;
    };
    std::string from = trim(spec.substr(0, arrow));
    std::string to = trim(spec.substr(arrow + 2));
    bool found = false;
    for (const thingc::Flow& f : model.flows()) {
      if (model.endpoint_path(f.from) == from && model.endpoint_path(f.to) == to) {
        marked.insert(thingc::edge_key(f.id));
        found = true;
      }
    }
    for (const thingc::Trigger& t : model.triggers()) {
      if (model.stage_path(t.from) == from && model.stage_path(t.to) == to) {
        marked.insert(thingc::edge_key(t.id));
        found = true;
      }
    }
    if (!found) {
      std::cerr << "thingc: no edge `" << from << " -> " << to << "` to repeat-mark\n";
      return std::nullopt;
    }
  }
  return marked;
}

int run_parse(const std::string& path) {
  int exit_code = kExitOk;
  auto doc = load_document(path, exit_code);
  if (!doc) return exit_code;
  std::cout << thingc::print_model(*doc);
  return kExitOk;
}

int run_validate(const std::string& path, const std::vector<std::string>& repeats) {
  int exit_code = kExitOk;
  auto doc = load_document(path, exit_code);
  if (!doc) return exit_code;
  auto marked = repeat_edges(doc->model, repeats);
  if (!marked) return kExitUsage;

  thingc::ValidationReport report = thingc::validate_structure(doc->model);
  std::cout << "ok: " << (report.ok ? "true" : "false") << "\n";
  std::cout << report.render();
  thingc::FinitenessReport finiteness = thingc::check_finiteness(doc->model, *marked);
  std::cout << finiteness.render();
  return report.ok ? kExitOk : kExitValidation;
}

std::optional<std::vector<thingc::InputFeed>> build_feeds(
    const thingc::ModelDocument& doc, const std::vector<std::string>& overrides) {
  std::vector<thingc::InputFeed> feeds;
  std::vector<std::string> consumed;
  for (const thingc::InputBinding& b : doc.inputs) feeds.push_back({b.stage, b.things});

  for (const std::string& spec : overrides) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      std::cerr << "thingc: bad --input value `" << spec << "`, expected name=[v, ...]\n";
      return std::nullopt;
    }
    std::string name = spec.substr(0, eq);
    std::string values = spec.substr(eq + 1);
    auto parsed = thingc::parse_literal_list(values);
    if (!parsed.things) {
      print_diagnostics(parsed.diagnostics);
      std::cerr << "thingc: bad --input literal list `" << values << "`\n";
      return std::nullopt;
    }
    // Flags win over the file's input declaration for the same binding.
    if (const thingc::InputBinding* binding = doc.find_input(name)) {
      bool replaced = false;
      for (std::size_t i = 0; i < doc.inputs.size(); ++i) {
        if (&doc.inputs[i] == binding) {
          feeds[i].things = *parsed.things;
          replaced = true;
        }
      }
      if (replaced) continue;
    }
    // Otherwise the name must resolve to a declared binding point.
    bool matched = false;
    for (const thingc::InputPoint& p : doc.model.inputs()) {
      if (p.name == name) {
        feeds.push_back({p.stage, *parsed.things});
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::cerr << "thingc: no input binding named `" << name << "`\n";
      return std::nullopt;
    }
  }
  return feeds;
}

int run_simulate(const std::string& path, const std::vector<std::string>& inputs,
                 std::uint64_t limit_instances, std::int64_t limit_clock,
                 const std::string& format_name) {
  int exit_code = kExitOk;
  auto doc = load_document(path, exit_code);
  if (!doc) return exit_code;

  auto format = thingc::trace_format_from(format_name);
  if (!format) {
    std::cerr << "thingc: unknown trace format `" << format_name << "`\n";
    return kExitUsage;
  }

  thingc::ValidationReport report = thingc::validate_structure(doc->model);
  if (!report.ok) {
    std::cerr << report.render();
    return kExitValidation;
  }
  doc->model.freeze();

  auto feeds = build_feeds(*doc, inputs);
  if (!feeds) return kExitUsage;

  thingc::SimulationLimits limits;
  limits.max_instances = limit_instances;
  limits.max_clock = limit_clock;

  thingc::Trace trace;
  try {
    trace = thingc::execute(doc->model, *feeds, limits);
  } catch (const thingc::SimulationError& err) {
    std::cerr << "thingc: simulation failed " << err.what() << "\n";
    return kExitValidation;
  }
  std::cout << thingc::export_trace(doc->model, trace, *format);

  if (!doc->events.empty()) {
    thingc::AttributedTrace attributed =
        thingc::attribute(doc->model, trace, doc->events);
    if (doc->behavior) {
      thingc::ConformanceReport conf = thingc::conformance(attributed, *doc->behavior);
      if (!conf.ok) {
        std::cerr << "thingc: trace does not conform to the declared behavior: "
                  << conf.message << "\n";
        return kExitValidation;
      }
    }
  }
  if (trace.limit_hit) {
    std::cerr << "thingc: simulation limit exceeded ("
              << (trace.limit_hit == thingc::LimitKind::MaxInstances ? "max-instances"
                                                                     : "max-clock")
              << "); trace is partial\n";
    return kExitLimit;
  }
  return kExitOk;
}

int run_export(const std::string& path, const std::string& view) {
  int exit_code = kExitOk;
  auto doc = load_document(path, exit_code);
  if (!doc) return exit_code;
  if (view == "static") {
    std::cout << thingc::export_dot_static(doc->model);
    return kExitOk;
  }
  if (view == "events") {
    std::cout << thingc::export_dot_events(doc->model, doc->events);
    return kExitOk;
  }
  if (view == "behavior") {
    thingc::BehaviorGraph empty;
    std::cout << thingc::export_dot_behavior(doc->behavior ? *doc->behavior : empty);
    return kExitOk;
  }
  std::cerr << "thingc: unknown view `" << view << "`\n";
  return kExitUsage;
}

int run_translate(const std::string& fsm_path) {
  auto source = read_file(fsm_path);
  if (!source) {
    std::cerr << "thingc: cannot read `" << fsm_path << "`\n";
    return kExitUsage;
  }
  thingc::FsmParseResult parsed = thingc::parse_fsm(*source, fsm_path);
  if (!parsed.spec) {
    print_diagnostics(parsed.diagnostics);
    return kExitParse;
  }
  try {
    thingc::ModelDocument doc = thingc::fsm_to_tm(*parsed.spec);
    std::cout << thingc::print_model(doc);
  } catch (const thingc::ModelError& err) {
    std::cerr << "thingc: " << err.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging-machine model toolkit"};
  app.require_subcommand(1);

  std::string model_path;
  std::vector<std::string> repeats;
  std::vector<std::string> inputs;
  std::uint64_t limit_instances = 10000;
  std::int64_t limit_clock = 1'000'000;
  std::string trace_format = "jsonl";
  std::string view = "static";
  std::string fsm_path;

  CLI::App* parse_cmd = app.add_subcommand("parse", "Parse a model and print its canonical form");
  parse_cmd->add_option("model", model_path, "Path to the .tm file")->required();

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check structural legality and finiteness");
  validate_cmd->add_option("model", model_path, "Path to the .tm file")->required();
  validate_cmd->add_option("--repeat", repeats,
                           "Edge from->to declared as repetition shorthand, excluded "
                           "from the cycle check");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run the model and print the trace");
  simulate_cmd->add_option("model", model_path, "Path to the .tm file")->required();
  simulate_cmd->add_option("--input", inputs, "Input binding, name=[v1, v2, ...]");
  simulate_cmd->add_option("--limit-instances", limit_instances,
                           "Stop after this many generic event instances");
  simulate_cmd->add_option("--limit-clock", limit_clock, "Stop when the clock passes this time");
  simulate_cmd->add_option("--trace-format", trace_format, "jsonl or tsv");

  CLI::App* export_cmd = app.add_subcommand("export", "Render DOT diagrams");
  export_cmd->add_option("model", model_path, "Path to the .tm file")->required();
  export_cmd->add_option("--view", view, "static, events or behavior");

  CLI::App* translate_cmd =
      app.add_subcommand("translate", "Translate an FSM spec into a TM model");
  translate_cmd->add_option("--fsm", fsm_path, "Path to the .fsm file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (parse_cmd->parsed()) return run_parse(model_path);
  if (validate_cmd->parsed()) return run_validate(model_path, repeats);
  if (simulate_cmd->parsed())
    return run_simulate(model_path, inputs, limit_instances, limit_clock, trace_format);
  if (export_cmd->parsed()) return run_export(model_path, view);
  if (translate_cmd->parsed()) return run_translate(fsm_path);
  return kExitUsage;
}

#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thingc/document.hpp"
#include "thingc/parser.hpp"

namespace test {

inline std::string models_dir() { return THINGC_MODELS_DIR; }
inline std::string golden_dir() { return THINGC_GOLDEN_DIR; }
inline std::string tool_path() { return THINGC_TOOL; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline thingc::ModelDocument load_model(const std::string& name) {
  std::string path = models_dir() + "/" + name;
  thingc::ParseResult result = thingc::parse(read_file(path), path);
  if (!result.ok()) {
    std::string msg = "corpus file failed to parse: " + path;
    for (const auto& d : result.diagnostics) msg += "\n  " + d.render();
    throw std::runtime_error(msg);
  }
  return std::move(*result.document);
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the CLI with stdout/stderr captured through temp files.
inline CommandResult run_tool(const std::string& args) {
  static int counter = 0;
  std::string out_path = "/tmp/thingc_test_out_" + std::to_string(counter);
  std::string err_path = "/tmp/thingc_test_err_" + std::to_string(counter);
  ++counter;
  std::string command =
      tool_path() + " " + args + " > " + out_path + " 2> " + err_path;
  int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(status);
  result.out = read_file(out_path);
  result.err = read_file(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

inline int count_occurrences(const std::string& haystack, const std::string& needle) {
  int count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

// ---------------------------------------------------------------------------
// Random valid documents for round-trip checks.
// ---------------------------------------------------------------------------

class DocumentGenerator {
 public:
  explicit DocumentGenerator(std::mt19937& rng) : rng_(rng) {}

  thingc::ModelDocument generate() {
    using namespace thingc;
    StaticModel model("random_model");
    int machine_count = pick(1, 5);
    std::vector<MachineId> machines;
    for (int i = 0; i < machine_count; ++i) {
      std::optional<MachineId> parent;
      if (!machines.empty() && chance(0.3)) parent = choose(machines);
      machines.push_back(model.add_machine(parent, "m" + std::to_string(i)));
    }

    int model_storages = pick(0, 2);
    for (int i = 0; i < model_storages; ++i)
      model.add_storage(std::nullopt, "g" + std::to_string(i), random_literal());
    for (std::size_t m = 0; m < machines.size(); ++m) {
      int n = pick(0, 2);
      for (int i = 0; i < n; ++i)
        model.add_storage(machines[m], "s" + std::to_string(i),
                          chance(0.5) ? std::optional<Thing>(random_literal()) : std::nullopt);
    }

    for (MachineId m : machines) {
      for (StageKind kind : kAllStageKinds) {
        if (!chance(0.6)) continue;
        Annotation ann;
        std::vector<std::string> scope = visible_storages(model, m);
        if (chance(0.3)) ann.guard = random_bool_expr(scope);
        if (chance(0.2)) ann.delay = Expr::literal(Thing::integer(pick(0, 9)));
        if (chance(0.3) && !scope.empty())
          ann.actions.push_back(
              Action::assign(choose(scope), random_int_expr(scope)));
        if (chance(0.15)) ann.actions.push_back(Action::transform(random_int_expr(scope)));
        if (kind == StageKind::Create && chance(0.6)) {
          int n = pick(1, 3);
          for (int i = 0; i < n; ++i) ann.emit.push_back(random_literal());
        }
        model.add_stage(m, kind, std::move(ann));
      }
    }

    add_random_flows(model);
    add_random_triggers(model);

    ModelDocument doc{std::move(model), {}, std::nullopt, {}};
    add_random_events(doc);
    add_random_behavior(doc);
    add_random_inputs(doc);
    return doc;
  }

 private:
  bool chance(double p) { return std::uniform_real_distribution<>(0, 1)(rng_) < p; }
  int pick(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng_); }
  template <typename T>
  T choose(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(pick(0, static_cast<int>(items.size()) - 1))];
  }

  thingc::Thing random_literal() {
    using thingc::Thing;
    switch (pick(0, 3)) {
      case 0: return Thing::integer(pick(-20, 20));
      case 1: return Thing::boolean(chance(0.5));
      case 2: return Thing::symbol(std::string("sym") + std::to_string(pick(0, 5)));
      default: return Thing::text("t" + std::to_string(pick(0, 5)));
    }
  }

  std::vector<std::string> visible_storages(const thingc::StaticModel& model,
                                            thingc::MachineId scope) {
    std::vector<std::string> names;
    std::optional<thingc::MachineId> cur = scope;
    while (cur) {
      for (thingc::StorageId sid : model.machine(*cur).storages)
        names.push_back(model.storage(sid).name);
      cur = model.machine(*cur).parent;
    }
    for (const thingc::Storage& s : model.storages())
      if (!s.owner) names.push_back(s.name);
    return names;
  }

  thingc::ExprPtr random_int_expr(const std::vector<std::string>& scope, int depth = 0) {
    using namespace thingc;
    if (depth >= 2 || chance(0.4)) {
      if (!scope.empty() && chance(0.4)) return Expr::name(choose(scope));
      if (chance(0.2)) return Expr::now();
      return Expr::literal(Thing::integer(pick(0, 9)));
    }
    if (chance(0.15)) return Expr::unary(UnaryOp::Neg, random_int_expr(scope, depth + 1));
    BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                      BinaryOp::Mod};
    return Expr::binary(ops[pick(0, 4)], random_int_expr(scope, depth + 1),
                        random_int_expr(scope, depth + 1));
  }

  thingc::ExprPtr random_bool_expr(const std::vector<std::string>& scope, int depth = 0) {
    using namespace thingc;
    if (depth >= 2) {
      BinaryOp cmps[] = {BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Lt,
                         BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge};
      return Expr::binary(cmps[pick(0, 5)], random_int_expr(scope, 2),
                          random_int_expr(scope, 2));
    }
    switch (pick(0, 3)) {
      case 0: return Expr::unary(UnaryOp::Not, random_bool_expr(scope, depth + 1));
      case 1:
        return Expr::binary(BinaryOp::And, random_bool_expr(scope, depth + 1),
                            random_bool_expr(scope, depth + 1));
      case 2:
        return Expr::binary(BinaryOp::Or, random_bool_expr(scope, depth + 1),
                            random_bool_expr(scope, depth + 1));
      default:
        return random_bool_expr(scope, 2);
    }
  }

  void add_random_flows(thingc::StaticModel& model) {
    using namespace thingc;
    struct Candidate {
      Endpoint from, to;
    };
    std::vector<Candidate> candidates;
    for (const Stage& a : model.stages()) {
      for (const Stage& b : model.stages()) {
        if (a.id == b.id) continue;
        if (flow_legal_stage_pair(a.kind, b.kind, a.owner == b.owner))
          candidates.push_back({Endpoint{a.id}, Endpoint{b.id}});
      }
      for (const Storage& s : model.storages()) {
        if (flow_legal_into_storage(a.kind)) candidates.push_back({Endpoint{a.id}, Endpoint{s.id}});
        if (flow_legal_from_storage(a.kind)) candidates.push_back({Endpoint{s.id}, Endpoint{a.id}});
      }
    }
    std::shuffle(candidates.begin(), candidates.end(), rng_);
    int n = std::min<int>(pick(0, 8), static_cast<int>(candidates.size()));
    for (int i = 0; i < n; ++i) model.add_flow(candidates[i].from, candidates[i].to);
  }

  void add_random_triggers(thingc::StaticModel& model) {
    using namespace thingc;
    std::vector<StageId> sources, targets;
    for (const Stage& s : model.stages()) {
      sources.push_back(s.id);
      if (trigger_target_legal(s.kind)) targets.push_back(s.id);
    }
    if (sources.empty() || targets.empty()) return;
    int n = pick(0, 4);
    for (int i = 0; i < n; ++i) {
      StageId from = choose(sources);
      StageId to = choose(targets);
      ExprPtr condition;
      if (chance(0.4))
        condition = random_bool_expr(visible_storages(model, model.stage(from).owner));
      model.add_trigger(from, to, condition);
    }
  }

  void add_random_events(thingc::ModelDocument& doc) {
    using namespace thingc;
    const StaticModel& model = doc.model;
    if (model.stages().empty()) return;
    // Adjacency over stages and storages through the model's edges.
    auto neighbors = [&](const ElementRef& node) {
      std::vector<ElementRef> out;
      auto endpoint_ref = [](const Endpoint& e) -> ElementRef {
        if (const StageId* s = std::get_if<StageId>(&e)) return *s;
        return std::get<StorageId>(e);
      };
      auto matches = [&](const Endpoint& e) {
        ElementRef r = endpoint_ref(e);
        return r == node;
      };
      for (const Flow& f : model.flows()) {
        if (matches(f.from)) out.push_back(endpoint_ref(f.to));
        if (matches(f.to)) out.push_back(endpoint_ref(f.from));
      }
      for (const Trigger& t : model.triggers()) {
        if (node == ElementRef{t.from}) out.push_back(ElementRef{t.to});
        if (node == ElementRef{t.to}) out.push_back(ElementRef{t.from});
      }
      return out;
    };

    int count = pick(0, 3);
    for (int e = 0; e < count; ++e) {
      std::vector<StageId> all;
      for (const Stage& s : model.stages()) all.push_back(s.id);
      std::vector<ElementRef> region{ElementRef{choose(all)}};
      int grow = pick(0, 3);
      for (int i = 0; i < grow; ++i) {
        std::vector<ElementRef> frontier;
        for (const ElementRef& node : region)
          for (const ElementRef& n : neighbors(node)) frontier.push_back(n);
        if (frontier.empty()) break;
        region.push_back(choose(frontier));
      }
      Region r = define_region(model, region);
      Time duration = r.is_generic() ? 0 : pick(0, 5);
      doc.events.push_back(define_event(model, "E" + std::to_string(e), std::move(r),
                                        duration));
    }
  }

  void add_random_behavior(thingc::ModelDocument& doc) {
    using namespace thingc;
    if (doc.events.empty() || !chance(0.7)) return;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = 0; i < doc.events.size(); ++i)
      for (std::size_t j = i + 1; j < doc.events.size(); ++j)
        if (chance(0.4)) edges.emplace_back(doc.events[i].name, doc.events[j].name);
    std::vector<std::string> repeats;
    for (const EventDef& e : doc.events)
      if (chance(0.3)) repeats.push_back(e.name);
    doc.behavior = build_behavior(doc.events, edges, repeats);
  }

  void add_random_inputs(thingc::ModelDocument& doc) {
    using namespace thingc;
    std::vector<StageId> points;
    std::set<std::uint32_t> used_machines;
    for (const Stage& s : doc.model.stages()) {
      if (s.kind != StageKind::Transfer && s.kind != StageKind::Create) continue;
      if (used_machines.count(s.owner.index)) continue;  // one binding per machine
      if (!chance(0.3)) continue;
      used_machines.insert(s.owner.index);
      std::string name = doc.model.machine_path(s.owner);
      doc.model.bind_input(name, s.id);
      std::vector<Thing> things;
      int n = pick(0, 4);
      for (int i = 0; i < n; ++i) things.push_back(random_literal());
      doc.inputs.push_back(InputBinding{
          name, doc.model.stage_path(s.id), s.id, std::move(things)});
    }
  }

  std::mt19937& rng_;
};

}  // namespace test

#include "thingc/validator.hpp"

#include <algorithm>
#include <map>

namespace thingc {

std::string ValidationReport::render() const {
  std::string out;
  for (const Violation& v : violations) {
    out += v.rule;
    out += " at ";
    out += v.element;
    out += ": ";
    out += v.message;
    out += '\n';
  }
  return out;
}

ValidationReport validate_structure(const StaticModel& model) {
  ValidationReport report;
  auto violate = [&](std::string element, std::string rule, std::string message) {
    report.violations.push_back({std::move(element), std::move(rule), std::move(message)});
  };

  for (const Flow& f : model.flows()) {
    const StageId* fs = std::get_if<StageId>(&f.from);
    const StageId* ts = std::get_if<StageId>(&f.to);
    std::string path = model.endpoint_path(f.from) + " -> " + model.endpoint_path(f.to);
    if (fs && ts) {
      bool same = model.same_machine(*fs, *ts);
      StageKind fk = model.stage(*fs).kind;
      StageKind tk = model.stage(*ts).kind;
      if (!flow_legal_stage_pair(fk, tk, same))
        violate(path, "IllegalFlow",
                std::string(stage_kind_name(fk)) + " may not flow to " + stage_kind_name(tk) +
                    (same ? " within one machine" : " across machines"));
    } else if (fs && !ts) {
      if (!flow_legal_into_storage(model.stage(*fs).kind))
        violate(path, "IllegalFlow",
                std::string(stage_kind_name(model.stage(*fs).kind)) +
                    " may not flow into storage");
    } else if (!fs && ts) {
      if (!flow_legal_from_storage(model.stage(*ts).kind))
        violate(path, "IllegalFlow",
                std::string("storage may not flow into ") +
                    stage_kind_name(model.stage(*ts).kind));
    } else {
      violate(path, "IllegalFlow", "storage may not flow into storage");
    }
  }

  for (const Trigger& t : model.triggers()) {
    if (!trigger_target_legal(model.stage(t.to).kind))
      violate(model.stage_path(t.from) + " -> " + model.stage_path(t.to),
              "IllegalTriggerTarget",
              std::string("trigger target must be create or process, not ") +
                  stage_kind_name(model.stage(t.to).kind));
  }

  // The machine-parent relation must be a forest.
  for (const Machine& m : model.machines()) {
    std::set<std::uint32_t> seen{m.id.index};
    std::optional<MachineId> cur = m.parent;
    while (cur) {
      if (!seen.insert(cur->index).second) {
        violate(model.machine_path(m.id), "BrokenHierarchy",
                "machine is its own ancestor");
        break;
      }
      cur = model.machine(*cur).parent;
    }
  }

  // At most one stage of each kind per machine.
  std::map<std::pair<std::uint32_t, StageKind>, int> kind_counts;
  for (const Stage& s : model.stages()) kind_counts[{s.owner.index, s.kind}]++;
  for (const auto& [key, count] : kind_counts) {
    if (count > 1)
      violate(model.machine_path(MachineId{key.first}), "DuplicateStageKind",
              std::string("machine has ") + std::to_string(count) + " " +
                  stage_kind_name(key.second) + " stages");
  }

  // Storage names unique within their owner.
  std::map<std::pair<std::string, std::string>, int> storage_counts;
  for (const Storage& s : model.storages()) {
    std::string owner = s.owner ? model.machine_path(*s.owner) : "";
    storage_counts[{owner, s.name}]++;
  }
  for (const auto& [key, count] : storage_counts) {
    if (count > 1)
      violate(key.first.empty() ? key.second : key.first + "." + key.second,
              "DuplicateStorageName", "storage name declared " + std::to_string(count) + " times");
  }

  report.ok = report.violations.empty();
  return report;
}

std::uint64_t edge_key(const EdgeRef& e) {
  if (const FlowId* f = std::get_if<FlowId>(&e)) return (std::uint64_t{1} << 32) | f->index;
  return (std::uint64_t{2} << 32) | std::get<TriggerId>(e).index;
}

std::string FinitenessReport::render() const {
  std::string out = "acyclic: ";
  out += acyclic ? "true" : "false";
  out += '\n';
  for (const CyclePath& c : cycles) {
    out += "cycle: ";
    out += c.render;
    out += '\n';
  }
  if (truncated) out += "(cycle enumeration capped)\n";
  return out;
}

namespace {

// Graph node: a stage, with transfers split into entry and exit ports.
struct GraphEdge {
  std::uint32_t from;
  std::uint32_t to;
  EdgeRef ref;
};

struct ActivationGraph {
  std::uint32_t node_count = 0;
  std::vector<GraphEdge> edges;
  std::vector<std::string> node_names;
};

ActivationGraph build_graph(const StaticModel& model,
                            const std::set<std::uint64_t>& repeat_marked) {
  ActivationGraph g;
  std::vector<std::uint32_t> entry_node(model.stages().size());
  std::vector<std::uint32_t> exit_node(model.stages().size());
  for (const Stage& s : model.stages()) {
    entry_node[s.id.index] = g.node_count++;
    g.node_names.push_back(model.stage_path(s.id));
    if (s.kind == StageKind::Transfer) {
      exit_node[s.id.index] = g.node_count++;
      g.node_names.push_back(model.stage_path(s.id) + "(out)");
    } else {
      exit_node[s.id.index] = entry_node[s.id.index];
    }
  }

  auto add_edge = [&](std::uint32_t a, std::uint32_t b, EdgeRef ref) {
    g.edges.push_back({a, b, ref});
  };

  for (const Flow& f : model.flows()) {
    const StageId* fs = std::get_if<StageId>(&f.from);
    const StageId* ts = std::get_if<StageId>(&f.to);
    if (!fs || !ts) continue;  // storage edges carry data, not activation
    if (repeat_marked.count(edge_key(f.id))) continue;
    bool same = model.same_machine(*fs, *ts);
    const Stage& from = model.stage(*fs);
    const Stage& to = model.stage(*ts);
    // An outgoing flow leaves a transfer's entry port when it continues
    // inside the machine (input role); any hop to another transfer leaves
    // the exit port. Mirrored for the receiving side, so a pass-through
    // machine's single transfer never closes a loop on its own.
    bool hop = from.kind == StageKind::Transfer && to.kind == StageKind::Transfer;
    std::uint32_t src = from.kind == StageKind::Transfer
                            ? ((same && !hop) ? entry_node[fs->index] : exit_node[fs->index])
                            : exit_node[fs->index];
    std::uint32_t dst = to.kind == StageKind::Transfer
                            ? ((same && !hop) ? exit_node[ts->index] : entry_node[ts->index])
                            : entry_node[ts->index];
    add_edge(src, dst, EdgeRef{f.id});
  }
  for (const Trigger& t : model.triggers()) {
    if (repeat_marked.count(edge_key(t.id))) continue;
    const Stage& from = model.stage(t.from);
    add_edge(exit_node[t.from.index], entry_node[t.to.index], EdgeRef{t.id});
    if (from.kind == StageKind::Transfer)
      add_edge(entry_node[t.from.index], entry_node[t.to.index], EdgeRef{t.id});
  }
  return g;
}

// DFS-based enumeration of elementary cycles: each cycle is reported once,
// rooted at its smallest node. Bounded by kMaxEnumeratedCycles.
class CycleEnumerator {
 public:
  CycleEnumerator(const ActivationGraph& g, std::vector<CyclePath>& out, bool& truncated)
      : g_(g), out_(out), truncated_(truncated) {
    adjacency_.resize(g.node_count);
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      adjacency_[g.edges[i].from].push_back(static_cast<std::uint32_t>(i));
  }

  void run() {
    on_path_.assign(g_.node_count, false);
    for (std::uint32_t root = 0; root < g_.node_count; ++root) {
      root_ = root;
      dfs(root);
      if (truncated_) return;
    }
  }

 private:
  void dfs(std::uint32_t node) {
    on_path_[node] = true;
    for (std::uint32_t edge_index : adjacency_[node]) {
      const GraphEdge& e = g_.edges[edge_index];
      if (e.to < root_) continue;  // cycles through smaller nodes were already found
      if (e.to == root_) {
        path_.push_back(edge_index);
        emit();
        path_.pop_back();
        if (truncated_) break;
        continue;
      }
      if (on_path_[e.to]) continue;
      path_.push_back(edge_index);
      dfs(e.to);
      path_.pop_back();
      if (truncated_) break;
    }
    on_path_[node] = false;
  }

  void emit() {
    if (out_.size() >= kMaxEnumeratedCycles) {
      truncated_ = true;
      return;
    }
    CyclePath cycle;
    std::string render;
    for (std::uint32_t edge_index : path_) {
      const GraphEdge& e = g_.edges[edge_index];
      cycle.edges.push_back(e.ref);
      if (render.empty()) render = g_.node_names[e.from];
      render += " -> " + g_.node_names[e.to];
    }
    cycle.render = std::move(render);
    out_.push_back(std::move(cycle));
  }

  const ActivationGraph& g_;
  std::vector<CyclePath>& out_;
  bool& truncated_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::vector<bool> on_path_;
  std::vector<std::uint32_t> path_;
  std::uint32_t root_ = 0;
};

}  // namespace

FinitenessReport check_finiteness(const StaticModel& model,
                                  const std::set<std::uint64_t>& repeat_marked) {
  FinitenessReport report;
  report.repeat_marked = repeat_marked;
  ActivationGraph g = build_graph(model, repeat_marked);
  CycleEnumerator(g, report.cycles, report.truncated).run();
  // The boolean verdict is exact even if enumeration was capped.
  report.acyclic = report.cycles.empty();
  if (report.truncated && report.cycles.empty()) report.acyclic = false;
  return report;
}

}  // namespace thingc

#include "thingc/export.hpp"

#include <sstream>

#include <json.hpp>

namespace thingc {

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string stage_node(StageId id) { return "s" + std::to_string(id.index); }
std::string storage_node(StorageId id) { return "d" + std::to_string(id.index); }

void render_machine(const StaticModel& model, MachineId id, int depth,
                    std::ostringstream& out) {
  auto indent = [&](int d) {
    for (int i = 0; i < d; ++i) out << "  ";
  };
  const Machine& m = model.machine(id);
  indent(depth);
  out << "subgraph cluster_m" << id.index << " {\n";
  indent(depth + 1);
  out << "label=" << dot_quote(m.name) << ";\n";
  for (const Stage& s : model.stages()) {
    if (s.owner != id) continue;
    indent(depth + 1);
    out << stage_node(s.id) << " [label=" << dot_quote(stage_kind_name(s.kind)) << "];\n";
  }
  for (StorageId sid : m.storages) {
    indent(depth + 1);
    out << storage_node(sid) << " [label=" << dot_quote(model.storage(sid).name)
        << ", shape=cylinder];\n";
  }
  for (MachineId child : m.children) render_machine(model, child, depth + 1, out);
  indent(depth);
  out << "}\n";
}

std::string endpoint_node(const Endpoint& e) {
  if (const StageId* s = std::get_if<StageId>(&e)) return stage_node(*s);
  return storage_node(std::get<StorageId>(e));
}

void render_static_body(const StaticModel& model, std::ostringstream& out) {
  out << "  node [shape=box, style=rounded];\n";
  for (const Storage& s : model.storages()) {
    if (s.owner) continue;
    out << "  " << storage_node(s.id) << " [label=" << dot_quote(s.name)
        << ", shape=cylinder];\n";
  }
  for (MachineId root : model.roots()) render_machine(model, root, 1, out);
  for (const Flow& f : model.flows())
    out << "  " << endpoint_node(f.from) << " -> " << endpoint_node(f.to) << ";\n";
  for (const Trigger& t : model.triggers())
    out << "  " << stage_node(t.from) << " -> " << stage_node(t.to) << " [style=dashed];\n";
}

}  // namespace

std::string export_dot_static(const StaticModel& model) {
  std::ostringstream out;
  out << "digraph " << dot_quote(model.name()) << " {\n";
  render_static_body(model, out);
  out << "}\n";
  return out.str();
}

std::string export_dot_events(const StaticModel& model, std::span<const EventDef> events) {
  for (const EventDef& e : events)
    if (!region_in_model(model, e.region))
      throw DynamicsError(DynamicsError::Kind::ForeignRegion,
                          "event `" + e.name + "` references elements outside the model");
  std::ostringstream out;
  out << "digraph " << dot_quote(model.name()) << " {\n";
  render_static_body(model, out);
  for (std::size_t i = 0; i < events.size(); ++i) {
    const EventDef& e = events[i];
    std::string node = "e" + std::to_string(i);
    out << "  " << node << " [label=" << dot_quote(e.name)
        << ", shape=note, style=dashed];\n";
    for (StageId s : e.region.stages)
      out << "  " << node << " -> " << stage_node(s)
          << " [style=dotted, arrowhead=none];\n";
    for (StorageId s : e.region.storages)
      out << "  " << node << " -> " << storage_node(s)
          << " [style=dotted, arrowhead=none];\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot_behavior(const BehaviorGraph& behavior) {
  std::ostringstream out;
  out << "digraph behavior {\n";
  out << "  node [shape=box];\n";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < behavior.events.size(); ++i) {
    names.push_back("e" + std::to_string(i));
    out << "  " << names.back() << " [label=" << dot_quote(behavior.events[i].name)
        << "];\n";
  }
  auto node_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < behavior.events.size(); ++i)
      if (behavior.events[i].name == name) return names[i];
    return std::string("?");
  };
  for (const auto& [a, b] : behavior.edges)
    out << "  " << node_of(a) << " -> " << node_of(b) << ";\n";
  for (const std::string& r : behavior.repeats)
    out << "  " << node_of(r) << " -> " << node_of(r) << ";\n";
  out << "}\n";
  return out.str();
}

std::optional<TraceFormat> trace_format_from(const std::string& name) {
  if (name == "jsonl") return TraceFormat::Jsonl;
  if (name == "tsv") return TraceFormat::Tsv;
  return std::nullopt;
}

namespace {

const char* verdict_name(Verdict v) {
  return v == Verdict::Accepted ? "accepted" : "rejected";
}

const char* limit_name(LimitKind k) {
  return k == LimitKind::MaxInstances ? "max-instances" : "max-clock";
}

std::string export_jsonl(const StaticModel& model, const Trace& trace) {
  using json = nlohmann::ordered_json;
  std::string out;
  for (const GenericEventInstance& inst : trace.instances) {
    json record;
    record["seq"] = inst.seq;
    record["stage"] = model.stage_path(inst.stage);
    record["kind"] = stage_kind_name(inst.kind);
    record["thing"] = inst.thing.to_text();
    record["start"] = inst.start;
    record["end"] = inst.end;
    out += record.dump();
    out += '\n';
  }
  json summary;
  summary["summary"] = true;
  summary["instances"] = trace.instances.size();
  json outputs = json::array();
  for (const auto& [stage, things] : trace.outputs) {
    json entry;
    entry["stage"] = model.stage_path(stage);
    json list = json::array();
    for (const Thing& t : things) list.push_back(t.to_text());
    entry["things"] = list;
    outputs.push_back(entry);
  }
  summary["outputs"] = outputs;
  json storages = json::object();
  for (const auto& [name, value] : trace.final_storages) storages[name] = value.to_text();
  summary["finalStorages"] = storages;
  if (trace.verdict)
    summary["verdict"] = verdict_name(*trace.verdict);
  else
    summary["verdict"] = nullptr;
  if (trace.limit_hit) summary["limit"] = limit_name(*trace.limit_hit);
  out += summary.dump();
  out += '\n';
  return out;
}

std::string export_tsv(const StaticModel& model, const Trace& trace) {
  std::string out;
  for (const GenericEventInstance& inst : trace.instances) {
    out += std::to_string(inst.seq);
    out += '\t';
    out += model.stage_path(inst.stage);
    out += '\t';
    out += stage_kind_name(inst.kind);
    out += '\t';
    out += inst.thing.to_text();
    out += '\t';
    out += std::to_string(inst.start);
    out += '\t';
    out += std::to_string(inst.end);
    out += '\n';
  }
  for (const auto& [stage, things] : trace.outputs) {
    for (const Thing& t : things) {
      out += "# output\t";
      out += model.stage_path(stage);
      out += '\t';
      out += t.to_text();
      out += '\n';
    }
  }
  for (const auto& [name, value] : trace.final_storages) {
    out += "# storage\t";
    out += name;
    out += '\t';
    out += value.to_text();
    out += '\n';
  }
  out += "# verdict\t";
  out += trace.verdict ? verdict_name(*trace.verdict) : "-";
  out += '\n';
  if (trace.limit_hit) {
    out += "# limit\t";
    out += limit_name(*trace.limit_hit);
    out += '\n';
  }
  out += "# instances\t";
  out += std::to_string(trace.instances.size());
  out += '\n';
  return out;
}

}  // namespace

std::string export_trace(const StaticModel& model, const Trace& trace, TraceFormat format) {
  return format == TraceFormat::Jsonl ? export_jsonl(model, trace)
                                      : export_tsv(model, trace);
}

}  // namespace thingc

#include "thingc/dynamics.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace thingc {

bool Region::contains(StageId id) const {
  return std::binary_search(stages.begin(), stages.end(), id);
}

bool Region::contains(StorageId id) const {
  return std::binary_search(storages.begin(), storages.end(), id);
}

bool BehaviorGraph::has_event(const std::string& name) const {
  return find_event(name) != nullptr;
}

const EventDef* BehaviorGraph::find_event(const std::string& name) const {
  for (const EventDef& e : events)
    if (e.name == name) return &e;
  return nullptr;
}

bool BehaviorGraph::is_repeat(const std::string& name) const {
  return std::find(repeats.begin(), repeats.end(), name) != repeats.end();
}

namespace {

// Node key over stages and storages for connectivity checks.
struct Node {
  bool is_stage;
  std::uint32_t index;
  auto operator<=>(const Node&) const = default;
};

Node node_of(const Endpoint& e) {
  if (const StageId* s = std::get_if<StageId>(&e)) return Node{true, s->index};
  return Node{false, std::get<StorageId>(e).index};
}

std::string render_component(const StaticModel& model, const std::vector<Node>& nodes) {
  std::string out = "{";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i > 0) out += ", ";
    out += nodes[i].is_stage ? model.stage_path(StageId{nodes[i].index})
                             : model.storage_path(StorageId{nodes[i].index});
  }
  out += "}";
  return out;
}

Region close_region(const StaticModel& model, std::set<Node> nodes) {
  Region region;
  for (const Node& n : nodes) {
    if (n.is_stage)
      region.stages.push_back(StageId{n.index});
    else
      region.storages.push_back(StorageId{n.index});
  }
  // Induced closure: all model edges whose endpoints both lie in the region.
  for (const Flow& f : model.flows()) {
    if (nodes.count(node_of(f.from)) && nodes.count(node_of(f.to)))
      region.flows.push_back(f.id);
  }
  for (const Trigger& t : model.triggers()) {
    if (nodes.count(Node{true, t.from.index}) && nodes.count(Node{true, t.to.index}))
      region.triggers.push_back(t.id);
  }
  return region;
}

void check_connected(const StaticModel& model, const Region& region) {
  std::set<Node> nodes;
  for (StageId s : region.stages) nodes.insert(Node{true, s.index});
  for (StorageId s : region.storages) nodes.insert(Node{false, s.index});
  if (nodes.empty())
    throw DynamicsError(DynamicsError::Kind::EmptyRegion, "region has no elements");

  std::map<Node, std::vector<Node>> adjacency;
  auto connect = [&](Node a, Node b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  };
  for (FlowId fid : region.flows) {
    const Flow& f = model.flow(fid);
    connect(node_of(f.from), node_of(f.to));
  }
  for (TriggerId tid : region.triggers) {
    const Trigger& t = model.trigger(tid);
    connect(Node{true, t.from.index}, Node{true, t.to.index});
  }

  std::set<Node> seen;
  std::vector<Node> stack{*nodes.begin()};
  while (!stack.empty()) {
    Node n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    for (Node m : adjacency[n])
      if (nodes.count(m)) stack.push_back(m);
  }
  if (seen.size() != nodes.size()) {
    std::vector<Node> reached(seen.begin(), seen.end());
    std::vector<Node> missing;
    for (const Node& n : nodes)
      if (!seen.count(n)) missing.push_back(n);
    throw DynamicsError(DynamicsError::Kind::DisconnectedRegion,
                        "region is not weakly connected; components " +
                            render_component(model, reached) + " and " +
                            render_component(model, missing));
  }
}

}  // namespace

Region define_region(const StaticModel& model, std::span<const ElementRef> elements) {
  if (elements.empty())
    throw DynamicsError(DynamicsError::Kind::EmptyRegion, "region has no elements");
  std::set<Node> nodes;
  for (const ElementRef& e : elements) {
    if (const StageId* s = std::get_if<StageId>(&e)) {
      if (s->index >= model.stages().size())
        throw DynamicsError(DynamicsError::Kind::ForeignRegion, "unknown stage in region");
      nodes.insert(Node{true, s->index});
    } else if (const StorageId* d = std::get_if<StorageId>(&e)) {
      if (d->index >= model.storages().size())
        throw DynamicsError(DynamicsError::Kind::ForeignRegion, "unknown storage in region");
      nodes.insert(Node{false, d->index});
    } else if (const FlowId* f = std::get_if<FlowId>(&e)) {
      if (f->index >= model.flows().size())
        throw DynamicsError(DynamicsError::Kind::ForeignRegion, "unknown flow in region");
      const Flow& flow = model.flow(*f);
      nodes.insert(node_of(flow.from));
      nodes.insert(node_of(flow.to));
    } else {
      const TriggerId t = std::get<TriggerId>(e);
      if (t.index >= model.triggers().size())
        throw DynamicsError(DynamicsError::Kind::ForeignRegion, "unknown trigger in region");
      const Trigger& trig = model.trigger(t);
      nodes.insert(Node{true, trig.from.index});
      nodes.insert(Node{true, trig.to.index});
    }
  }
  Region region = close_region(model, std::move(nodes));
  check_connected(model, region);
  return region;
}

EventDef define_event(const StaticModel& model, std::string name, Region region,
                      Time duration, std::optional<std::string> label) {
  if (duration < 0)
    throw DynamicsError(DynamicsError::Kind::NegativeDuration,
                        "event `" + name + "` has negative duration");
  if (region.is_generic() && duration != 0)
    throw DynamicsError(DynamicsError::Kind::NonzeroGenericDuration,
                        "generic event `" + name + "` must have duration 0");
  check_connected(model, region);
  EventDef e;
  e.name = std::move(name);
  e.label = std::move(label);
  e.region = std::move(region);
  e.duration = duration;
  return e;
}

EventDef compose(const StaticModel& model, std::span<const EventDef> events,
                 std::string name) {
  if (events.size() < 2)
    throw DynamicsError(DynamicsError::Kind::TooFewEvents,
                        "a composite needs at least two events");
  std::set<Node> nodes;
  Time duration = 0;
  for (const EventDef& e : events) {
    for (StageId s : e.region.stages) nodes.insert(Node{true, s.index});
    for (StorageId s : e.region.storages) nodes.insert(Node{false, s.index});
    duration = std::max(duration, e.duration);
  }
  Region region = close_region(model, std::move(nodes));
  try {
    check_connected(model, region);
  } catch (const DynamicsError& err) {
    throw DynamicsError(DynamicsError::Kind::DisconnectedComposite, err.what());
  }
  EventDef e;
  e.name = std::move(name);
  e.region = std::move(region);
  e.duration = duration;
  return e;
}

BehaviorGraph build_behavior(std::vector<EventDef> events,
                             std::vector<std::pair<std::string, std::string>> edges,
                             std::vector<std::string> repeats) {
  BehaviorGraph graph;
  graph.events = std::move(events);
  auto require_event = [&](const std::string& n) {
    if (!graph.has_event(n))
      throw DynamicsError(DynamicsError::Kind::UnknownEvent, "unknown event `" + n + "`");
  };
  for (const std::string& r : repeats) {
    require_event(r);
    if (!graph.is_repeat(r)) graph.repeats.push_back(r);
  }
  for (auto& [a, b] : edges) {
    require_event(a);
    require_event(b);
    if (a == b) {
      // A self-edge is the reflexive-arrow shorthand; fold it into repeats.
      if (!graph.is_repeat(a))
        throw DynamicsError(DynamicsError::Kind::CyclicBehavior,
                            "self edge on `" + a + "` without a repeat mark");
      continue;
    }
    graph.edges.emplace_back(a, b);
  }

  // Kahn's algorithm; leftover nodes expose a cycle.
  std::map<std::string, int> indegree;
  for (const EventDef& e : graph.events) indegree[e.name] = 0;
  for (const auto& [a, b] : graph.edges) indegree[b]++;
  std::vector<std::string> queue;
  for (const auto& [name, deg] : indegree)
    if (deg == 0) queue.push_back(name);
  std::size_t processed = 0;
  while (!queue.empty()) {
    std::string n = queue.back();
    queue.pop_back();
    ++processed;
    for (const auto& [a, b] : graph.edges)
      if (a == n && --indegree[b] == 0) queue.push_back(b);
  }
  if (processed != indegree.size()) {
    std::string cycle;
    for (const auto& [name, deg] : indegree)
      if (deg > 0) {
        if (!cycle.empty()) cycle += ", ";
        cycle += name;
      }
    throw DynamicsError(DynamicsError::Kind::CyclicBehavior,
                        "behavior edges form a cycle among {" + cycle + "}");
  }
  return graph;
}

std::vector<std::string> topological_order(const BehaviorGraph& behavior) {
  std::map<std::string, int> indegree;
  std::vector<std::string> order;
  for (const EventDef& e : behavior.events) indegree[e.name] = 0;
  for (const auto& [a, b] : behavior.edges) indegree[b]++;
  // Stable: prefer declaration order among ready nodes.
  std::vector<std::string> names;
  for (const EventDef& e : behavior.events) names.push_back(e.name);
  std::set<std::string> emitted;
  while (order.size() < names.size()) {
    bool advanced = false;
    for (const std::string& n : names) {
      if (emitted.count(n) || indegree[n] != 0) continue;
      order.push_back(n);
      emitted.insert(n);
      for (const auto& [a, b] : behavior.edges)
        if (a == n) indegree[b]--;
      advanced = true;
    }
    if (!advanced) break;
  }
  return order;
}

bool region_in_model(const StaticModel& model, const Region& region) {
  for (StageId s : region.stages)
    if (s.index >= model.stages().size()) return false;
  for (StorageId s : region.storages)
    if (s.index >= model.storages().size()) return false;
  for (FlowId f : region.flows)
    if (f.index >= model.flows().size()) return false;
  for (TriggerId t : region.triggers)
    if (t.index >= model.triggers().size()) return false;
  return true;
}

}  // namespace thingc

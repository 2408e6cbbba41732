#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "thingc/model.hpp"

namespace thingc {

using Time = std::int64_t;

using ElementRef = std::variant<StageId, StorageId, FlowId, TriggerId>;

/// A weakly connected subdiagram of the static model. Edge sets always hold
/// the induced closure: every model flow/trigger whose endpoints both lie in
/// the region's node set.
struct Region {
  std::vector<StageId> stages;      // sorted, unique
  std::vector<StorageId> storages;  // sorted, unique
  std::vector<FlowId> flows;
  std::vector<TriggerId> triggers;

  bool contains(StageId id) const;
  bool contains(StorageId id) const;
  bool is_generic() const { return stages.size() == 1 && storages.empty(); }
  bool operator==(const Region&) const = default;
};

/// A time-injected region. Generic events (single-stage regions) are
/// instantaneous and must declare duration 0.
struct EventDef {
  std::string name;
  std::optional<std::string> label;
  Region region;
  Time duration = 0;
};

/// Chronology of declared events: a precedence DAG plus repeat marks.
/// A repeat mark is shorthand for a sequence of distinct occurrences over the
/// same region; an event itself never repeats.
struct BehaviorGraph {
  std::vector<EventDef> events;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> repeats;

  bool has_event(const std::string& name) const;
  const EventDef* find_event(const std::string& name) const;
  bool is_repeat(const std::string& name) const;
};

struct DynamicsError : std::runtime_error {
  enum class Kind {
    EmptyRegion,
    DisconnectedRegion,
    NegativeDuration,
    NonzeroGenericDuration,
    TooFewEvents,
    DisconnectedComposite,
    CyclicBehavior,
    UnknownEvent,
    ForeignRegion,
  };
  Kind kind;
  DynamicsError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

/// Builds a region from element ids. Endpoints of listed edges join the node
/// set; the result must be non-empty and weakly connected under the model's
/// edges between its nodes.
Region define_region(const StaticModel& model, std::span<const ElementRef> elements);

EventDef define_event(const StaticModel& model, std::string name, Region region,
                      Time duration, std::optional<std::string> label = std::nullopt);

/// Composite event: union of the constituents' regions; duration is the
/// maximum over constituents, so the composite covers its parts.
EventDef compose(const StaticModel& model, std::span<const EventDef> events,
                 std::string name);

BehaviorGraph build_behavior(std::vector<EventDef> events,
                             std::vector<std::pair<std::string, std::string>> edges,
                             std::vector<std::string> repeats);

/// Topological order of the precedence DAG (repeat self-loops excluded).
std::vector<std::string> topological_order(const BehaviorGraph& behavior);

/// True when every element of the region exists in (and belongs to) the model.
bool region_in_model(const StaticModel& model, const Region& region);

}  // namespace thingc

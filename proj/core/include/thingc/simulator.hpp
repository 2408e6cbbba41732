#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thingc/document.hpp"
#include "thingc/dynamics.hpp"
#include "thingc/model.hpp"

namespace thingc {

struct SimulationLimits {
  std::uint64_t max_instances = 10000;
  Time max_clock = 1'000'000;
};

/// One firing of a generic action: a stage acted on a thing over [start, end].
/// Stages without a delay are instantaneous (start == end). The thing is the
/// value leaving the stage, after any `do` transform.
struct GenericEventInstance {
  std::uint64_t seq = 0;  // strictly increasing along the trace
  StageId stage;
  StageKind kind = StageKind::Create;
  Thing thing;
  Time start = 0;
  Time end = 0;
  bool operator==(const GenericEventInstance&) const = default;
};

enum class LimitKind { MaxInstances, MaxClock };

struct Trace {
  std::vector<GenericEventInstance> instances;  // ordered by (start, seq)
  // Engaged storage cells at the end of the run, sorted by qualified path.
  std::vector<std::pair<std::string, Thing>> final_storages;
  // Things that left the model at each output transfer, per stage.
  std::vector<std::pair<StageId, std::vector<Thing>>> outputs;
  // The same things merged chronologically.
  std::vector<std::pair<StageId, Thing>> output_sequence;
  std::optional<Verdict> verdict;
  std::optional<LimitKind> limit_hit;  // partial trace when set

  const std::vector<Thing>* outputs_at(StageId stage) const;
  bool operator==(const Trace&) const = default;
};

/// Evaluation failure during a run, tagged with the stage that raised it.
struct SimulationError : std::runtime_error {
  std::string stage_path;
  SimulationError(std::string path, const std::string& msg)
      : std::runtime_error("at " + path + ": " + msg), stage_path(std::move(path)) {}
};

struct InputFeed {
  StageId stage;
  std::vector<Thing> things;
};

/// Deterministic discrete-event run. Things enter at bound stages at clock 0
/// in feed order (a Transfer streams the list, a Create receives it as one
/// List thing); Create stages with an emit list, no incoming trigger and no
/// binding fire once at clock 0. Work is processed in (time, enqueue) order;
/// `after` delays are the only way the clock advances.
Trace execute(const StaticModel& model, const std::vector<InputFeed>& inputs,
              const SimulationLimits& limits = {});

/// One activation of a declared event: a maximal run of instances in its
/// region in which no stage fires twice.
struct Occurrence {
  Time start = 0;
  Time end = 0;
  std::uint64_t first_seq = 0;
  std::vector<std::uint64_t> seqs;
};

struct AttributedTrace {
  Trace trace;
  std::vector<EventDef> events;
  // Per instance, indices into `events` whose region contains its stage;
  // empty means unattributed.
  std::vector<std::vector<std::uint32_t>> labels;
  std::vector<std::vector<Occurrence>> occurrences;  // per event
  std::size_t unattributed = 0;
  std::size_t overlapping = 0;  // instances attributed to more than one event
};

/// Labels every instance with every event whose region contains its stage.
AttributedTrace attribute(const StaticModel& model, const Trace& trace,
                          std::vector<EventDef> events);

struct ConformanceReport {
  bool ok = true;
  // First offending pair in observed order when not ok.
  std::optional<std::pair<std::string, std::string>> offending;
  std::vector<std::string> activation_sequence;
  std::string message;
};

/// Checks the activation sequence (event occurrences by start order) against
/// the behavior graph: observed order may never contradict a precedence edge,
/// and immediate re-activation requires a repeat mark.
ConformanceReport conformance(const AttributedTrace& attributed,
                              const BehaviorGraph& behavior);

/// Declared events active at time t: occurrences whose [start, start+duration)
/// interval covers t. Returned in event declaration order.
std::vector<std::string> query_state(const AttributedTrace& attributed, Time t);

}  // namespace thingc

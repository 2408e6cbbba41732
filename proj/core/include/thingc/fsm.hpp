#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thingc/diagnostics.hpp"
#include "thingc/document.hpp"

namespace thingc {

struct FsmTransition {
  std::string from;
  std::string to;
  ExprPtr guard;               // over `it`, the current input sample
  std::vector<Thing> outputs;  // pure output signals emitted on this change
};

/// A finite-state-machine specification: either input-driven (guarded
/// transitions over one input stream) or timed (a duration per state).
struct FsmSpec {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<FsmTransition> transitions;
  std::vector<std::pair<std::string, Time>> durations;  // state -> dwell time

  std::optional<Time> duration_of(const std::string& state) const;
};

struct FsmParseResult {
  std::optional<FsmSpec> spec;
  std::vector<ParseDiagnostic> diagnostics;
};

/// Parses the `.fsm` format (same lexical conventions as `.tm`, top keyword
/// `fsm`; grammar in docs/grammar.md).
FsmParseResult parse_fsm(std::string_view source, std::string filename = "<fsm>");

/// Mechanical translation into a TM model.
///
/// Input-driven machines get one machine per state plus one machine per the
/// single input stream; each transition becomes two triggers, one switching
/// the source state off and one switching the target on, latched through a
/// `<state>_on` storage cell so re-triggering an active state is ignored.
/// Outputs become Create stages that fire on the state change only.
///
/// Timed machines (every state carries a duration) get a starter machine, one
/// machine per state whose create holds the state for its duration, a shared
/// `start_time` cell written by a per-state timer, elapsed-time trigger
/// conditions, and one timed event per state plus one per timer.
ModelDocument fsm_to_tm(const FsmSpec& spec);

}  // namespace thingc

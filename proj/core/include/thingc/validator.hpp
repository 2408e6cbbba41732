#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "thingc/model.hpp"

namespace thingc {

struct Violation {
  std::string element;  // dotted path of the offending element
  std::string rule;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok = true;
  /// One line per violation: `RULE at <path>: message`, stable order.
  std::string render() const;
};

/// Checks every flow against the legality relation, every trigger target,
/// stage-kind uniqueness, storage-name uniqueness and the machine forest.
/// Violations are data, not failures; the check is idempotent and const.
ValidationReport validate_structure(const StaticModel& model);

using EdgeRef = std::variant<FlowId, TriggerId>;

struct CyclePath {
  std::vector<EdgeRef> edges;
  std::string render;  // "a.create -> b.create -> a.create"
  std::size_t length() const { return edges.size(); }
};

struct FinitenessReport {
  bool acyclic = true;
  std::vector<CyclePath> cycles;      // elementary cycles, capped
  std::set<std::uint64_t> repeat_marked;  // encoded edge keys that were excluded
  bool truncated = false;             // hit the enumeration cap
  std::string render() const;
};

inline constexpr std::size_t kMaxEnumeratedCycles = 1000;

/// Cycle detection over the union of stage-to-stage flow and trigger edges,
/// excluding repeat-marked edges. A transfer stage contributes two graph
/// nodes, an entry port and an exit port, matching its direction-inferred
/// input/output roles, so a pass-through machine is not a cycle. Storage
/// edges carry data, not activation, and do not participate.
FinitenessReport check_finiteness(const StaticModel& model,
                                  const std::set<std::uint64_t>& repeat_marked = {});

std::uint64_t edge_key(const EdgeRef& e);
inline std::uint64_t edge_key(FlowId f) { return edge_key(EdgeRef{f}); }
inline std::uint64_t edge_key(TriggerId t) { return edge_key(EdgeRef{t}); }

}  // namespace thingc

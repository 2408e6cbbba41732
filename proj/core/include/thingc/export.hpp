#pragma once

#include <optional>
#include <span>
#include <string>

#include "thingc/dynamics.hpp"
#include "thingc/model.hpp"
#include "thingc/simulator.hpp"

namespace thingc {

/// DOT renderings are deterministic: node ids come from element ids, so the
/// same model always produces byte-identical output.

/// Machine hierarchy as nested clusters, flows as solid edges, triggers as
/// dashed edges, storage cells as cylinder nodes.
std::string export_dot_static(const StaticModel& model);

/// The static rendering plus one labeled boundary node per event, connected
/// to each member element by a dotted line. With no events the output equals
/// export_dot_static byte for byte.
std::string export_dot_events(const StaticModel& model, std::span<const EventDef> events);

/// One node per declared event, precedence edges, and a self-loop per repeat
/// mark.
std::string export_dot_behavior(const BehaviorGraph& behavior);

enum class TraceFormat { Jsonl, Tsv };

std::optional<TraceFormat> trace_format_from(const std::string& name);

/// One record per instance (seq, stage path, kind, thing, start, end) and a
/// trailing summary record with outputs, final storages and the verdict.
/// Field layout is pinned in docs/trace-format.md and golden-tested.
std::string export_trace(const StaticModel& model, const Trace& trace, TraceFormat format);

}  // namespace thingc

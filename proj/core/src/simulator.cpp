#include "thingc/simulator.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace thingc {

const std::vector<Thing>* Trace::outputs_at(StageId stage) const {
  for (const auto& [sid, things] : outputs)
    if (sid == stage) return &things;
  return nullptr;
}

namespace {

enum class Arrival : std::uint8_t {
  External,      // input feed or spontaneous activation
  SameMachine,   // flow from a stage of the same machine
  OtherMachine,  // flow from another machine
  Triggered,     // trigger activation
};

struct WorkItem {
  Time time = 0;
  std::uint64_t order = 0;
  bool is_departure = false;
  StageId stage;
  std::optional<Thing> thing;  // empty only for spontaneous create activation
  Arrival arrival = Arrival::External;
};

struct WorkOrder {
  bool operator()(const WorkItem& a, const WorkItem& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.order > b.order;  // min-heap on (time, order)
  }
};

class Engine {
 public:
  Engine(const StaticModel& model, const SimulationLimits& limits)
      : model_(model), limits_(limits) {
    cells_.resize(model.storages().size());
    for (const Storage& s : model.storages()) cells_[s.id.index] = s.initial;
    flows_out_.resize(model.stages().size());
    triggers_out_.resize(model.stages().size());
    storage_writes_.resize(model.stages().size());
    for (const Flow& f : model.flows()) {
      if (const StageId* from = std::get_if<StageId>(&f.from)) {
        if (const StageId* to = std::get_if<StageId>(&f.to))
          flows_out_[from->index].push_back(*to);
        else
          storage_writes_[from->index].push_back(std::get<StorageId>(f.to));
      }
      // Flows out of storage are pull edges: data the reader names in
      // expressions, never scheduled work.
    }
    for (const Trigger& t : model.triggers()) triggers_out_[t.from.index].push_back(t.id);
  }

  Trace run(const std::vector<InputFeed>& inputs) {
    collect_externals(inputs);

    // Run to completion per external thing: the next feed element or
    // spontaneous creation enters only once everything the previous one set
    // in motion has drained, so a stream element is never overtaken by a
    // later one. Without delays every external still enters at clock 0.
    Time watermark = 0;
    while (!trace_.limit_hit) {
      if (queue_.empty()) {
        if (next_external_ >= externals_.size()) break;
        WorkItem external = externals_[next_external_++];
        external.time = watermark;
        push(external);
        continue;
      }
      WorkItem item = queue_.top();
      queue_.pop();
      if (item.time > limits_.max_clock) {
        trace_.limit_hit = LimitKind::MaxClock;
        break;
      }
      watermark = std::max(watermark, item.time);
      if (item.is_departure)
        depart(item.stage, *item.thing, item.arrival, item.time);
      else
        fire(item.stage, item.thing, item.arrival, item.time);
    }

    finalize();
    return trace_;
  }

 private:
  void push(WorkItem item) {
    item.order = next_order_++;
    queue_.push(std::move(item));
  }

  // Spontaneous creates (emit list, no incoming trigger, unbound) in stage
  // order, then the feeds in feed order.
  void collect_externals(const std::vector<InputFeed>& inputs) {
    std::set<std::uint32_t> bound;
    for (const InputPoint& p : model_.inputs()) bound.insert(p.stage.index);
    for (const InputFeed& f : inputs) bound.insert(f.stage.index);
    std::set<std::uint32_t> triggered;
    for (const Trigger& t : model_.triggers()) triggered.insert(t.to.index);
    for (const Stage& s : model_.stages()) {
      if (s.kind != StageKind::Create || s.annotation.emit.empty()) continue;
      if (bound.count(s.id.index) || triggered.count(s.id.index)) continue;
      externals_.push_back({0, 0, false, s.id, std::nullopt, Arrival::External});
    }
    for (const InputFeed& f : inputs) {
      const Stage& s = model_.stage(f.stage);
      if (s.kind == StageKind::Transfer) {
        for (const Thing& t : f.things)
          externals_.push_back({0, 0, false, f.stage, t, Arrival::External});
      } else if (s.kind == StageKind::Create) {
        externals_.push_back(
            {0, 0, false, f.stage, Thing::list(f.things), Arrival::External});
      } else {
        throw SimulationError(model_.stage_path(f.stage),
                              "inputs may bind only to transfer or create stages");
      }
    }
  }

  EvalContext context_for(const Stage& stage, const Thing* it, Time now) {
    EvalContext ctx;
    ctx.it = it;
    ctx.now = now;
    MachineId scope = stage.owner;
    ctx.lookup = [this, scope](const std::string& name) -> const Thing* {
      auto sid = model_.resolve_storage(scope, name);
      if (!sid) return nullptr;
      const auto& cell = cells_[sid->index];
      if (!cell) {
        throw EvalError(EvalError::Kind::UnboundName,
                        "storage `" + name + "` has no value yet");
      }
      return &*cell;
    };
    return ctx;
  }

  Thing eval_at(const Stage& stage, const Expr& expr, const Thing* it, Time now) {
    try {
      return evaluate(expr, context_for(stage, it, now));
    } catch (const EvalError& err) {
      throw SimulationError(model_.stage_path(stage.id), err.what());
    }
  }

  void fire(StageId stage_id, const std::optional<Thing>& context, Arrival arrival,
            Time now) {
    const Stage& stage = model_.stage(stage_id);
    if (stage.kind == StageKind::Create && !stage.annotation.emit.empty()) {
      for (const Thing& literal : stage.annotation.emit) {
        pipeline(stage, literal, arrival, now);
        if (trace_.limit_hit) return;
      }
      return;
    }
    if (!context)
      throw SimulationError(model_.stage_path(stage_id),
                            "create stage activated with nothing to create: "
                            "add an emit list or pass a triggering thing");
    pipeline(stage, *context, arrival, now);
  }

  // Guard, delay, actions, instance, then departure after the delay.
  void pipeline(const Stage& stage, const Thing& incoming, Arrival arrival, Time now) {
    if (stage.annotation.guard) {
      Thing ok = eval_at(stage, *stage.annotation.guard, &incoming, now);
      if (!ok.is_boolean())
        throw SimulationError(model_.stage_path(stage.id), "guard must evaluate to a boolean");
      if (!ok.as_boolean()) return;  // dropped silently
    }
    Time delay = 0;
    if (stage.annotation.delay) {
      Thing d = eval_at(stage, *stage.annotation.delay, &incoming, now);
      if (!d.is_integer() || d.as_integer() < 0)
        throw SimulationError(model_.stage_path(stage.id),
                              "delay must evaluate to a non-negative integer");
      delay = d.as_integer();
    }

    Thing value = incoming;
    for (const Action& action : stage.annotation.actions) {
      switch (action.kind) {
        case Action::Kind::Transform:
          value = eval_at(stage, *action.expr, &value, now);
          break;
        case Action::Kind::Assign: {
          auto sid = model_.resolve_storage(stage.owner, action.target);
          if (!sid)
            throw SimulationError(model_.stage_path(stage.id),
                                  "unresolved storage `" + action.target + "`");
          cells_[sid->index] = eval_at(stage, *action.expr, &value, now);
          break;
        }
        case Action::Kind::Verdict:
          if (!trace_.verdict) trace_.verdict = action.verdict;  // first verdict wins
          break;
      }
    }

    if (trace_.instances.size() >= limits_.max_instances) {
      trace_.limit_hit = LimitKind::MaxInstances;
      return;
    }
    GenericEventInstance instance;
    instance.seq = static_cast<std::uint64_t>(trace_.instances.size()) + 1;
    instance.stage = stage.id;
    instance.kind = stage.kind;
    instance.thing = value;
    instance.start = now;
    instance.end = now + delay;
    trace_.instances.push_back(std::move(instance));

    if (delay == 0)
      depart(stage.id, value, arrival, now);
    else
      push({now + delay, 0, true, stage.id, value, arrival});
  }

  void depart(StageId stage_id, const Thing& value, Arrival arrival, Time now) {
    const Stage& stage = model_.stage(stage_id);

    if (stage.kind == StageKind::Transfer) {
      // Direction infers the role: a thing that arrived from inside the
      // machine is on the way out, anything else is on the way in.
      bool outbound = arrival == Arrival::SameMachine;
      bool left_model = outbound;
      for (StageId target : flows_out_[stage_id.index]) {
        bool same = model_.same_machine(stage_id, target);
        if (outbound && !same) {
          push({now, 0, false, target, value, Arrival::OtherMachine});
          left_model = false;
        } else if (!outbound && same) {
          push({now, 0, false, target, value, Arrival::SameMachine});
        }
      }
      if (left_model) record_output(stage_id, value);
    } else {
      for (StageId target : flows_out_[stage_id.index]) {
        Arrival a = model_.same_machine(stage_id, target) ? Arrival::SameMachine
                                                          : Arrival::OtherMachine;
        push({now, 0, false, target, value, a});
      }
      for (StorageId target : storage_writes_[stage_id.index]) cells_[target.index] = value;
    }

    for (TriggerId tid : triggers_out_[stage_id.index]) {
      const Trigger& t = model_.trigger(tid);
      if (t.condition) {
        Thing ok = eval_at(stage, *t.condition, &value, now);
        if (!ok.is_boolean())
          throw SimulationError(model_.stage_path(stage_id),
                                "trigger condition must evaluate to a boolean");
        if (!ok.as_boolean()) continue;
      }
      push({now, 0, false, t.to, value, Arrival::Triggered});
    }
  }

  void record_output(StageId stage, const Thing& value) {
    trace_.output_sequence.emplace_back(stage, value);
    for (auto& [sid, things] : trace_.outputs) {
      if (sid == stage) {
        things.push_back(value);
        return;
      }
    }
    trace_.outputs.emplace_back(stage, std::vector<Thing>{value});
  }

  void finalize() {
    for (const Storage& s : model_.storages()) {
      if (cells_[s.id.index])
        trace_.final_storages.emplace_back(model_.storage_path(s.id), *cells_[s.id.index]);
    }
    std::sort(trace_.final_storages.begin(), trace_.final_storages.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Outputs stay in first-appearance order; make it stage declaration order.
    std::sort(trace_.outputs.begin(), trace_.outputs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  const StaticModel& model_;
  const SimulationLimits& limits_;
  std::vector<WorkItem> externals_;
  std::size_t next_external_ = 0;
  std::vector<std::optional<Thing>> cells_;
  std::vector<std::vector<StageId>> flows_out_;
  std::vector<std::vector<StorageId>> storage_writes_;
  std::vector<std::vector<TriggerId>> triggers_out_;
  std::priority_queue<WorkItem, std::vector<WorkItem>, WorkOrder> queue_;
  std::uint64_t next_order_ = 1;
  Trace trace_;
};

}  // namespace

Trace execute(const StaticModel& model, const std::vector<InputFeed>& inputs,
              const SimulationLimits& limits) {
  return Engine(model, limits).run(inputs);
}

AttributedTrace attribute(const StaticModel& model, const Trace& trace,
                          std::vector<EventDef> events) {
  for (const EventDef& e : events)
    if (!region_in_model(model, e.region))
      throw DynamicsError(DynamicsError::Kind::ForeignRegion,
                          "event `" + e.name + "` references elements outside the model");

  AttributedTrace out;
  out.trace = trace;
  out.events = std::move(events);
  out.labels.resize(trace.instances.size());
  out.occurrences.resize(out.events.size());

  // fired-set per event for the occurrence grouping: a stage firing twice
  // within one event marks the start of a new occurrence over that region.
  std::vector<std::set<std::uint32_t>> fired(out.events.size());

  for (std::size_t i = 0; i < trace.instances.size(); ++i) {
    const GenericEventInstance& inst = trace.instances[i];
    for (std::uint32_t e = 0; e < out.events.size(); ++e) {
      if (!out.events[e].region.contains(inst.stage)) continue;
      out.labels[i].push_back(e);
      auto& occs = out.occurrences[e];
      if (occs.empty() || fired[e].count(inst.stage.index)) {
        fired[e].clear();
        occs.push_back(Occurrence{inst.start, inst.end, inst.seq, {inst.seq}});
      } else {
        occs.back().end = std::max(occs.back().end, inst.end);
        occs.back().seqs.push_back(inst.seq);
      }
      fired[e].insert(inst.stage.index);
    }
    if (out.labels[i].empty())
      ++out.unattributed;
    else if (out.labels[i].size() > 1)
      ++out.overlapping;
  }
  return out;
}

ConformanceReport conformance(const AttributedTrace& attributed,
                              const BehaviorGraph& behavior) {
  // Behavior events must all be known to the attribution.
  std::map<std::string, std::uint32_t> event_index;
  for (std::uint32_t i = 0; i < attributed.events.size(); ++i)
    event_index[attributed.events[i].name] = i;
  for (const EventDef& e : behavior.events)
    if (!event_index.count(e.name))
      throw DynamicsError(DynamicsError::Kind::UnknownEvent,
                          "behavior event `" + e.name + "` missing from the attribution");

  struct Activation {
    Time start;
    std::uint64_t seq;
    std::uint32_t event;  // declaration order, the tie-break of last resort
    std::string name;
  };
  std::vector<Activation> seq;
  for (std::uint32_t b = 0; b < behavior.events.size(); ++b) {
    const EventDef& e = behavior.events[b];
    auto it = event_index.find(e.name);
    for (const Occurrence& occ : attributed.occurrences[it->second])
      seq.push_back({occ.start, occ.first_seq, b, e.name});
  }
  std::sort(seq.begin(), seq.end(), [](const Activation& a, const Activation& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.seq != b.seq) return a.seq < b.seq;
    return a.event < b.event;
  });

  ConformanceReport report;
  for (const Activation& a : seq) report.activation_sequence.push_back(a.name);

  std::map<std::string, std::size_t> first;
  for (std::size_t p = 0; p < seq.size(); ++p) {
    const std::string& name = seq[p].name;
    // Immediate re-activation over the same region needs a repeat mark.
    if (p > 0 && seq[p - 1].name == name && !behavior.is_repeat(name)) {
      report.ok = false;
      report.offending = {name, name};
      report.message = "event `" + name + "` re-activates without a repeat mark";
      return report;
    }
    if (first.count(name)) continue;
    // Every precedence edge into this event must already be satisfied.
    for (const auto& [from, to] : behavior.edges) {
      if (to != name) continue;
      if (!first.count(from)) {
        report.ok = false;
        report.offending = {name, from};
        report.message = "`" + name + "` activated before `" + from +
                         "` despite the precedence " + from + " -> " + to;
        return report;
      }
    }
    first[name] = p;
  }
  return report;
}

std::vector<std::string> query_state(const AttributedTrace& attributed, Time t) {
  std::vector<std::string> active;
  for (std::uint32_t e = 0; e < attributed.events.size(); ++e) {
    const EventDef& event = attributed.events[e];
    for (const Occurrence& occ : attributed.occurrences[e]) {
      if (t >= occ.start && t < occ.start + event.duration) {
        active.push_back(event.name);
        break;
      }
    }
  }
  return active;
}

}  // namespace thingc

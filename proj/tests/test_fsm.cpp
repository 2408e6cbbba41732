#include <doctest.h>

#include "helpers.hpp"
#include "thingc/export.hpp"
#include "thingc/fsm.hpp"
#include "thingc/printer.hpp"
#include "thingc/simulator.hpp"
#include "thingc/validator.hpp"

using namespace thingc;

namespace {

FsmSpec load_fsm(const std::string& name) {
  std::string path = test::models_dir() + "/" + name;
  FsmParseResult result = parse_fsm(test::read_file(path), path);
  REQUIRE(result.spec);
  return *result.spec;
}

std::vector<Thing> integers(std::initializer_list<int> values) {
  std::vector<Thing> things;
  for (int v : values) things.push_back(Thing::integer(v));
  return things;
}

}  // namespace

TEST_CASE("fsm files parse into their spec") {
  FsmSpec thermostat = load_fsm("thermostat.fsm");
  CHECK(thermostat.states == std::vector<std::string>{"heating", "cooling"});
  CHECK(thermostat.initial == "cooling");
  CHECK(thermostat.inputs == std::vector<std::string>{"temperature"});
  CHECK(thermostat.transitions.size() == 2);
  CHECK(thermostat.durations.empty());

  FsmSpec traffic = load_fsm("traffic_light.fsm");
  CHECK(traffic.states.size() == 3);
  CHECK(traffic.duration_of("green") == Time{100});
  CHECK(traffic.transitions.size() == 3);
}

TEST_CASE("bad fsm specs are rejected") {
  FsmSpec spec;
  spec.name = "broken";
  spec.states = {"a"};
  spec.initial = "missing";
  CHECK_THROWS_AS(fsm_to_tm(spec), ModelError);

  spec.initial = "a";
  spec.durations = {{"a", -5}};
  CHECK_THROWS_AS(fsm_to_tm(spec), ModelError);

  spec.durations.clear();
  spec.transitions.push_back({"a", "nowhere", nullptr, {}});
  CHECK_THROWS_AS(fsm_to_tm(spec), ModelError);
}

TEST_CASE("a single state with no transitions translates to one machine") {
  FsmSpec spec;
  spec.name = "lonely";
  spec.states = {"s"};
  spec.initial = "s";
  ModelDocument doc = fsm_to_tm(spec);
  CHECK(doc.model.machines().size() == 1);
  CHECK(doc.model.triggers().empty());
  CHECK(validate_structure(doc.model).ok);
}

TEST_CASE("translations always pass validation") {
  for (const char* file : {"thermostat.fsm", "traffic_light.fsm"}) {
    CAPTURE(file);
    ModelDocument doc = fsm_to_tm(load_fsm(file));
    CHECK(validate_structure(doc.model).ok);
  }
}

TEST_CASE("the translated thermostat reproduces the hand-written trace") {
  ModelDocument generated = fsm_to_tm(load_fsm("thermostat.fsm"));
  ModelDocument hand = test::load_model("thermostat.tm");
  std::vector<Thing> stream = integers({20, 19, 18, 22});
  Trace gen_trace = execute(generated.model, {{generated.inputs[0].stage, stream}}, {});
  Trace hand_trace = execute(hand.model, {{hand.inputs[0].stage, stream}}, {});
  // Canonical id renaming: compare by path, kind, value and time.
  REQUIRE(gen_trace.instances.size() == hand_trace.instances.size());
  for (std::size_t i = 0; i < gen_trace.instances.size(); ++i) {
    const auto& g = gen_trace.instances[i];
    const auto& h = hand_trace.instances[i];
    CHECK(generated.model.stage_path(g.stage) == hand.model.stage_path(h.stage));
    CHECK(g.kind == h.kind);
    CHECK(g.thing == h.thing);
    CHECK(g.start == h.start);
    CHECK(g.end == h.end);
  }
  CHECK(gen_trace.final_storages == hand_trace.final_storages);
  CHECK(export_trace(generated.model, gen_trace, TraceFormat::Jsonl) ==
        export_trace(hand.model, hand_trace, TraceFormat::Jsonl));
}

TEST_CASE("the translated traffic light reproduces the hand-written trace") {
  ModelDocument generated = fsm_to_tm(load_fsm("traffic_light.fsm"));
  ModelDocument hand = test::load_model("traffic_light.tm");
  SimulationLimits limits;
  limits.max_clock = 330;
  Trace gen_trace = execute(generated.model, {}, limits);
  Trace hand_trace = execute(hand.model, {}, limits);
  CHECK(export_trace(generated.model, gen_trace, TraceFormat::Jsonl) ==
        export_trace(hand.model, hand_trace, TraceFormat::Jsonl));
}

TEST_CASE("translated traffic events carry the state durations") {
  ModelDocument doc = fsm_to_tm(load_fsm("traffic_light.fsm"));
  REQUIRE(doc.events.size() == 6);
  CHECK(doc.find_event("E1_red")->duration == 50);
  CHECK(doc.find_event("E3_green")->duration == 100);
  CHECK(doc.find_event("E5_yellow")->duration == 15);
  CHECK(doc.find_event("E2_calc")->duration == 0);
}

TEST_CASE("state events never overlap in time") {
  ModelDocument doc = fsm_to_tm(load_fsm("traffic_light.fsm"));
  SimulationLimits limits;
  limits.max_clock = 330;
  Trace trace = execute(doc.model, {}, limits);
  AttributedTrace attributed = attribute(doc.model, trace, doc.events);
  for (Time t = 0; t <= 329; ++t) {
    std::vector<std::string> active = query_state(attributed, t);
    int states = 0;
    for (const std::string& name : active)
      if (name.find("_calc") == std::string::npos) ++states;
    CHECK(states <= 1);
  }
}

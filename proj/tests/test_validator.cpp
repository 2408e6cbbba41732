#include <doctest.h>

#include "helpers.hpp"
#include "thingc/validator.hpp"

using namespace thingc;

TEST_CASE("the restaurant model validates cleanly") {
  ModelDocument doc = test::load_model("restaurant.tm");
  ValidationReport report = validate_structure(doc.model);
  CHECK(report.ok);
  CHECK(report.violations.empty());
}

TEST_CASE("an empty model validates vacuously") {
  StaticModel model("empty");
  CHECK(validate_structure(model).ok);
}

TEST_CASE("an illegal flow inserted directly is reported once") {
  StaticModel m("x");
  MachineId a = m.add_machine(std::nullopt, "a");
  StageId process = m.add_stage(a, StageKind::Process);
  StageId receive = m.add_stage(a, StageKind::Receive);
  m.insert_flow_unchecked(Endpoint{process}, Endpoint{receive});
  ValidationReport report = validate_structure(m);
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].rule == "IllegalFlow");
  CHECK(report.render().find("IllegalFlow at a.process -> a.receive") == 0);
}

TEST_CASE("validate_structure is idempotent and side-effect free") {
  ModelDocument doc = test::load_model("thermostat.tm");
  ValidationReport first = validate_structure(doc.model);
  ValidationReport second = validate_structure(doc.model);
  CHECK(first.ok == second.ok);
  CHECK(first.render() == second.render());
}

TEST_CASE("validator accepts exactly the enumerated relation") {
  // Every stage pair within one machine and across two, plus the storage
  // rows, checked against both construction and validation.
  StageKind kinds[] = {StageKind::Create, StageKind::Process, StageKind::Release,
                       StageKind::Transfer, StageKind::Receive};
  auto expect_intra = [](StageKind from, StageKind to) {
    return (from == StageKind::Transfer && to == StageKind::Receive) ||
           (from == StageKind::Receive && to == StageKind::Process) ||
           (from == StageKind::Receive && to == StageKind::Release) ||
           (from == StageKind::Process && to == StageKind::Release) ||
           (from == StageKind::Create && to == StageKind::Process) ||
           (from == StageKind::Create && to == StageKind::Release) ||
           (from == StageKind::Release && to == StageKind::Transfer);
  };
  for (StageKind from : kinds) {
    for (StageKind to : kinds) {
      for (bool same : {true, false}) {
        CAPTURE(stage_kind_name(from));
        CAPTURE(stage_kind_name(to));
        CAPTURE(same);
        bool expected = same ? expect_intra(from, to)
                             : (from == StageKind::Transfer && to == StageKind::Transfer);
        CHECK(flow_legal_stage_pair(from, to, same) == expected);

        StaticModel m("probe");
        MachineId a = m.add_machine(std::nullopt, "a");
        MachineId b = same ? a : m.add_machine(std::nullopt, "b");
        StageId sf = m.add_stage(a, from);
        StageId st = (same && from == to) ? sf : m.add_stage(b, to);
        m.insert_flow_unchecked(Endpoint{sf}, Endpoint{st});
        bool valid = validate_structure(m).ok;
        // A self-loop on one stage is the same-kind intra pair.
        CHECK(valid == expected);
      }
    }
  }
  for (StageKind kind : kinds) {
    bool into = kind == StageKind::Create || kind == StageKind::Process;
    bool out_of = kind == StageKind::Process || kind == StageKind::Release;
    CHECK(flow_legal_into_storage(kind) == into);
    CHECK(flow_legal_from_storage(kind) == out_of);

    StaticModel m("probe");
    MachineId a = m.add_machine(std::nullopt, "a");
    StageId s = m.add_stage(a, kind);
    StorageId cell = m.add_storage(a, "cell");
    m.insert_flow_unchecked(Endpoint{s}, Endpoint{cell});
    CHECK(validate_structure(m).ok == into);
    StaticModel m2("probe");
    MachineId a2 = m2.add_machine(std::nullopt, "a");
    StageId s2 = m2.add_stage(a2, kind);
    StorageId cell2 = m2.add_storage(a2, "cell");
    m2.insert_flow_unchecked(Endpoint{cell2}, Endpoint{s2});
    CHECK(validate_structure(m2).ok == out_of);
  }
}

TEST_CASE("pass-through machines are acyclic thanks to transfer roles") {
  ModelDocument doc = test::load_model("example1_ten_integers.tm");
  FinitenessReport report = check_finiteness(doc.model);
  CHECK(report.acyclic);
  CHECK(report.cycles.empty());
}

TEST_CASE("the traffic light has exactly one cycle of length three") {
  ModelDocument doc = test::load_model("traffic_light.tm");
  FinitenessReport report = check_finiteness(doc.model);
  CHECK_FALSE(report.acyclic);
  REQUIRE(report.cycles.size() == 1);
  CHECK(report.cycles[0].length() == 3);

  // Repeat-marking one edge of the cycle breaks it.
  std::set<std::uint64_t> marked;
  for (const Trigger& t : doc.model.triggers()) {
    if (doc.model.stage_path(t.from) == "yellow.create" &&
        doc.model.stage_path(t.to) == "red.create")
      marked.insert(edge_key(t.id));
  }
  REQUIRE(marked.size() == 1);
  FinitenessReport repaired = check_finiteness(doc.model, marked);
  CHECK(repaired.acyclic);
}

TEST_CASE("adding an edge never makes a cyclic model acyclic") {
  ModelDocument doc = test::load_model("traffic_light.tm");
  StaticModel model = doc.model;  // mutable copy
  REQUIRE_FALSE(check_finiteness(model).acyclic);
  // Add a few arbitrary trigger edges and re-check.
  StageId starter = *model.find_stage(*model.find_machine({"starter"}), StageKind::Create);
  StageId green = *model.find_stage(*model.find_machine({"green"}), StageKind::Create);
  model.add_trigger(starter, green);
  CHECK_FALSE(check_finiteness(model).acyclic);
  model.add_trigger(green, green);
  CHECK_FALSE(check_finiteness(model).acyclic);
}

TEST_CASE("finiteness reports render stably") {
  ModelDocument doc = test::load_model("traffic_light.tm");
  FinitenessReport report = check_finiteness(doc.model);
  std::string rendered = report.render();
  CHECK(rendered.find("acyclic: false") == 0);
  CHECK(rendered.find("red.create -> green.create -> yellow.create -> red.create") !=
        std::string::npos);
}

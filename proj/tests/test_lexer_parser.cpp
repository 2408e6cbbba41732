#include <doctest.h>

#include <fstream>
#include <sstream>

#include "thingc/lexer.hpp"
#include "thingc/parser.hpp"
#include "thingc/printer.hpp"

using namespace thingc;

TEST_CASE("tokenize a machine declaration") {
  LexResult r = tokenize("machine M { create; }");
  REQUIRE(r.ok());
  REQUIRE(r.tokens.size() == 7);  // includes eof
  CHECK(r.tokens[0].is_keyword("machine"));
  CHECK(r.tokens[1].kind == TokenKind::Identifier);
  CHECK(r.tokens[1].text == "M");
  CHECK(r.tokens[2].kind == TokenKind::LBrace);
  CHECK(r.tokens[3].is_keyword("create"));
  CHECK(r.tokens[4].kind == TokenKind::Semicolon);
  CHECK(r.tokens[5].kind == TokenKind::RBrace);
  CHECK(r.tokens[6].kind == TokenKind::EndOfFile);
}

TEST_CASE("tokenize empty input") {
  LexResult r = tokenize("");
  REQUIRE(r.ok());
  CHECK(r.tokens.size() == 1);
  CHECK(r.tokens[0].kind == TokenKind::EndOfFile);
}

TEST_CASE("illegal characters carry their position") {
  LexResult r = tokenize("machine M\xc2\xa7");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].rule == "IllegalCharacter");
  CHECK(r.diagnostics[0].span.line == 1);
  CHECK(r.diagnostics[0].span.column == 10);
}

TEST_CASE("comments and spans") {
  LexResult r = tokenize("// intro\n  flow");
  REQUIRE(r.ok());
  CHECK(r.tokens[0].is_keyword("flow"));
  CHECK(r.tokens[0].span.line == 2);
  CHECK(r.tokens[0].span.column == 3);
}

TEST_CASE("parse a minimal model") {
  ParseResult r = parse("model m { machine M { create; process; } flow M.create -> M.process; }");
  REQUIRE(r.ok());
  CHECK(r.document->model.machines().size() == 1);
  CHECK(r.document->model.flows().size() == 1);
  CHECK(r.document->model.stages().size() == 2);
}

TEST_CASE("unresolved flow endpoints are diagnosed with spans") {
  ParseResult r = parse("model m {\n  machine B { process; }\n  flow A.create -> B.process;\n}");
  REQUIRE_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics[0].rule == "UnresolvedName");
  CHECK(r.diagnostics[0].message.find("A") != std::string::npos);
  CHECK(r.diagnostics[0].span.line == 3);
}

TEST_CASE("parse never yields both a document and errors") {
  const char* bad[] = {
      "",
      "model",
      "model m {",
      "model m { machine M { create; create; } }",
      "model m { machine M { create; } } event E over { M.process };",
      "model m { machine M { transfer; } } behavior { X -> Y; }",
  };
  for (const char* source : bad) {
    ParseResult r = parse(source);
    CHECK_FALSE(r.ok());
    CHECK(has_errors(r.diagnostics));
  }
}

TEST_CASE("flows and triggers may be declared inside machine bodies") {
  ParseResult r = parse(
      "model m { machine M { create; process; flow M.create -> M.process; "
      "trigger M.process -> M.create; } }");
  REQUIRE(r.ok());
  CHECK(r.document->model.flows().size() == 1);
  CHECK(r.document->model.triggers().size() == 1);
  // Canonical form hoists them to the model level.
  std::string printed = print_model(*r.document);
  CHECK(printed.find("  flow M.create -> M.process;\n") != std::string::npos);
}

TEST_CASE("duplicate declarations are reported") {
  ParseResult r = parse("model m { machine M { create; } machine M { process; } }");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].message.find("DuplicateName") != std::string::npos);
}

TEST_CASE("annotations parse in clause order") {
  ParseResult r = parse(
      "model m { storage c = 0; machine M { create when it > 0 after 5 do c := c + 1, it "
      "emit [go, 1]; } }");
  REQUIRE(r.ok());
  const Stage& s = r.document->model.stages()[0];
  CHECK(s.annotation.guard);
  CHECK(s.annotation.delay);
  CHECK(s.annotation.actions.size() == 2);
  CHECK(s.annotation.emit.size() == 2);
}

TEST_CASE("expression names must resolve against storages in scope") {
  ParseResult r = parse("model m { machine M { create when missing > 0; } }");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].message.find("missing") != std::string::npos);
}

TEST_CASE("events resolve paths and check connectivity") {
  ParseResult ok = parse(
      "model m { machine M { create; process; } flow M.create -> M.process; }\n"
      "event E over { M.create, M.process };");
  REQUIRE(ok.ok());
  REQUIRE(ok.document->events.size() == 1);
  CHECK(ok.document->events[0].region.stages.size() == 2);
  CHECK(ok.document->events[0].region.flows.size() == 1);

  ParseResult disconnected = parse(
      "model m { machine A { create; } machine B { process; } }\n"
      "event E over { A.create, B.process };");
  CHECK_FALSE(disconnected.ok());

  ParseResult bad_duration = parse(
      "model m { machine M { create; } }\nevent E over { M.create } duration 5;");
  CHECK_FALSE(bad_duration.ok());
}

TEST_CASE("behavior declarations build the graph") {
  ParseResult r = parse(
      "model m { machine M { create; process; } flow M.create -> M.process; }\n"
      "event A over { M.create };\nevent B over { M.process };\n"
      "behavior { A -> B; repeat A; }");
  REQUIRE(r.ok());
  REQUIRE(r.document->behavior);
  CHECK(r.document->behavior->edges.size() == 1);
  CHECK(r.document->behavior->repeats.size() == 1);

  ParseResult cyclic = parse(
      "model m { machine M { create; process; } flow M.create -> M.process; }\n"
      "event A over { M.create };\nevent B over { M.process };\n"
      "behavior { A -> B; B -> A; }");
  CHECK_FALSE(cyclic.ok());
}

TEST_CASE("the traffic light file parses into its documented shape") {
  std::string path = std::string(THINGC_MODELS_DIR) + "/traffic_light.tm";
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  ParseResult r = parse(buffer.str(), path);
  REQUIRE(r.ok());
  const StaticModel& m = r.document->model;
  // Three state machines plus the starter and the per-state timers.
  for (const char* name : {"red", "green", "yellow"})
    CHECK(m.find_machine({name}).has_value());
  CHECK(m.find_model_storage("start_time").has_value());
  int timed = 0;
  for (const EventDef& e : r.document->events)
    if (e.duration > 0) ++timed;
  CHECK(timed == 3);
}

TEST_CASE("input declarations bind stages and keep their values") {
  ParseResult r = parse(
      "model m { machine io { transfer; } }\ninput io.transfer = [1, 2, 3];");
  REQUIRE(r.ok());
  REQUIRE(r.document->inputs.size() == 1);
  CHECK(r.document->inputs[0].name == "io");
  CHECK(r.document->inputs[0].things.size() == 3);
  CHECK(r.document->model.inputs().size() == 1);

  ParseResult bad = parse("model m { machine io { process; } }\ninput io.process = [1];");
  CHECK_FALSE(bad.ok());
}

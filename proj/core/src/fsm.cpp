#include "thingc/fsm.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "thingc/lexer.hpp"
#include "thingc/parser.hpp"

namespace thingc {

std::optional<Time> FsmSpec::duration_of(const std::string& state) const {
  for (const auto& [name, time] : durations)
    if (name == state) return time;
  return std::nullopt;
}

namespace {

// fsmdoc  := "fsm" IDENT "{" fsmitem* "}"
// fsmitem := "state" IDENT ("duration" INT)? ";"
//          | "initial" IDENT ";" | "input" IDENT ";" | "output" IDENT ";"
//          | "transition" IDENT "->" IDENT ("when" expr)? ("emit" "[" literal
//            ("," literal)* "]")? ";"
class FsmParser {
 public:
  FsmParser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diagnostics)
      : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

  std::optional<FsmSpec> run() {
    FsmSpec spec;
    if (!at_word("fsm")) {
      diagnostics_.push_back({Severity::Error, peek().span, "expected `fsm`", "fsm"});
      return std::nullopt;
    }
    advance();
    if (!at(TokenKind::Identifier)) return error("expected a machine name");
    spec.name = advance().text;
    if (!eat(TokenKind::LBrace)) return std::nullopt;
    while (!at(TokenKind::RBrace)) {
      if (at_word("state")) {
        advance();
        if (!at(TokenKind::Identifier)) return error("expected a state name");
        spec.states.push_back(advance().text);
        if (peek().is_keyword("duration")) {
          advance();
          if (!at(TokenKind::Integer)) return error("expected a duration value");
          spec.durations.emplace_back(spec.states.back(), advance().value);
        }
        if (!eat(TokenKind::Semicolon)) return std::nullopt;
        continue;
      }
      if (at_word("initial")) {
        advance();
        if (!at(TokenKind::Identifier)) return error("expected a state name");
        spec.initial = advance().text;
        if (!eat(TokenKind::Semicolon)) return std::nullopt;
        continue;
      }
      if (peek().is_keyword("input")) {
        advance();
        if (!at(TokenKind::Identifier)) return error("expected an input name");
        spec.inputs.push_back(advance().text);
        if (!eat(TokenKind::Semicolon)) return std::nullopt;
        continue;
      }
      if (at_word("output")) {
        advance();
        if (!at(TokenKind::Identifier)) return error("expected an output name");
        spec.outputs.push_back(advance().text);
        if (!eat(TokenKind::Semicolon)) return std::nullopt;
        continue;
      }
      if (at_word("transition")) {
        advance();
        FsmTransition t;
        if (!at(TokenKind::Identifier)) return error("expected a state name");
        t.from = advance().text;
        if (!eat(TokenKind::Arrow)) return std::nullopt;
        if (!at(TokenKind::Identifier)) return error("expected a state name");
        t.to = advance().text;
        if (peek().is_keyword("when")) {
          advance();
          auto expr = collect_expression();
          if (!expr) return std::nullopt;
          t.guard = expr;
        }
        if (peek().is_keyword("emit")) {
          advance();
          if (!eat(TokenKind::LBracket)) return std::nullopt;
          while (!at(TokenKind::RBracket)) {
            if (at(TokenKind::Identifier)) {
              t.outputs.push_back(Thing::symbol(advance().text));
            } else if (at(TokenKind::Integer)) {
              t.outputs.push_back(Thing::integer(advance().value));
            } else {
              return error("expected a literal in emit list");
            }
            if (at(TokenKind::Comma)) advance();
          }
          advance();  // ]
        }
        if (!eat(TokenKind::Semicolon)) return std::nullopt;
        spec.transitions.push_back(std::move(t));
        continue;
      }
      return error("expected state, initial, input, output or transition");
    }
    advance();  // }
    return spec;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  // fsm, state, initial, output and transition are contextual words.
  bool at_word(const char* word) const {
    const Token& t = peek();
    return (t.kind == TokenKind::Identifier || t.kind == TokenKind::Keyword) &&
           t.text == word;
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  Token advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  std::optional<FsmSpec> error(const std::string& message) {
    diagnostics_.push_back({Severity::Error, peek().span, message, "fsm"});
    return std::nullopt;
  }

  bool eat(TokenKind k) {
    if (!at(k)) {
      diagnostics_.push_back({Severity::Error, peek().span,
                              "unexpected `" + peek().text + "`", "fsm"});
      return false;
    }
    advance();
    return true;
  }

  // Re-lex the guard through the expression parser by collecting its tokens
  // up to the clause boundary.
  ExprPtr collect_expression() {
    std::string source;
    int depth = 0;
    while (true) {
      const Token& t = peek();
      if (t.kind == TokenKind::EndOfFile) break;
      if (depth == 0 &&
          (t.kind == TokenKind::Semicolon || t.is_keyword("emit"))) break;
      if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBracket) ++depth;
      if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBracket) --depth;
      if (!source.empty()) source += ' ';
      source += t.kind == TokenKind::String ? "\"" + t.text + "\"" : t.text;
      advance();
    }
    ExprParseResult parsed = parse_expression(source);
    if (!parsed.expr) {
      for (auto& d : parsed.diagnostics) diagnostics_.push_back(d);
      diagnostics_.push_back({Severity::Error, peek().span, "bad guard expression", "fsm"});
      return nullptr;
    }
    return parsed.expr;
  }

  std::vector<Token> tokens_;
  std::vector<ParseDiagnostic>& diagnostics_;
  std::size_t pos_ = 0;
};

void check_spec(const FsmSpec& spec) {
  auto invalid = [](const std::string& msg) {
    throw ModelError(ErrorCode::InvalidSpec, msg);
  };
  if (spec.states.empty()) invalid("an fsm needs at least one state");
  std::set<std::string> states(spec.states.begin(), spec.states.end());
  if (states.size() != spec.states.size()) invalid("duplicate state names");
  if (!states.count(spec.initial)) invalid("initial state `" + spec.initial + "` is not a state");
  for (const FsmTransition& t : spec.transitions) {
    if (!states.count(t.from)) invalid("transition from unknown state `" + t.from + "`");
    if (!states.count(t.to)) invalid("transition to unknown state `" + t.to + "`");
  }
  for (const auto& [state, time] : spec.durations) {
    if (!states.count(state)) invalid("duration for unknown state `" + state + "`");
    if (time < 0) invalid("negative duration for state `" + state + "`");
  }
  if (!spec.durations.empty() && spec.durations.size() != spec.states.size())
    invalid("either every state carries a duration or none does");
  if (spec.durations.empty() && !spec.transitions.empty() && spec.inputs.size() != 1)
    invalid("input-driven machines need exactly one input stream");
}

ModelDocument translate_timed(const FsmSpec& spec) {
  StaticModel model(spec.name);
  model.add_storage(std::nullopt, "start_time", Thing::integer(0));

  MachineId starter = model.add_machine(std::nullopt, "starter");
  Annotation go;
  go.emit.push_back(Thing::symbol("go"));
  StageId starter_create = model.add_stage(starter, StageKind::Create, go);

  std::map<std::string, StageId> state_create;
  std::map<std::string, StageId> state_timer;
  for (const std::string& state : spec.states) {
    MachineId m = model.add_machine(std::nullopt, state);
    Annotation ann;
    ann.delay = Expr::literal(Thing::integer(*spec.duration_of(state)));
    ann.emit.push_back(Thing::symbol(state));
    state_create[state] = model.add_stage(m, StageKind::Create, ann);
    MachineId timer = model.add_machine(m, "timer");
    Annotation tick;
    tick.actions.push_back(Action::transform(Expr::now()));
    state_timer[state] = model.add_stage(timer, StageKind::Process, tick);
  }
  StorageId start_time = *model.find_model_storage("start_time");
  for (const std::string& state : spec.states)
    model.add_flow(Endpoint{state_timer[state]}, Endpoint{start_time});

  model.add_trigger(starter_create, state_create[spec.initial]);
  for (const std::string& state : spec.states)
    model.add_trigger(state_create[state], state_timer[state]);
  for (const FsmTransition& t : spec.transitions) {
    ExprPtr elapsed =
        Expr::binary(BinaryOp::Eq,
                     Expr::binary(BinaryOp::Sub, Expr::now(), Expr::name("start_time")),
                     Expr::literal(Thing::integer(*spec.duration_of(t.from))));
    ExprPtr condition =
        t.guard ? Expr::binary(BinaryOp::And, elapsed, t.guard) : elapsed;
    model.add_trigger(state_create[t.from], state_create[t.to], condition);
  }

  ModelDocument doc{std::move(model), {}, std::nullopt, {}};
  // Per-state timed events named E1, E3, ... with E2, E4, ... for the timers.
  int counter = 1;
  for (const std::string& state : spec.states) {
    std::vector<ElementRef> span{state_create[state], state_timer[state]};
    Region region = define_region(doc.model, span);
    doc.events.push_back(define_event(doc.model, "E" + std::to_string(counter) + "_" + state,
                                      std::move(region), *spec.duration_of(state)));
    std::vector<ElementRef> instant{state_timer[state]};
    Region calc = define_region(doc.model, instant);
    doc.events.push_back(define_event(doc.model, "E" + std::to_string(counter + 1) + "_calc",
                                      std::move(calc), 0));
    counter += 2;
  }
  return doc;
}

ModelDocument translate_input_driven(const FsmSpec& spec) {
  StaticModel model(spec.name);

  std::map<std::string, StageId> input_process;
  std::vector<InputBinding> bindings;
  for (const std::string& input : spec.inputs) {
    MachineId m = model.add_machine(std::nullopt, input);
    StageId transfer = model.add_stage(m, StageKind::Transfer);
    StageId receive = model.add_stage(m, StageKind::Receive);
    StageId process = model.add_stage(m, StageKind::Process);
    model.add_flow(Endpoint{transfer}, Endpoint{receive});
    model.add_flow(Endpoint{receive}, Endpoint{process});
    model.bind_input(input, transfer);
    bindings.push_back(InputBinding{input, input + ".transfer", transfer, {}});
    input_process[input] = process;
  }

  // Which outputs does each state emit on entry? All transitions into one
  // state must agree so the create stage has a single emit list.
  std::map<std::string, std::vector<Thing>> entry_outputs;
  for (const FsmTransition& t : spec.transitions) {
    auto it = entry_outputs.find(t.to);
    if (it == entry_outputs.end())
      entry_outputs[t.to] = t.outputs;
    else if (!(it->second == t.outputs))
      throw ModelError(ErrorCode::InvalidSpec,
                       "transitions into `" + t.to + "` emit different outputs");
  }

  auto latch_name = [](const std::string& state) { return state + "_on"; };

  std::map<std::string, StageId> state_process;
  std::map<std::string, StageId> state_create;
  for (const std::string& state : spec.states) {
    MachineId m = model.add_machine(std::nullopt, state);
    Annotation off;
    off.actions.push_back(
        Action::assign(latch_name(state), Expr::literal(Thing::boolean(false))));
    state_process[state] = model.add_stage(m, StageKind::Process, off);
    auto outputs = entry_outputs.find(state);
    if (outputs != entry_outputs.end() && !outputs->second.empty()) {
      Annotation on;
      on.actions.push_back(
          Action::assign(latch_name(state), Expr::literal(Thing::boolean(true))));
      on.emit = outputs->second;
      state_create[state] = model.add_stage(m, StageKind::Create, on);
      StageId release = model.add_stage(m, StageKind::Release);
      StageId transfer = model.add_stage(m, StageKind::Transfer);
      model.add_flow(Endpoint{state_create[state]}, Endpoint{release});
      model.add_flow(Endpoint{release}, Endpoint{transfer});
    } else {
      Annotation on;
      on.actions.push_back(
          Action::assign(latch_name(state), Expr::literal(Thing::boolean(true))));
      on.emit.push_back(Thing::symbol(state));
      state_create[state] = model.add_stage(m, StageKind::Create, on);
    }
  }
  for (const std::string& state : spec.states)
    model.add_storage(std::nullopt, latch_name(state), Thing::boolean(state == spec.initial));

  // Two triggers per transition: switch the source off if it is on, switch
  // the target on if it is off. The latch absorbs repeated signals.
  StageId process = input_process.empty() ? StageId{} : input_process.begin()->second;
  for (const FsmTransition& t : spec.transitions) {
    ExprPtr guard = t.guard ? t.guard : Expr::literal(Thing::boolean(true));
    ExprPtr source_on = Expr::name(latch_name(t.from));
    ExprPtr target_off = Expr::unary(UnaryOp::Not, Expr::name(latch_name(t.to)));
    model.add_trigger(process, state_process[t.from],
                      Expr::binary(BinaryOp::And, guard, source_on));
    model.add_trigger(process, state_create[t.to],
                      Expr::binary(BinaryOp::And, guard, target_off));
  }

  return ModelDocument{std::move(model), {}, std::nullopt, std::move(bindings)};
}

}  // namespace

FsmParseResult parse_fsm(std::string_view source, std::string filename) {
  FsmParseResult result;
  LexResult lexed = tokenize(source, std::move(filename));
  result.diagnostics = lexed.diagnostics;
  if (!lexed.ok()) return result;
  FsmParser parser(std::move(lexed.tokens), result.diagnostics);
  result.spec = parser.run();
  if (has_errors(result.diagnostics)) result.spec.reset();
  return result;
}

ModelDocument fsm_to_tm(const FsmSpec& spec) {
  check_spec(spec);
  return spec.durations.empty() ? translate_input_driven(spec) : translate_timed(spec);
}

}  // namespace thingc

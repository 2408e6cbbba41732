#include "thingc/parser.hpp"

#include <set>

namespace thingc {

namespace {

// ---------------------------------------------------------------------------
// Raw syntax tree. The model is built after the whole file has been read so
// declarations may reference machines introduced later.
// ---------------------------------------------------------------------------

struct RawPath {
  std::vector<std::string> parts;  // machine names (and possibly storage name)
  std::optional<StageKind> stage;  // set when the path ends in a stage keyword
  std::string text;
  SourceSpan span;
};

struct RawStage {
  StageKind kind;
  Annotation annotation;
  SourceSpan span;
};

struct RawStorage {
  std::string name;
  std::optional<Thing> initial;
  SourceSpan span;
};

struct RawFlow {
  RawPath from, to;
  SourceSpan span;
};

struct RawTrigger {
  RawPath from, to;
  ExprPtr condition;
  SourceSpan span;
};

struct RawMachine {
  std::string name;
  SourceSpan span;
  std::vector<RawStage> stages;
  std::vector<RawStorage> storages;
  std::vector<RawMachine> machines;
};

struct RawEvent {
  std::string name;
  std::optional<std::string> label;
  std::vector<RawPath> elements;
  ExprPtr duration;
  SourceSpan span;
};

struct RawBehavior {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::string> repeats;
  SourceSpan span;
};

struct RawInput {
  RawPath path;
  std::vector<Thing> things;
  SourceSpan span;
};

struct RawDocument {
  std::string model_name;
  SourceSpan model_span;
  std::vector<RawStorage> storages;  // model-level
  std::vector<RawMachine> machines;
  std::vector<RawFlow> flows;        // declaration order, nested ones hoisted
  std::vector<RawTrigger> triggers;
  std::vector<RawEvent> events;
  std::optional<RawBehavior> behavior;
  std::vector<RawInput> inputs;
};

struct ParseFailure {};  // unwinds to parse() after a syntax error

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diagnostics)
      : tokens_(std::move(tokens)), diagnostics_(diagnostics) {}

  RawDocument parse_document() {
    RawDocument doc;
    expect_keyword("model", "document");
    doc.model_span = peek().span;
    doc.model_name = expect_identifier("model name");
    expect(TokenKind::LBrace, "document");
    while (!at(TokenKind::RBrace)) parse_item(doc, nullptr);
    expect(TokenKind::RBrace, "document");
    while (peek().is_keyword("event")) doc.events.push_back(parse_event());
    if (peek().is_keyword("behavior")) doc.behavior = parse_behavior();
    while (peek().is_keyword("input")) doc.inputs.push_back(parse_input());
    expect(TokenKind::EndOfFile, "document");
    return doc;
  }

  ExprPtr parse_full_expression() {
    ExprPtr e = parse_expr();
    expect(TokenKind::EndOfFile, "expression");
    return e;
  }

  std::vector<Thing> parse_full_literal_list() {
    std::vector<Thing> things = parse_literal_list_body();
    expect(TokenKind::EndOfFile, "literal list");
    return things;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  Token advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const SourceSpan& span, const std::string& message,
                         const std::string& rule) {
    diagnostics_.push_back({Severity::Error, span, message, rule});
    throw ParseFailure{};
  }

  Token expect(TokenKind kind, const std::string& rule) {
    if (!at(kind)) {
      fail(peek().span,
           "expected " + token_kind_label(kind) + ", found `" + token_text(peek()) + "`",
           rule);
    }
    return advance();
  }

  void expect_keyword(const std::string& kw, const std::string& rule) {
    if (!peek().is_keyword(kw))
      fail(peek().span, "expected `" + kw + "`, found `" + token_text(peek()) + "`", rule);
    advance();
  }

  std::string expect_identifier(const std::string& what) {
    if (!at(TokenKind::Identifier))
      fail(peek().span, "expected " + what + ", found `" + token_text(peek()) + "`",
           "identifier");
    return advance().text;
  }

  static std::string token_text(const Token& t) {
    if (t.kind == TokenKind::EndOfFile) return "<eof>";
    if (t.kind == TokenKind::String) return "\"" + t.text + "\"";
    return t.text;
  }

  static std::string token_kind_label(TokenKind k) {
    switch (k) {
      case TokenKind::Identifier: return "an identifier";
      case TokenKind::Integer: return "an integer";
      case TokenKind::String: return "a string";
      case TokenKind::LBrace: return "`{`";
      case TokenKind::RBrace: return "`}`";
      case TokenKind::LBracket: return "`[`";
      case TokenKind::RBracket: return "`]`";
      case TokenKind::LParen: return "`(`";
      case TokenKind::RParen: return "`)`";
      case TokenKind::Semicolon: return "`;`";
      case TokenKind::Comma: return "`,`";
      case TokenKind::Arrow: return "`->`";
      case TokenKind::Eq: return "`=`";
      case TokenKind::EndOfFile: return "end of input";
      default: return "a token";
    }
  }

  std::optional<StageKind> stage_keyword() const {
    if (peek().kind != TokenKind::Keyword) return std::nullopt;
    return stage_kind_from(peek().text);
  }

  // item := machinedecl | flowdecl | triggerdecl | storagedecl | stagedecl*
  // (*stage declarations are only valid inside a machine body)
  void parse_item(RawDocument& doc, RawMachine* enclosing) {
    if (peek().is_keyword("machine")) {
      RawMachine m = parse_machine(doc);
      if (enclosing)
        enclosing->machines.push_back(std::move(m));
      else
        doc.machines.push_back(std::move(m));
      return;
    }
    if (peek().is_keyword("storage")) {
      RawStorage s = parse_storage();
      if (enclosing)
        enclosing->storages.push_back(std::move(s));
      else
        doc.storages.push_back(std::move(s));
      return;
    }
    if (peek().is_keyword("flow")) {
      doc.flows.push_back(parse_flow());
      return;
    }
    if (peek().is_keyword("trigger")) {
      doc.triggers.push_back(parse_trigger());
      return;
    }
    if (enclosing) {
      if (auto kind = stage_keyword()) {
        enclosing->stages.push_back(parse_stage(*kind));
        return;
      }
      fail(peek().span,
           "expected a stage, machine, storage, flow or trigger declaration, found `" +
               token_text(peek()) + "`",
           "machinedecl");
    }
    fail(peek().span,
         "expected a machine, storage, flow or trigger declaration, found `" +
             token_text(peek()) + "`",
         "item");
  }

  RawMachine parse_machine(RawDocument& doc) {
    expect_keyword("machine", "machinedecl");
    RawMachine m;
    m.span = peek().span;
    m.name = expect_identifier("machine name");
    expect(TokenKind::LBrace, "machinedecl");
    while (!at(TokenKind::RBrace)) parse_item(doc, &m);
    expect(TokenKind::RBrace, "machinedecl");
    return m;
  }

  RawStage parse_stage(StageKind kind) {
    RawStage s;
    s.kind = kind;
    s.span = peek().span;
    advance();  // the stage keyword
    s.annotation = parse_annotation();
    expect(TokenKind::Semicolon, "stagedecl");
    return s;
  }

  // annotation := ("when" expr)? ("after" expr)? ("do" actions)? ("emit" [...])?
  Annotation parse_annotation() {
    Annotation ann;
    if (peek().is_keyword("when")) {
      advance();
      ann.guard = parse_expr();
    }
    if (peek().is_keyword("after")) {
      advance();
      ann.delay = parse_expr();
    }
    if (peek().is_keyword("do")) {
      advance();
      ann.actions.push_back(parse_action());
      while (at(TokenKind::Comma)) {
        advance();
        ann.actions.push_back(parse_action());
      }
    }
    if (peek().is_keyword("emit")) {
      advance();
      expect(TokenKind::LBracket, "annotation");
      ann.emit = parse_literal_items();
      expect(TokenKind::RBracket, "annotation");
    }
    return ann;
  }

  Action parse_action() {
    if (peek().is_keyword("verdict")) {
      SourceSpan span = peek().span;
      advance();
      expect(TokenKind::LParen, "action");
      std::string which = expect_identifier("verdict value");
      expect(TokenKind::RParen, "action");
      if (which == "accepted") return Action::verdict_of(Verdict::Accepted);
      if (which == "rejected") return Action::verdict_of(Verdict::Rejected);
      fail(span, "verdict must be `accepted` or `rejected`, found `" + which + "`", "action");
    }
    if (at(TokenKind::Identifier) && peek(1).kind == TokenKind::Assign) {
      std::string target = advance().text;
      advance();  // :=
      return Action::assign(std::move(target), parse_expr());
    }
    return Action::transform(parse_expr());
  }

  RawStorage parse_storage() {
    expect_keyword("storage", "storagedecl");
    RawStorage s;
    s.span = peek().span;
    s.name = expect_identifier("storage name");
    if (at(TokenKind::Eq)) {
      advance();
      s.initial = parse_literal();
    }
    expect(TokenKind::Semicolon, "storagedecl");
    return s;
  }

  RawFlow parse_flow() {
    expect_keyword("flow", "flowdecl");
    RawFlow f;
    f.span = peek().span;
    f.from = parse_path();
    expect(TokenKind::Arrow, "flowdecl");
    f.to = parse_path();
    expect(TokenKind::Semicolon, "flowdecl");
    return f;
  }

  RawTrigger parse_trigger() {
    expect_keyword("trigger", "triggerdecl");
    RawTrigger t;
    t.span = peek().span;
    t.from = parse_path();
    expect(TokenKind::Arrow, "triggerdecl");
    t.to = parse_path();
    if (peek().is_keyword("when")) {
      advance();
      t.condition = parse_expr();
    }
    expect(TokenKind::Semicolon, "triggerdecl");
    return t;
  }

  // path := IDENT ("." IDENT)* ("." STAGEKW)?   A bare identifier names a
  // model-level storage; a trailing stage keyword names a stage.
  RawPath parse_path() {
    RawPath p;
    p.span = peek().span;
    p.parts.push_back(expect_identifier("a path"));
    p.text = p.parts.back();
    while (at(TokenKind::Dot)) {
      advance();
      if (auto kind = stage_keyword()) {
        p.stage = kind;
        p.text += ".";
        p.text += peek().text;
        advance();
        break;
      }
      p.parts.push_back(expect_identifier("a path segment"));
      p.text += "." + p.parts.back();
    }
    return p;
  }

  RawEvent parse_event() {
    expect_keyword("event", "eventdecl");
    RawEvent e;
    e.span = peek().span;
    e.name = expect_identifier("event name");
    if (at(TokenKind::String)) e.label = advance().text;
    expect_keyword("over", "eventdecl");
    expect(TokenKind::LBrace, "eventdecl");
    e.elements.push_back(parse_path());
    while (at(TokenKind::Comma)) {
      advance();
      e.elements.push_back(parse_path());
    }
    expect(TokenKind::RBrace, "eventdecl");
    if (peek().is_keyword("duration")) {
      advance();
      e.duration = parse_expr();
    }
    expect(TokenKind::Semicolon, "eventdecl");
    return e;
  }

  RawBehavior parse_behavior() {
    RawBehavior b;
    b.span = peek().span;
    expect_keyword("behavior", "behaviordecl");
    expect(TokenKind::LBrace, "behaviordecl");
    while (!at(TokenKind::RBrace)) {
      if (peek().is_keyword("repeat")) {
        advance();
        b.repeats.push_back(expect_identifier("event name"));
        expect(TokenKind::Semicolon, "behaviordecl");
        continue;
      }
      std::string from = expect_identifier("event name");
      expect(TokenKind::Arrow, "behaviordecl");
      std::string to = expect_identifier("event name");
      expect(TokenKind::Semicolon, "behaviordecl");
      b.edges.emplace_back(std::move(from), std::move(to));
    }
    expect(TokenKind::RBrace, "behaviordecl");
    return b;
  }

  RawInput parse_input() {
    expect_keyword("input", "inputdecl");
    RawInput in;
    in.span = peek().span;
    in.path = parse_path();
    expect(TokenKind::Eq, "inputdecl");
    expect(TokenKind::LBracket, "inputdecl");
    in.things = parse_literal_items();
    expect(TokenKind::RBracket, "inputdecl");
    expect(TokenKind::Semicolon, "inputdecl");
    return in;
  }

  std::vector<Thing> parse_literal_items() {
    std::vector<Thing> out;
    if (at(TokenKind::RBracket)) return out;
    out.push_back(parse_literal());
    while (at(TokenKind::Comma)) {
      advance();
      out.push_back(parse_literal());
    }
    return out;
  }

  std::vector<Thing> parse_literal_list_body() {
    expect(TokenKind::LBracket, "literal list");
    std::vector<Thing> out = parse_literal_items();
    expect(TokenKind::RBracket, "literal list");
    return out;
  }

  // literal := "-"? INT | STRING | IDENT | "true" | "false" | "[" ... "]"
  Thing parse_literal() {
    if (at(TokenKind::Minus)) {
      advance();
      Token t = expect(TokenKind::Integer, "literal");
      return Thing::integer(-t.value);
    }
    if (at(TokenKind::Integer)) return Thing::integer(advance().value);
    if (at(TokenKind::String)) return Thing::text(advance().text);
    if (peek().is_keyword("true")) {
      advance();
      return Thing::boolean(true);
    }
    if (peek().is_keyword("false")) {
      advance();
      return Thing::boolean(false);
    }
    if (at(TokenKind::Identifier)) return Thing::symbol(advance().text);
    if (at(TokenKind::LBracket)) return Thing::list(parse_literal_list_body());
    fail(peek().span, "expected a literal, found `" + token_text(peek()) + "`", "literal");
  }

  // Expression grammar, loosest to tightest:
  //   or  <  and  <  not  <  comparison  <  + -  <  * / %  <  unary -  <  []
  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (peek().is_keyword("or")) {
      advance();
      lhs = Expr::binary(BinaryOp::Or, lhs, parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (peek().is_keyword("and")) {
      advance();
      lhs = Expr::binary(BinaryOp::And, lhs, parse_not());
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (peek().is_keyword("not")) {
      advance();
      return Expr::unary(UnaryOp::Not, parse_not());
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    BinaryOp op;
    switch (peek().kind) {
      case TokenKind::Eq: op = BinaryOp::Eq; break;
      case TokenKind::Ne: op = BinaryOp::Ne; break;
      case TokenKind::Lt: op = BinaryOp::Lt; break;
      case TokenKind::Le: op = BinaryOp::Le; break;
      case TokenKind::Gt: op = BinaryOp::Gt; break;
      case TokenKind::Ge: op = BinaryOp::Ge; break;
      default: return lhs;
    }
    advance();
    return Expr::binary(op, lhs, parse_additive());
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (at(TokenKind::Plus) || at(TokenKind::Minus)) {
      BinaryOp op = at(TokenKind::Plus) ? BinaryOp::Add : BinaryOp::Sub;
      advance();
      lhs = Expr::binary(op, lhs, parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (at(TokenKind::Star) || at(TokenKind::Slash) || at(TokenKind::Percent)) {
      BinaryOp op = at(TokenKind::Star)    ? BinaryOp::Mul
                    : at(TokenKind::Slash) ? BinaryOp::Div
                                           : BinaryOp::Mod;
      advance();
      lhs = Expr::binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(TokenKind::Minus)) {
      advance();
      return Expr::unary(UnaryOp::Neg, parse_unary());
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr base = parse_primary();
    while (at(TokenKind::LBracket)) {
      advance();
      ExprPtr idx = parse_expr();
      expect(TokenKind::RBracket, "expr");
      base = Expr::index(base, idx);
    }
    return base;
  }

  ExprPtr parse_primary() {
    if (at(TokenKind::Integer)) return Expr::literal(Thing::integer(advance().value));
    if (at(TokenKind::String)) return Expr::literal(Thing::text(advance().text));
    if (peek().is_keyword("true")) {
      advance();
      return Expr::literal(Thing::boolean(true));
    }
    if (peek().is_keyword("false")) {
      advance();
      return Expr::literal(Thing::boolean(false));
    }
    if (peek().is_keyword("it")) {
      advance();
      return Expr::it();
    }
    if (peek().is_keyword("now")) {
      advance();
      return Expr::now();
    }
    if (peek().is_keyword("len")) {
      advance();
      expect(TokenKind::LParen, "expr");
      ExprPtr arg = parse_expr();
      expect(TokenKind::RParen, "expr");
      return Expr::len(arg);
    }
    if (at(TokenKind::Identifier)) return Expr::name(advance().text);
    if (at(TokenKind::LParen)) {
      advance();
      ExprPtr e = parse_expr();
      expect(TokenKind::RParen, "expr");
      return e;
    }
    fail(peek().span, "expected an expression, found `" + token_text(peek()) + "`", "expr");
  }

  std::vector<Token> tokens_;
  std::vector<ParseDiagnostic>& diagnostics_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Resolution: raw tree -> StaticModel + events + behavior + inputs.
// ---------------------------------------------------------------------------

class Resolver {
 public:
  Resolver(const RawDocument& raw, std::vector<ParseDiagnostic>& diagnostics)
      : raw_(raw), diagnostics_(diagnostics) {}

  std::optional<ModelDocument> resolve() {
    StaticModel model(raw_.model_name.empty() ? "model" : raw_.model_name);
    for (const RawStorage& s : raw_.storages) add_storage(model, std::nullopt, s);
    for (const RawMachine& m : raw_.machines) add_machine(model, std::nullopt, m);
    for (const RawFlow& f : raw_.flows) add_flow(model, f);
    for (const RawTrigger& t : raw_.triggers) add_trigger(model, t);
    check_expression_names(model);

    ModelDocument doc{std::move(model), {}, std::nullopt, {}};
    for (const RawEvent& e : raw_.events) add_event(doc, e);
    if (raw_.behavior) add_behavior(doc, *raw_.behavior);
    for (const RawInput& in : raw_.inputs) add_input(doc, in);

    if (has_errors(diagnostics_)) return std::nullopt;
    return doc;
  }

 private:
  void error(const SourceSpan& span, const std::string& message, const std::string& rule) {
    diagnostics_.push_back({Severity::Error, span, message, rule});
  }

  void add_storage(StaticModel& model, std::optional<MachineId> owner, const RawStorage& s) {
    try {
      model.add_storage(owner, s.name, s.initial);
    } catch (const ModelError& err) {
      error(s.span, err.what(), "storagedecl");
    }
  }

  void add_machine(StaticModel& model, std::optional<MachineId> parent, const RawMachine& m) {
    MachineId id;
    try {
      id = model.add_machine(parent, m.name);
    } catch (const ModelError& err) {
      error(m.span, err.what(), "machinedecl");
      return;
    }
    for (const RawStorage& s : m.storages) add_storage(model, id, s);
    for (const RawStage& s : m.stages) {
      try {
        model.add_stage(id, s.kind, s.annotation);
      } catch (const ModelError& err) {
        error(s.span, err.what(), "stagedecl");
      }
    }
    for (const RawMachine& child : m.machines) add_machine(model, id, child);
  }

  std::optional<Endpoint> resolve_endpoint(const StaticModel& model, const RawPath& p) {
    if (p.stage) {
      auto machine = model.find_machine(p.parts);
      if (!machine) {
        error(p.span, "unresolved machine `" + join(p.parts) + "`", "UnresolvedName");
        return std::nullopt;
      }
      auto stage = model.find_stage(*machine, *p.stage);
      if (!stage) {
        error(p.span,
              "machine `" + join(p.parts) + "` has no " + stage_kind_name(*p.stage) +
                  " stage",
              "UnresolvedName");
        return std::nullopt;
      }
      return Endpoint{*stage};
    }
    // Terminal identifier: a storage, either machine-owned or model-level.
    if (p.parts.size() >= 2) {
      std::vector<std::string> machine_parts(p.parts.begin(), p.parts.end() - 1);
      auto machine = model.find_machine(machine_parts);
      if (machine) {
        if (auto sid = model.find_storage_in(*machine, p.parts.back()))
          return Endpoint{*sid};
      }
      error(p.span, "unresolved storage `" + p.text + "`", "UnresolvedName");
      return std::nullopt;
    }
    if (auto sid = model.find_model_storage(p.parts.front())) return Endpoint{*sid};
    error(p.span, "unresolved name `" + p.text + "`", "UnresolvedName");
    return std::nullopt;
  }

  std::optional<StageId> resolve_stage(const StaticModel& model, const RawPath& p) {
    auto e = resolve_endpoint(model, p);
    if (!e) return std::nullopt;
    if (const StageId* s = std::get_if<StageId>(&*e)) return *s;
    error(p.span, "`" + p.text + "` names a storage where a stage is required",
          "UnresolvedName");
    return std::nullopt;
  }

  static std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
      if (!out.empty()) out += '.';
      out += p;
    }
    return out;
  }

  // Endpoints must resolve at parse time; legality of the pair is the
  // validator's verdict, so an illegal flow still parses into the model.
  void add_flow(StaticModel& model, const RawFlow& f) {
    auto from = resolve_endpoint(model, f.from);
    auto to = resolve_endpoint(model, f.to);
    if (!from || !to) return;
    model.insert_flow_unchecked(*from, *to);
  }

  void add_trigger(StaticModel& model, const RawTrigger& t) {
    auto from = resolve_stage(model, t.from);
    auto to = resolve_stage(model, t.to);
    if (!from || !to) return;
    model.insert_trigger_unchecked(*from, *to, t.condition);
  }

  // Every storage name mentioned by an annotation or trigger condition must
  // resolve in the scope of the stage that will evaluate it.
  void check_expression_names(const StaticModel& model) {
    auto check_expr = [&](const ExprPtr& e, MachineId scope, const SourceSpan& span,
                          const char* rule) {
      if (!e) return;
      collect_names(*e, [&](const std::string& name) {
        if (!model.resolve_storage(scope, name))
          error(span, "unresolved name `" + name + "` in expression", rule);
      });
    };
    for (const Stage& s : model.stages()) {
      SourceSpan span = span_for_stage(model, s);
      check_expr(s.annotation.guard, s.owner, span, "when");
      check_expr(s.annotation.delay, s.owner, span, "after");
      for (const Action& a : s.annotation.actions) {
        if (a.kind == Action::Kind::Assign && !model.resolve_storage(s.owner, a.target))
          error(span, "unresolved storage `" + a.target + "` in assignment", "do");
        check_expr(a.expr, s.owner, span, "do");
      }
    }
    for (const Trigger& t : model.triggers()) {
      if (!t.condition) continue;
      const Stage& from = model.stage(t.from);
      check_expr(t.condition, from.owner, span_for_trigger(t), "when");
    }
  }

  // Spans for resolved elements are approximated by the declaration spans
  // kept in the raw tree, matched by declaration order.
  SourceSpan span_for_stage(const StaticModel& model, const Stage& s) const {
    std::size_t i = 0;
    return find_stage_span(raw_.machines, model, s, i);
  }

  SourceSpan find_stage_span(const std::vector<RawMachine>& machines,
                             const StaticModel& model, const Stage& target,
                             std::size_t& machine_ordinal) const {
    for (const RawMachine& m : machines) {
      std::size_t this_ordinal = machine_ordinal++;
      for (const RawStage& rs : m.stages) {
        if (this_ordinal < model.machines().size() &&
            model.machines()[this_ordinal].id == target.owner && rs.kind == target.kind)
          return rs.span;
      }
      SourceSpan found = find_stage_span(m.machines, model, target, machine_ordinal);
      if (found.length != UINT32_MAX) return found;
    }
    SourceSpan none;
    none.length = UINT32_MAX;
    return none;
  }

  SourceSpan span_for_trigger(const Trigger& t) const {
    if (t.id.index < raw_.triggers.size()) return raw_.triggers[t.id.index].span;
    return SourceSpan{};
  }

  template <typename Fn>
  static void collect_names(const Expr& e, Fn&& fn) {
    switch (e.kind()) {
      case Expr::Kind::Name:
        fn(e.name_text());
        return;
      case Expr::Kind::Index:
      case Expr::Kind::Binary:
        collect_names(*e.lhs(), fn);
        collect_names(*e.rhs(), fn);
        return;
      case Expr::Kind::Len:
      case Expr::Kind::Unary:
        collect_names(*e.lhs(), fn);
        return;
      default:
        return;
    }
  }

  void add_event(ModelDocument& doc, const RawEvent& e) {
    if (doc.find_event(e.name)) {
      error(e.span, "event `" + e.name + "` declared twice", "eventdecl");
      return;
    }
    std::vector<ElementRef> elements;
    for (const RawPath& p : e.elements) {
      auto ep = resolve_endpoint(doc.model, p);
      if (!ep) return;
      if (const StageId* s = std::get_if<StageId>(&*ep))
        elements.push_back(*s);
      else
        elements.push_back(std::get<StorageId>(*ep));
    }
    Time duration = 0;
    if (e.duration) {
      if (e.duration->depends_on_context()) {
        error(e.span, "event duration must be a constant expression", "eventdecl");
        return;
      }
      try {
        Thing v = evaluate(*e.duration, EvalContext{});
        if (!v.is_integer()) {
          error(e.span, "event duration must be an integer", "eventdecl");
          return;
        }
        duration = v.as_integer();
      } catch (const EvalError& err) {
        error(e.span, std::string("bad duration: ") + err.what(), "eventdecl");
        return;
      }
    }
    try {
      Region region = define_region(doc.model, elements);
      doc.events.push_back(define_event(doc.model, e.name, std::move(region), duration, e.label));
    } catch (const DynamicsError& err) {
      error(e.span, err.what(), "eventdecl");
    }
  }

  void add_behavior(ModelDocument& doc, const RawBehavior& b) {
    try {
      doc.behavior = build_behavior(doc.events, b.edges, b.repeats);
    } catch (const DynamicsError& err) {
      error(b.span, err.what(), "behaviordecl");
    }
  }

  void add_input(ModelDocument& doc, const RawInput& in) {
    if (!in.path.stage) {
      error(in.span, "input bindings must target a transfer or create stage", "inputdecl");
      return;
    }
    auto stage = resolve_stage(doc.model, in.path);
    if (!stage) return;
    std::string name = join(in.path.parts);
    try {
      doc.model.bind_input(name, *stage);
    } catch (const ModelError& err) {
      error(in.span, err.what(), "inputdecl");
      return;
    }
    doc.inputs.push_back(InputBinding{name, in.path.text, *stage, in.things});
  }

  const RawDocument& raw_;
  std::vector<ParseDiagnostic>& diagnostics_;
};

}  // namespace

ParseResult parse(std::string_view source, std::string filename) {
  ParseResult result;
  LexResult lexed = tokenize(source, filename);
  result.diagnostics = lexed.diagnostics;
  if (!lexed.ok()) return result;

  RawDocument raw;
  try {
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    raw = parser.parse_document();
  } catch (const ParseFailure&) {
    return result;
  }

  Resolver resolver(raw, result.diagnostics);
  result.document = resolver.resolve();
  if (has_errors(result.diagnostics)) result.document.reset();
  return result;
}

ExprParseResult parse_expression(std::string_view source, std::string filename) {
  ExprParseResult result;
  LexResult lexed = tokenize(source, filename);
  result.diagnostics = lexed.diagnostics;
  if (!lexed.ok()) return result;
  try {
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    result.expr = parser.parse_full_expression();
  } catch (const ParseFailure&) {
  }
  return result;
}

LiteralListResult parse_literal_list(std::string_view source, std::string filename) {
  LiteralListResult result;
  LexResult lexed = tokenize(source, filename);
  result.diagnostics = lexed.diagnostics;
  if (!lexed.ok()) return result;
  try {
    Parser parser(std::move(lexed.tokens), result.diagnostics);
    result.things = parser.parse_full_literal_list();
  } catch (const ParseFailure&) {
  }
  return result;
}

}  // namespace thingc

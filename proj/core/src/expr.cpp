#include "thingc/expr.hpp"

namespace thingc {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::literal(Thing v) {
  Expr e;
  e.kind_ = Kind::Literal;
  e.value_ = std::move(v);
  return make(std::move(e));
}

ExprPtr Expr::it() {
  Expr e;
  e.kind_ = Kind::It;
  return make(std::move(e));
}

ExprPtr Expr::now() {
  Expr e;
  e.kind_ = Kind::Now;
  return make(std::move(e));
}

ExprPtr Expr::name(std::string n) {
  Expr e;
  e.kind_ = Kind::Name;
  e.name_ = std::move(n);
  return make(std::move(e));
}

ExprPtr Expr::index(ExprPtr base, ExprPtr idx) {
  Expr e;
  e.kind_ = Kind::Index;
  e.lhs_ = std::move(base);
  e.rhs_ = std::move(idx);
  return make(std::move(e));
}

ExprPtr Expr::len(ExprPtr arg) {
  Expr e;
  e.kind_ = Kind::Len;
  e.lhs_ = std::move(arg);
  return make(std::move(e));
}

ExprPtr Expr::unary(UnaryOp op, ExprPtr operand) {
  Expr e;
  e.kind_ = Kind::Unary;
  e.uop_ = op;
  e.lhs_ = std::move(operand);
  return make(std::move(e));
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  Expr e;
  e.kind_ = Kind::Binary;
  e.bop_ = op;
  e.lhs_ = std::move(lhs);
  e.rhs_ = std::move(rhs);
  return make(std::move(e));
}

bool Expr::equals(const Expr& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::Literal: return value_ == other.value_;
    case Kind::It:
    case Kind::Now: return true;
    case Kind::Name: return name_ == other.name_;
    case Kind::Index: return lhs_->equals(*other.lhs_) && rhs_->equals(*other.rhs_);
    case Kind::Len: return lhs_->equals(*other.lhs_);
    case Kind::Unary: return uop_ == other.uop_ && lhs_->equals(*other.lhs_);
    case Kind::Binary:
      return bop_ == other.bop_ && lhs_->equals(*other.lhs_) && rhs_->equals(*other.rhs_);
  }
  return false;
}

bool Expr::depends_on_context() const {
  switch (kind_) {
    case Kind::Literal: return false;
    case Kind::It:
    case Kind::Now:
    case Kind::Name: return true;
    case Kind::Index:
      return lhs_->depends_on_context() || rhs_->depends_on_context();
    case Kind::Len:
      return lhs_->depends_on_context();
    case Kind::Unary: return lhs_->depends_on_context();
    case Kind::Binary:
      return lhs_->depends_on_context() || rhs_->depends_on_context();
  }
  return false;
}

Action Action::transform(ExprPtr e) {
  Action a;
  a.kind = Kind::Transform;
  a.expr = std::move(e);
  return a;
}

Action Action::assign(std::string target, ExprPtr e) {
  Action a;
  a.kind = Kind::Assign;
  a.target = std::move(target);
  a.expr = std::move(e);
  return a;
}

Action Action::verdict_of(Verdict v) {
  Action a;
  a.kind = Kind::Verdict;
  a.verdict = v;
  return a;
}

bool Action::equals(const Action& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::Transform: return expr->equals(*other.expr);
    case Kind::Assign: return target == other.target && expr->equals(*other.expr);
    case Kind::Verdict: return verdict == other.verdict;
  }
  return false;
}

namespace {

[[noreturn]] void type_error(const std::string& msg) {
  throw EvalError(EvalError::Kind::TypeMismatch, msg);
}

std::int64_t want_integer(const Thing& t, const char* where) {
  if (!t.is_integer())
    type_error(std::string(where) + ": expected integer, got " +
               Thing::kind_name(t.kind()));
  return t.as_integer();
}

bool want_boolean(const Thing& t, const char* where) {
  if (!t.is_boolean())
    type_error(std::string(where) + ": expected boolean, got " +
               Thing::kind_name(t.kind()));
  return t.as_boolean();
}

}  // namespace

Thing evaluate(const Expr& expr, const EvalContext& ctx) {
  using K = Expr::Kind;
  switch (expr.kind()) {
    case K::Literal:
      return expr.literal_value();
    case K::It:
      if (!ctx.it)
        throw EvalError(EvalError::Kind::UnboundName, "`it` is not bound here");
      return *ctx.it;
    case K::Now:
      return Thing::integer(ctx.now);
    case K::Name: {
      const Thing* cell = ctx.lookup ? ctx.lookup(expr.name_text()) : nullptr;
      if (!cell)
        throw EvalError(EvalError::Kind::UnboundName,
                        "unbound name `" + expr.name_text() + "`");
      return *cell;
    }
    case K::Index: {
      Thing base = evaluate(*expr.lhs(), ctx);
      Thing idx = evaluate(*expr.rhs(), ctx);
      if (!base.is_list()) type_error("indexing a non-list value");
      std::int64_t i = want_integer(idx, "index");
      // Indices are 1-based: s[1] is the first element, s[len(s)] the last.
      if (i < 1 || static_cast<std::size_t>(i) > base.items().size())
        throw EvalError(EvalError::Kind::IndexOutOfRange,
                        "index " + std::to_string(i) + " out of range for list of length " +
                            std::to_string(base.items().size()));
      return base.items()[static_cast<std::size_t>(i - 1)];
    }
    case K::Len: {
      Thing arg = evaluate(*expr.lhs(), ctx);
      if (arg.is_list()) return Thing::integer(static_cast<std::int64_t>(arg.items().size()));
      if (arg.is_text())
        return Thing::integer(static_cast<std::int64_t>(arg.as_string().size()));
      type_error("len() requires a list or text value");
    }
    case K::Unary: {
      Thing v = evaluate(*expr.lhs(), ctx);
      if (expr.unary_op() == UnaryOp::Neg) return Thing::integer(-want_integer(v, "unary -"));
      return Thing::boolean(!want_boolean(v, "not"));
    }
    case K::Binary: {
      BinaryOp op = expr.binary_op();
      if (op == BinaryOp::And || op == BinaryOp::Or) {
        bool lhs = want_boolean(evaluate(*expr.lhs(), ctx), "boolean operator");
        // Short-circuit: guards like `k <= n and it[k] = 0` rely on it.
        if (op == BinaryOp::And && !lhs) return Thing::boolean(false);
        if (op == BinaryOp::Or && lhs) return Thing::boolean(true);
        return Thing::boolean(want_boolean(evaluate(*expr.rhs(), ctx), "boolean operator"));
      }
      Thing lhs = evaluate(*expr.lhs(), ctx);
      Thing rhs = evaluate(*expr.rhs(), ctx);
      switch (op) {
        case BinaryOp::Add:
          return Thing::integer(want_integer(lhs, "+") + want_integer(rhs, "+"));
        case BinaryOp::Sub:
          return Thing::integer(want_integer(lhs, "-") - want_integer(rhs, "-"));
        case BinaryOp::Mul:
          return Thing::integer(want_integer(lhs, "*") * want_integer(rhs, "*"));
        case BinaryOp::Div: {
          std::int64_t d = want_integer(rhs, "/");
          if (d == 0) throw EvalError(EvalError::Kind::DivisionByZero, "division by zero");
          return Thing::integer(want_integer(lhs, "/") / d);
        }
        case BinaryOp::Mod: {
          std::int64_t d = want_integer(rhs, "%");
          if (d == 0) throw EvalError(EvalError::Kind::DivisionByZero, "modulo by zero");
          return Thing::integer(want_integer(lhs, "%") % d);
        }
        case BinaryOp::Eq:
        case BinaryOp::Ne: {
          if (lhs.kind() != rhs.kind())
            type_error("comparing values of different kinds");
          bool eq = lhs == rhs;
          return Thing::boolean(op == BinaryOp::Eq ? eq : !eq);
        }
        case BinaryOp::Lt:
          return Thing::boolean(want_integer(lhs, "<") < want_integer(rhs, "<"));
        case BinaryOp::Le:
          return Thing::boolean(want_integer(lhs, "<=") <= want_integer(rhs, "<="));
        case BinaryOp::Gt:
          return Thing::boolean(want_integer(lhs, ">") > want_integer(rhs, ">"));
        case BinaryOp::Ge:
          return Thing::boolean(want_integer(lhs, ">=") >= want_integer(rhs, ">="));
        default:
          break;
      }
      type_error("unreachable operator");
    }
  }
  type_error("unreachable expression kind");
}

const char* binary_op_token(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

const char* unary_op_token(UnaryOp op) {
  return op == UnaryOp::Neg ? "-" : "not";
}

}  // namespace thingc

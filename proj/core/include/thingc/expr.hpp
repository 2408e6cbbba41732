#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "thingc/thing.hpp"

namespace thingc {

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };
enum class UnaryOp { Neg, Not };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Expression AST for guards, delays, actions and trigger conditions.
/// `it` is the thing currently at the stage, `now` the simulation clock,
/// bare names resolve to storage cells in scope.
class Expr {
 public:
  enum class Kind { Literal, It, Now, Name, Index, Len, Unary, Binary };

  static ExprPtr literal(Thing v);
  static ExprPtr it();
  static ExprPtr now();
  static ExprPtr name(std::string n);
  static ExprPtr index(ExprPtr base, ExprPtr idx);
  static ExprPtr len(ExprPtr arg);
  static ExprPtr unary(UnaryOp op, ExprPtr operand);
  static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

  Kind kind() const { return kind_; }
  const Thing& literal_value() const { return value_; }
  const std::string& name_text() const { return name_; }
  UnaryOp unary_op() const { return uop_; }
  BinaryOp binary_op() const { return bop_; }
  const ExprPtr& lhs() const { return lhs_; }
  const ExprPtr& rhs() const { return rhs_; }

  bool equals(const Expr& other) const;

  /// True when the expression mentions `it`, `now` or any storage name.
  bool depends_on_context() const;

 private:
  Kind kind_ = Kind::Literal;
  Thing value_;
  std::string name_;
  UnaryOp uop_ = UnaryOp::Neg;
  BinaryOp bop_ = BinaryOp::Add;
  ExprPtr lhs_;
  ExprPtr rhs_;
};

enum class Verdict { Accepted, Rejected };

/// One clause of a `do` list: transform the thing, write a storage cell, or
/// record the run verdict.
struct Action {
  enum class Kind { Transform, Assign, Verdict };
  Kind kind = Kind::Transform;
  std::string target;       // Assign only
  ExprPtr expr;             // Transform and Assign
  Verdict verdict = Verdict::Accepted;  // Verdict only

  static Action transform(ExprPtr e);
  static Action assign(std::string target, ExprPtr e);
  static Action verdict_of(Verdict v);
  bool equals(const Action& other) const;
};

struct EvalError : std::runtime_error {
  enum class Kind { UnboundName, TypeMismatch, IndexOutOfRange, DivisionByZero };
  Kind error_kind;
  EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), error_kind(k) {}
};

struct EvalContext {
  const Thing* it = nullptr;
  std::int64_t now = 0;
  // Returns the cell value for a storage name in scope, or nullptr.
  std::function<const Thing*(const std::string&)> lookup;
};

/// Evaluates an expression; total over well-typed inputs, throws EvalError
/// otherwise. No side effects.
Thing evaluate(const Expr& expr, const EvalContext& ctx);

const char* binary_op_token(BinaryOp op);
const char* unary_op_token(UnaryOp op);

}  // namespace thingc

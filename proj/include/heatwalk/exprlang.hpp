#pragma once
/**
 * A minimal, total, side-effect-free expression language for boundary and
 * initial data in config files.
 *
 * Grammar (standard precedence, ^ right-associative and tighter than
 * unary minus):
 *
 *   expr    := add
 *   add     := mul (('+' | '-') mul)*
 *   mul     := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' unary)?
 *   primary := NUMBER | 'pi' | 't' | 'x' '[' index ']' | 'norm' '(' 'x' ')'
 *            | ('sin'|'cos'|'exp'|'sqrt'|'abs'|'log') '(' expr ')'
 *            | ('sum'|'prod') '(' IDENT ',' expr ')'
 *            | '(' expr ')' | IDENT            (bound reduction index)
 *   index   := INTEGER | IDENT                 (literal in [0,d) or the
 *                                               enclosing reduction index)
 *
 * Reductions range over 0..d-1 and are unrolled into a flat instruction
 * tape at parse time, so evaluation is a tight loop with no interpretation
 * of the tree. Evaluation is total on finite inputs except division by
 * zero and log/sqrt/pow domain errors, which raise EvalError naming the
 * offending subexpression; they never produce a silent NaN.
 */

#include <memory>
#include <stdexcept>
#include <string>

#include "heatwalk/geometry.hpp"

namespace heatwalk::expr {

struct SourcePos {
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourcePos pos);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& message, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class Expr {
 public:
  /// Parses source for points of the given dimension. Throws ParseError
  /// with line/column on syntax errors, unbound variables and coordinate
  /// indices outside [0, d).
  static Expr parse(const std::string& source, std::size_t dimension);

  /// IEEE double evaluation; deterministic and thread-safe.
  double eval(double t, const Point& x) const;
  double operator()(double t, const Point& x) const { return eval(t, x); }

  /// Canonical form; pretty-print of a parse of a pretty-print is a
  /// fixed point.
  std::string pretty() const;

  std::size_t dimension() const;

 private:
  struct Impl;
  explicit Expr(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace heatwalk::expr

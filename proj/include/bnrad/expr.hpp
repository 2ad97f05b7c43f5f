#ifndef BNRAD_EXPR_HPP
#define BNRAD_EXPR_HPP

#include <memory>
#include <string>

namespace bnrad {

// Expression trees in one variable `x`.
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | 'x' | func '(' expr ')' | '(' expr ')'
// with func in {sin, cos, sinh, cosh, tanh, exp, log, sqrt}. A leading '-'
// on a base is accepted as a convenience.
class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Throws ParseError (with character position) on malformed input.
ExprPtr parse_expression(const std::string& text);

double eval_expression(const ExprPtr& e, double x);

// Symbolic derivative with algebraic simplification. Apply repeatedly for
// higher orders; constant folding keeps third derivatives evaluable.
ExprPtr differentiate(const ExprPtr& e);

// Canonical text form; parse(print(e)) reproduces the same tree.
std::string print_expression(const ExprPtr& e);

// Exact Taylor-at-zero probe: value of e at x = 0 if it is finite, NaN
// otherwise (used for series starts; never throws).
double eval_at_zero_or_nan(const ExprPtr& e);

}  // namespace bnrad

#endif

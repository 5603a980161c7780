#pragma once

#include <memory>
#include <string>

namespace fracspec {

namespace detail {
struct ExprNode;
}

/// Point at which expressions are evaluated. Variables the expression does
/// not reference are ignored.
struct EvalPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// Immutable closed-form expression in the variables t, x, y.
///
/// Supported syntax: numeric literals, the constant `pi`, declared variables,
/// binary + - * /, power ^ with a constant exponent (right-associative,
/// binding tighter than unary minus), parentheses, and the functions
/// sin, cos, exp, log, sqrt.
///
/// Differentiation is symbolic with constant folding, so polynomial
/// derivatives are exact in floating point (the second t-derivative of t^2
/// is the literal constant 2).
class Expression {
public:
    /// The constant 0.
    Expression();

    /// The constant c.
    static Expression constant(double c);

    double operator()(const EvalPoint& p) const;

    /// Symbolic derivative with respect to `var` ('t', 'x', or 'y').
    Expression derivative(char var) const;

    bool depends_on(char var) const;

    /// True when the expression references no variable at all.
    bool is_constant() const;

    /// Value of a constant expression; throws std::logic_error otherwise.
    double constant_value() const;

    /// Original parse text; regenerated (fully parenthesised) text for
    /// expressions produced by `derivative`.
    const std::string& source() const { return source_; }

private:
    friend Expression parse_expression(const std::string&, const std::string&);

    std::shared_ptr<const detail::ExprNode> root_;
    std::string source_;
};

/// Parse an expression over the variables listed in `allowed_vars` (a subset
/// of "txy"). Throws std::invalid_argument on syntax errors, unknown symbols,
/// non-constant exponents, or references to variables outside `allowed_vars`.
Expression parse_expression(const std::string& text,
                            const std::string& allowed_vars);

}  // namespace fracspec

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fnirenberg/geometry.hpp"

namespace fnir {

/// Immutable expression tree over ambient coordinates x1..x{n+1}.
///
/// Grammar (highest precedence first):
///
///     primary := number | x<k> | func '(' args ')' | '(' sum ')'
///     power   := primary ['^' unary]          right-associative
///     unary   := '-' unary | power
///     product := unary (('*' | '/') unary)*
///     sum     := product (('+' | '-') product)*
///
/// So `-2^2` is -(2^2) and `2^-1` is 2^(-1). Functions: sin cos exp log abs sqrt pow.
class Expression {
public:
    enum class Op { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Exp, Log, Abs, Sqrt, Pow };

    struct Node {
        Op op;
        double value = 0.0;  // Number
        int var = 0;         // Variable, zero-based
        Func func = Func::Sin;
        std::vector<std::shared_ptr<const Node>> kids;
    };

    Expression() = default;
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    const Node& root() const { return *root_; }
    bool empty() const noexcept { return root_ == nullptr; }

    /// Largest variable index used (1-based), 0 if none.
    int max_variable() const;

    /// Evaluates at ambient coordinates; domain violations throw Error(Domain) naming the node.
    double evaluate(const Vector& x) const;

    /// Canonical fully-parenthesized-where-needed source; parse(print()) == *this.
    std::string print() const;

    bool operator==(const Expression& other) const;

private:
    std::shared_ptr<const Node> root_;
};

Expression parse_expression(std::string_view src);

double eval_on_sphere(const Expression& e, const SpherePoint& p);

/// Central-difference gradient of t -> e(exp_map(frame, t axis_k)) at t = 0,
/// expressed in the axes of `frame`. Requires h in [1e-8, 1e-2].
Vector sphere_gradient(const Expression& e, const TangentFrame& frame, double h = 1e-5);

/// Central-difference Hessian in the normal chart of `frame` (symmetrized).
Matrix sphere_hessian(const Expression& e, const TangentFrame& frame, double h = 1e-4);

}  // namespace fnir

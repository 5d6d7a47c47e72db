#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mvtlab/errors.hpp"

namespace mvtlab {

struct ExprAccess;

enum class NodeKind { constant, variable, add, sub, mul, div, pow, neg, apply };

enum class Func { sin, cos, tan, asin, acos, atan, exp, ln, sqrt, abs, sgn };

std::string_view func_name(Func fn);

/// Immutable expression tree for a real function of one variable `x`.
///
/// Nodes are shared between trees, so copying an Expr is cheap and every
/// operation below is a pure function.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(double value);
    static Expr variable();
    static Expr apply(Func fn, Expr arg);

    NodeKind kind() const;
    /// Constant value; meaningful only for NodeKind::constant.
    double value() const;
    /// Applied function; meaningful only for NodeKind::apply.
    Func func() const;
    /// Children in order; empty for leaves, one for neg/apply, two for binary nodes.
    std::size_t arity() const;
    const Expr& child(std::size_t i) const;

    bool is_constant(double v) const;
    bool depends_on_x() const;

    /// Evaluates at x with IEEE propagation: 1/0 is +inf, asin(2) is NaN, and
    /// NaN is absorbing.
    double operator()(double x) const;

    friend Expr operator+(const Expr& l, const Expr& r);
    friend Expr operator-(const Expr& l, const Expr& r);
    friend Expr operator*(const Expr& l, const Expr& r);
    friend Expr operator/(const Expr& l, const Expr& r);
    friend Expr operator-(const Expr& u);
    friend Expr pow(const Expr& base, const Expr& exponent);

    friend bool operator==(const Expr& l, const Expr& r);

private:
    struct Node;
    friend struct ExprAccess;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& l, double r);
Expr operator+(double l, const Expr& r);
Expr operator-(const Expr& l, double r);
Expr operator-(double l, const Expr& r);
Expr operator*(double l, const Expr& r);
Expr operator*(const Expr& l, double r);
Expr operator/(const Expr& l, double r);
Expr pow(const Expr& base, double exponent);

Expr sin(const Expr& u);
Expr cos(const Expr& u);
Expr exp(const Expr& u);
Expr sqrt(const Expr& u);
Expr abs(const Expr& u);
Expr sgn(const Expr& u);

/// Parses the infix grammar
///
///     expr   := term (('+'|'-') term)*
///     term   := factor (('*'|'/') factor)*
///     factor := unary ('^' factor)?
///     unary  := '-' unary | atom
///     atom   := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
///
/// Unary minus binds tighter than `^`, so "-x^2" is (-x)^2. There is no
/// implicit multiplication.
Expr parse(std::string_view source);

double eval(const Expr& e, double x);

/// Symbolic derivative of the given order (>= 1). d/dx abs(u) = sgn(u) u' and
/// d/dx sgn(u) = 0; callers detect kinks with kink_arguments().
Expr differentiate(const Expr& e, int order = 1);

/// Constant folding and identity elimination (u+0, u*1, u^1, ...).
Expr simplify(const Expr& e);

/// Replaces every occurrence of x with `replacement`.
Expr substitute(const Expr& e, const Expr& replacement);

/// Arguments of every abs()/sgn() node, outermost first. These are the places
/// where the symbolic derivative stops describing the function.
std::vector<Expr> kink_arguments(const Expr& e);

/// Infix text that parses back to the same tree.
std::string to_string(const Expr& e);

} // namespace mvtlab

#include "mvtlab/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mvtlab {

struct Expr::Node {
    NodeKind kind = NodeKind::constant;
    double value = 0.0;
    Func fn = Func::sin;
    std::vector<Expr> children;
    bool has_x = false;
};

struct ExprAccess {
    static Expr make(NodeKind kind, std::vector<Expr> children, Func fn = Func::sin) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = kind;
        n->fn = fn;
        for (const auto& c : children) n->has_x = n->has_x || c.depends_on_x();
        n->children = std::move(children);
        return Expr(std::move(n));
    }

    static const Expr::Node* node(const Expr& e) { return e.node_.get(); }
};

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 11> kFuncNames{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"asin", Func::asin},
    {"acos", Func::acos},
    {"atan", Func::atan},
    {"exp", Func::exp},
    {"ln", Func::ln},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
    {"sgn", Func::sgn},
}};

double sign_of(double v) {
    if (std::isnan(v)) return v;
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

double apply_func(Func fn, double u) {
    switch (fn) {
    case Func::sin: return std::sin(u);
    case Func::cos: return std::cos(u);
    case Func::tan: return std::tan(u);
    case Func::asin: return std::asin(u);
    case Func::acos: return std::acos(u);
    case Func::atan: return std::atan(u);
    case Func::exp: return std::exp(u);
    case Func::ln: return std::log(u);
    case Func::sqrt: return std::sqrt(u);
    case Func::abs: return std::fabs(u);
    case Func::sgn: return sign_of(u);
    }
    return std::nan("");
}

double eval_binary(NodeKind kind, double l, double r) {
    switch (kind) {
    case NodeKind::add: return l + r;
    case NodeKind::sub: return l - r;
    case NodeKind::mul: return l * r;
    case NodeKind::div: return l / r;
    case NodeKind::pow: return std::pow(l, r);
    default: break;
    }
    return std::nan("");
}

Expr binary(NodeKind kind, const Expr& l, const Expr& r) {
    return ExprAccess::make(kind, {l, r});
}

// Simplifying constructors. Each one folds constants and drops identities, so
// trees built through them stay small under repeated differentiation.

Expr s_neg(const Expr& u);

Expr fold_or(NodeKind kind, const Expr& l, const Expr& r) {
    if (l.kind() == NodeKind::constant && r.kind() == NodeKind::constant) {
        const double v = eval_binary(kind, l.value(), r.value());
        if (std::isfinite(v)) return Expr::constant(v);
    }
    return binary(kind, l, r);
}

Expr s_add(const Expr& l, const Expr& r) {
    if (l.is_constant(0.0)) return r;
    if (r.is_constant(0.0)) return l;
    if (r.kind() == NodeKind::neg) return fold_or(NodeKind::sub, l, r.child(0));
    return fold_or(NodeKind::add, l, r);
}

Expr s_sub(const Expr& l, const Expr& r) {
    if (r.is_constant(0.0)) return l;
    if (l.is_constant(0.0)) return s_neg(r);
    if (r.kind() == NodeKind::neg) return fold_or(NodeKind::add, l, r.child(0));
    return fold_or(NodeKind::sub, l, r);
}

Expr s_mul(const Expr& l, const Expr& r) {
    if (l.is_constant(0.0) || r.is_constant(0.0)) return Expr::constant(0.0);
    if (l.is_constant(1.0)) return r;
    if (r.is_constant(1.0)) return l;
    if (l.is_constant(-1.0)) return s_neg(r);
    if (r.is_constant(-1.0)) return s_neg(l);
    if (l.kind() == NodeKind::constant && r.kind() == NodeKind::mul &&
        r.child(0).kind() == NodeKind::constant) {
        return s_mul(fold_or(NodeKind::mul, l, r.child(0)), r.child(1));
    }
    if (r.kind() == NodeKind::constant && l.kind() != NodeKind::constant) {
        return s_mul(r, l);
    }
    if (l.kind() == NodeKind::neg) return s_neg(s_mul(l.child(0), r));
    if (r.kind() == NodeKind::neg) return s_neg(s_mul(l, r.child(0)));
    return fold_or(NodeKind::mul, l, r);
}

Expr s_div(const Expr& l, const Expr& r) {
    if (r.is_constant(1.0)) return l;
    if (l.is_constant(0.0)) return Expr::constant(0.0);
    return fold_or(NodeKind::div, l, r);
}

Expr s_pow(const Expr& b, const Expr& e) {
    if (e.is_constant(1.0)) return b;
    if (e.is_constant(0.0)) return Expr::constant(1.0);
    if (b.is_constant(1.0)) return Expr::constant(1.0);
    return fold_or(NodeKind::pow, b, e);
}

Expr s_neg(const Expr& u) {
    if (u.kind() == NodeKind::constant) return Expr::constant(-u.value());
    if (u.kind() == NodeKind::neg) return u.child(0);
    return ExprAccess::make(NodeKind::neg, {u});
}

Expr s_apply(Func fn, const Expr& u) {
    if (u.kind() == NodeKind::constant) {
        const double v = apply_func(fn, u.value());
        if (std::isfinite(v)) return Expr::constant(v);
    }
    return Expr::apply(fn, u);
}

Expr c(double v) { return Expr::constant(v); }

Expr derivative(const Expr& e) {
    if (!e.depends_on_x()) return c(0.0);
    switch (e.kind()) {
    case NodeKind::constant: return c(0.0);
    case NodeKind::variable: return c(1.0);
    case NodeKind::add: return s_add(derivative(e.child(0)), derivative(e.child(1)));
    case NodeKind::sub: return s_sub(derivative(e.child(0)), derivative(e.child(1)));
    case NodeKind::neg: return s_neg(derivative(e.child(0)));
    case NodeKind::mul: {
        const Expr& u = e.child(0);
        const Expr& v = e.child(1);
        return s_add(s_mul(derivative(u), v), s_mul(u, derivative(v)));
    }
    case NodeKind::div: {
        const Expr& u = e.child(0);
        const Expr& v = e.child(1);
        if (!v.depends_on_x()) return s_div(derivative(u), v);
        return s_div(s_sub(s_mul(derivative(u), v), s_mul(u, derivative(v))), s_pow(v, c(2.0)));
    }
    case NodeKind::pow: {
        const Expr& u = e.child(0);
        const Expr& v = e.child(1);
        if (!v.depends_on_x()) {
            return s_mul(s_mul(v, s_pow(u, s_sub(v, c(1.0)))), derivative(u));
        }
        if (!u.depends_on_x()) {
            return s_mul(s_mul(s_apply(Func::ln, u), e), derivative(v));
        }
        // u^v (v' ln u + v u'/u)
        return s_mul(e, s_add(s_mul(derivative(v), s_apply(Func::ln, u)),
                              s_div(s_mul(v, derivative(u)), u)));
    }
    case NodeKind::apply: {
        const Expr& u = e.child(0);
        const Expr du = derivative(u);
        Expr outer;
        switch (e.func()) {
        case Func::sin: outer = s_apply(Func::cos, u); break;
        case Func::cos: outer = s_neg(s_apply(Func::sin, u)); break;
        case Func::tan: outer = s_div(c(1.0), s_pow(s_apply(Func::cos, u), c(2.0))); break;
        case Func::asin:
            outer = s_div(c(1.0), s_apply(Func::sqrt, s_sub(c(1.0), s_pow(u, c(2.0)))));
            break;
        case Func::acos:
            outer = s_neg(s_div(c(1.0), s_apply(Func::sqrt, s_sub(c(1.0), s_pow(u, c(2.0))))));
            break;
        case Func::atan: outer = s_div(c(1.0), s_add(c(1.0), s_pow(u, c(2.0)))); break;
        case Func::exp: outer = e; break;
        case Func::ln: outer = s_div(c(1.0), u); break;
        case Func::sqrt: outer = s_div(c(1.0), s_mul(c(2.0), e)); break;
        case Func::abs: outer = s_apply(Func::sgn, u); break;
        case Func::sgn: return c(0.0);
        }
        return s_mul(outer, du);
    }
    }
    return c(0.0);
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse_all() {
        skip_ws();
        if (pos_ == src_.size()) fail("empty expression", "an expression");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) {
            if (src_[pos_] == ')') fail("unbalanced ')'", "an operator or end of input");
            fail("unexpected character '" + std::string(1, src_[pos_]) + "'",
                 "an operator or end of input");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& message, const std::string& expected) const {
        throw ParseError(pos_, message + " at offset " + std::to_string(pos_), expected);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = lhs + parse_term();
            else if (accept('-')) lhs = lhs - parse_term();
            else return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = lhs * parse_factor();
            else if (accept('/')) lhs = lhs / parse_factor();
            else return lhs;
        }
    }

    Expr parse_factor() {
        Expr base = parse_unary();
        if (accept('^')) return pow(base, parse_factor());
        return base;
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        return parse_atom();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ == src_.size()) fail("unexpected end of input", "a number, 'x', a function or '('");
        const char ch = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') return parse_identifier();
        if (ch == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!accept(')')) fail("unbalanced '('", "')'");
            return inner;
        }
        fail("unexpected character '" + std::string(1, ch) + "'", "a number, 'x', a function or '('");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            pos_ = start;
            fail("malformed number", "a digit");
        }
        // Exponent only when digits follow; "2e" leaves 'e' for the caller.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc{} || res.ptr != src_.data() + pos_) {
            pos_ = start;
            fail("malformed number", "a number");
        }
        return Expr::constant(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return Expr::variable();
        if (name == "pi") return Expr::constant(std::numbers::pi);
        if (name == "e") return Expr::constant(std::numbers::e);
        for (const auto& [fname, fn] : kFuncNames) {
            if (fname != name) continue;
            if (!accept('(')) fail("function '" + std::string(name) + "' needs '('", "'('");
            Expr arg = parse_expr();
            if (accept(',')) {
                fail("function '" + std::string(name) + "' takes exactly one argument", "')'");
            }
            if (!accept(')')) fail("unbalanced '('", "')'");
            return Expr::apply(fn, std::move(arg));
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'", "'x', 'pi', 'e' or a function name");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Expr& e) {
    switch (e.kind()) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::pow: return 3;
    case NodeKind::neg: return 4;
    case NodeKind::constant: return e.value() < 0.0 || std::signbit(e.value()) ? 4 : 5;
    default: return 5;
    }
}

std::string format_number(double v) {
    if (!std::isfinite(v)) {
        if (std::isnan(v)) return "(0/0)";
        return v > 0 ? "(1/0)" : "(-1/0)";
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void print(const Expr& e, int min_prec, std::string& out) {
    const bool paren = precedence(e) < min_prec;
    if (paren) out += '(';
    switch (e.kind()) {
    case NodeKind::constant: out += format_number(e.value()); break;
    case NodeKind::variable: out += 'x'; break;
    case NodeKind::add:
        print(e.child(0), 1, out);
        out += " + ";
        print(e.child(1), 2, out);
        break;
    case NodeKind::sub:
        print(e.child(0), 1, out);
        out += " - ";
        print(e.child(1), 2, out);
        break;
    case NodeKind::mul:
        print(e.child(0), 2, out);
        out += '*';
        print(e.child(1), 3, out);
        break;
    case NodeKind::div:
        print(e.child(0), 2, out);
        out += '/';
        print(e.child(1), 3, out);
        break;
    case NodeKind::pow:
        print(e.child(0), 4, out);
        out += '^';
        print(e.child(1), 3, out);
        break;
    case NodeKind::neg:
        out += '-';
        print(e.child(0), 4, out);
        break;
    case NodeKind::apply:
        out += func_name(e.func());
        out += '(';
        print(e.child(0), 0, out);
        out += ')';
        break;
    }
    if (paren) out += ')';
}

void collect_kinks(const Expr& e, std::vector<Expr>& out) {
    if (e.kind() == NodeKind::apply && (e.func() == Func::abs || e.func() == Func::sgn)) {
        out.push_back(e.child(0));
    }
    for (std::size_t i = 0; i < e.arity(); ++i) collect_kinks(e.child(i), out);
}

} // namespace

std::string_view func_name(Func fn) {
    for (const auto& [name, f] : kFuncNames) {
        if (f == fn) return name;
    }
    return "?";
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::variable;
    n->has_x = true;
    return Expr(std::move(n));
}

Expr Expr::apply(Func fn, Expr arg) {
    return ExprAccess::make(NodeKind::apply, {std::move(arg)}, fn);
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
Func Expr::func() const { return node_->fn; }
std::size_t Expr::arity() const { return node_->children.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }
bool Expr::depends_on_x() const { return node_->has_x; }

bool Expr::is_constant(double v) const {
    return node_->kind == NodeKind::constant && node_->value == v;
}

double Expr::operator()(double x) const { return eval(*this, x); }

Expr operator+(const Expr& l, const Expr& r) { return binary(NodeKind::add, l, r); }
Expr operator-(const Expr& l, const Expr& r) { return binary(NodeKind::sub, l, r); }
Expr operator*(const Expr& l, const Expr& r) { return binary(NodeKind::mul, l, r); }
Expr operator/(const Expr& l, const Expr& r) { return binary(NodeKind::div, l, r); }
Expr pow(const Expr& base, const Expr& exponent) { return binary(NodeKind::pow, base, exponent); }
Expr operator-(const Expr& u) { return ExprAccess::make(NodeKind::neg, {u}); }

Expr operator+(const Expr& l, double r) { return l + Expr::constant(r); }
Expr operator+(double l, const Expr& r) { return Expr::constant(l) + r; }
Expr operator-(const Expr& l, double r) { return l - Expr::constant(r); }
Expr operator-(double l, const Expr& r) { return Expr::constant(l) - r; }
Expr operator*(double l, const Expr& r) { return Expr::constant(l) * r; }
Expr operator*(const Expr& l, double r) { return l * Expr::constant(r); }
Expr operator/(const Expr& l, double r) { return l / Expr::constant(r); }
Expr pow(const Expr& base, double exponent) { return pow(base, Expr::constant(exponent)); }

Expr sin(const Expr& u) { return Expr::apply(Func::sin, u); }
Expr cos(const Expr& u) { return Expr::apply(Func::cos, u); }
Expr exp(const Expr& u) { return Expr::apply(Func::exp, u); }
Expr sqrt(const Expr& u) { return Expr::apply(Func::sqrt, u); }
Expr abs(const Expr& u) { return Expr::apply(Func::abs, u); }
Expr sgn(const Expr& u) { return Expr::apply(Func::sgn, u); }

bool operator==(const Expr& l, const Expr& r) {
    const auto* a = ExprAccess::node(l);
    const auto* b = ExprAccess::node(r);
    if (a == b) return true;
    if (a->kind != b->kind || a->children.size() != b->children.size()) return false;
    if (a->kind == NodeKind::constant) {
        return a->value == b->value || (std::isnan(a->value) && std::isnan(b->value));
    }
    if (a->kind == NodeKind::apply && a->fn != b->fn) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!(a->children[i] == b->children[i])) return false;
    }
    return true;
}

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

double eval(const Expr& e, double x) {
    switch (e.kind()) {
    case NodeKind::constant: return e.value();
    case NodeKind::variable: return x;
    case NodeKind::neg: return -eval(e.child(0), x);
    case NodeKind::apply: return apply_func(e.func(), eval(e.child(0), x));
    default: return eval_binary(e.kind(), eval(e.child(0), x), eval(e.child(1), x));
    }
}

Expr differentiate(const Expr& e, int order) {
    if (order < 1) throw std::invalid_argument("differentiate: order must be >= 1");
    Expr d = simplify(e);
    for (int i = 0; i < order; ++i) d = simplify(derivative(d));
    return d;
}

Expr simplify(const Expr& e) {
    switch (e.kind()) {
    case NodeKind::constant:
    case NodeKind::variable: return e;
    case NodeKind::neg: return s_neg(simplify(e.child(0)));
    case NodeKind::apply: return s_apply(e.func(), simplify(e.child(0)));
    case NodeKind::add: return s_add(simplify(e.child(0)), simplify(e.child(1)));
    case NodeKind::sub: return s_sub(simplify(e.child(0)), simplify(e.child(1)));
    case NodeKind::mul: return s_mul(simplify(e.child(0)), simplify(e.child(1)));
    case NodeKind::div: return s_div(simplify(e.child(0)), simplify(e.child(1)));
    case NodeKind::pow: return s_pow(simplify(e.child(0)), simplify(e.child(1)));
    }
    return e;
}

Expr substitute(const Expr& e, const Expr& replacement) {
    if (!e.depends_on_x()) return e;
    switch (e.kind()) {
    case NodeKind::variable: return replacement;
    case NodeKind::neg: return -substitute(e.child(0), replacement);
    case NodeKind::apply: return Expr::apply(e.func(), substitute(e.child(0), replacement));
    case NodeKind::constant: return e;
    default:
        return binary(e.kind(), substitute(e.child(0), replacement),
                      substitute(e.child(1), replacement));
    }
}

std::vector<Expr> kink_arguments(const Expr& e) {
    std::vector<Expr> out;
    collect_kinks(e, out);
    return out;
}

std::string to_string(const Expr& e) {
    std::string out;
    print(e, 0, out);
    return out;
}

} // namespace mvtlab

#include "fnirenberg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "fnirenberg/error.hpp"

namespace fnir {

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Expression::Op;
using Func = Expression::Func;

constexpr const char* kOperandStart = "number, variable, function, '(' or '-'";

struct FuncInfo {
    std::string_view name;
    Func func;
    int arity;
};

constexpr FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1}, {"cos", Func::Cos, 1},   {"exp", Func::Exp, 1}, {"log", Func::Log, 1},
    {"abs", Func::Abs, 1}, {"sqrt", Func::Sqrt, 1}, {"pow", Func::Pow, 2},
};

std::string_view func_name(Func f) {
    for (const auto& info : kFuncs)
        if (info.func == f) return info.name;
    return "?";
}

NodePtr make(Op op, std::vector<NodePtr> kids = {}) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) fail(kOperandStart, "empty expression");
        NodePtr e = sum();
        skip_ws();
        if (pos_ < src_.size()) fail("operator or end of input", "unexpected character");
        return e;
    }

private:
    [[noreturn]] void fail(const char* expected, const std::string& what) const {
        throw SyntaxError(pos_, expected, what);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr lhs = product();
        for (;;) {
            if (accept('+'))
                lhs = make(Op::Add, {lhs, product()});
            else if (accept('-'))
                lhs = make(Op::Sub, {lhs, product()});
            else
                return lhs;
        }
    }

    NodePtr product() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Op::Mul, {lhs, unary()});
            else if (accept('/'))
                lhs = make(Op::Div, {lhs, unary()});
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, {unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::Pow, {base, unary()});
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail(kOperandStart, "unexpected end of input");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        if (accept('(')) {
            NodePtr inner = sum();
            if (!accept(')')) fail("')'", "unbalanced parenthesis");
            return inner;
        }
        fail(kOperandStart, std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            ++pos_;
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || end != src_.data() + pos_) {
            pos_ = start;
            fail("number", "malformed number");
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Number;
        n->value = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name.size() >= 2 && name[0] == 'x') {
            int index = 0;
            const auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec == std::errc() && end == name.data() + name.size() && index >= 1 && name[1] != '0') {
                auto n = std::make_shared<Node>();
                n->op = Op::Variable;
                n->var = index - 1;
                return n;
            }
        }
        for (const auto& info : kFuncs) {
            if (info.name != name) continue;
            if (!accept('(')) fail("'('", "function name must be followed by an argument list");
            std::vector<NodePtr> args;
            args.push_back(sum());
            while (accept(',')) args.push_back(sum());
            if (!accept(')')) fail("')' or ','", "unterminated argument list");
            if (static_cast<int>(args.size()) != info.arity) {
                pos_ = start;
                fail("correct argument count", std::string(name) + " takes " +
                                                   std::to_string(info.arity) + " argument(s)");
            }
            auto n = std::make_shared<Node>();
            n->op = Op::Call;
            n->func = info.func;
            n->kids = std::move(args);
            return n;
        }
        pos_ = start;
        fail("variable x1..x{n+1} or one of sin cos exp log abs sqrt pow",
             "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

// precedence levels: 1 sum, 2 product, 3 unary, 4 power, 5 primary
void print_node(const Node& n, int min_prec, std::string& out) {
    auto wrap = [&](int prec, auto&& body) {
        const bool paren = prec < min_prec;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    switch (n.op) {
        case Op::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            wrap(n.value < 0 ? 0 : 5, [&] { out += buf; });
            return;
        }
        case Op::Variable:
            out += 'x';
            out += std::to_string(n.var + 1);
            return;
        case Op::Neg:
            wrap(3, [&] {
                out += '-';
                print_node(*n.kids[0], 3, out);
            });
            return;
        case Op::Add:
        case Op::Sub:
            wrap(1, [&] {
                print_node(*n.kids[0], 1, out);
                out += n.op == Op::Add ? " + " : " - ";
                print_node(*n.kids[1], 2, out);
            });
            return;
        case Op::Mul:
        case Op::Div:
            wrap(2, [&] {
                print_node(*n.kids[0], 2, out);
                out += n.op == Op::Mul ? "*" : "/";
                print_node(*n.kids[1], 3, out);
            });
            return;
        case Op::Pow:
            wrap(4, [&] {
                print_node(*n.kids[0], 5, out);
                out += '^';
                print_node(*n.kids[1], 3, out);
            });
            return;
        case Op::Call:
            out += func_name(n.func);
            out += '(';
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) out += ", ";
                print_node(*n.kids[i], 1, out);
            }
            out += ')';
            return;
    }
}

std::string node_text(const Node& n) {
    std::string s;
    print_node(n, 0, s);
    return s;
}

[[noreturn]] void domain_fail(const Node& n, const std::string& why) {
    throw Error(ErrorKind::Domain, why + " in '" + node_text(n) + "'");
}

double checked(const Node& n, double v) {
    if (!std::isfinite(v)) domain_fail(n, "non-finite result");
    return v;
}

double eval_pow(const Node& n, double base, double expo) {
    if (base == 0.0 && expo < 0.0) domain_fail(n, "zero raised to a negative power");
    if (base < 0.0 && expo != std::floor(expo)) domain_fail(n, "negative base with non-integer exponent");
    return checked(n, std::pow(base, expo));
}

double eval_node(const Node& n, const Vector& x) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Variable:
            if (n.var >= x.size())
                throw Error(ErrorKind::UnknownVariable,
                            "variable x" + std::to_string(n.var + 1) + " exceeds ambient dimension " +
                                std::to_string(x.size()));
            return x[n.var];
        case Op::Neg: return -eval_node(*n.kids[0], x);
        case Op::Add: return checked(n, eval_node(*n.kids[0], x) + eval_node(*n.kids[1], x));
        case Op::Sub: return checked(n, eval_node(*n.kids[0], x) - eval_node(*n.kids[1], x));
        case Op::Mul: return checked(n, eval_node(*n.kids[0], x) * eval_node(*n.kids[1], x));
        case Op::Div: {
            const double num = eval_node(*n.kids[0], x);
            const double den = eval_node(*n.kids[1], x);
            if (den == 0.0) domain_fail(n, "division by zero");
            return checked(n, num / den);
        }
        case Op::Pow: return eval_pow(n, eval_node(*n.kids[0], x), eval_node(*n.kids[1], x));
        case Op::Call: {
            const double a = eval_node(*n.kids[0], x);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return checked(n, std::exp(a));
                case Func::Log:
                    if (a <= 0.0) domain_fail(n, "log of non-positive value");
                    return std::log(a);
                case Func::Abs: return std::abs(a);
                case Func::Sqrt:
                    if (a < 0.0) domain_fail(n, "sqrt of negative value");
                    return std::sqrt(a);
                case Func::Pow: return eval_pow(n, a, eval_node(*n.kids[1], x));
            }
        }
    }
    return 0.0;
}

bool node_equal(const Node& a, const Node& b) {
    if (a.op != b.op || a.kids.size() != b.kids.size()) return false;
    switch (a.op) {
        case Op::Number:
            if (a.value != b.value) return false;
            break;
        case Op::Variable:
            if (a.var != b.var) return false;
            break;
        case Op::Call:
            if (a.func != b.func) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!node_equal(*a.kids[i], *b.kids[i])) return false;
    return true;
}

int max_var(const Node& n) {
    int m = n.op == Op::Variable ? n.var + 1 : 0;
    for (const auto& k : n.kids) m = std::max(m, max_var(*k));
    return m;
}

double eval_along_axis(const Expression& e, const TangentFrame& frame, int k, double t) {
    Vector v = Vector::Zero(frame.dim());
    v[k] = t;
    return eval_on_sphere(e, exp_map(frame, v));
}

double eval_in_chart(const Expression& e, const TangentFrame& frame, const Vector& v) {
    return eval_on_sphere(e, exp_map(frame, v));
}

}  // namespace

int Expression::max_variable() const { return root_ ? max_var(*root_) : 0; }

double Expression::evaluate(const Vector& x) const {
    if (!root_) throw Error(ErrorKind::InvalidInput, "empty expression");
    return eval_node(*root_, x);
}

std::string Expression::print() const { return root_ ? node_text(*root_) : std::string(); }

bool Expression::operator==(const Expression& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return node_equal(*root_, *other.root_);
}

Expression parse_expression(std::string_view src) { return Expression(Parser(src).parse()); }

double eval_on_sphere(const Expression& e, const SpherePoint& p) { return e.evaluate(p.coords()); }

Vector sphere_gradient(const Expression& e, const TangentFrame& frame, double h) {
    if (!(h >= 1e-8 && h <= 1e-2))
        throw Error(ErrorKind::InvalidInput, "finite-difference step must lie in [1e-8, 1e-2]");
    const int n = frame.dim();
    Vector g(n);
    for (int k = 0; k < n; ++k)
        g[k] = (eval_along_axis(e, frame, k, h) - eval_along_axis(e, frame, k, -h)) / (2.0 * h);
    return g;
}

Matrix sphere_hessian(const Expression& e, const TangentFrame& frame, double h) {
    const int n = frame.dim();
    Matrix hess(n, n);
    const double f0 = eval_on_sphere(e, frame.base);
    for (int i = 0; i < n; ++i) {
        const double fp = eval_along_axis(e, frame, i, h);
        const double fm = eval_along_axis(e, frame, i, -h);
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (int j = 0; j < i; ++j) {
            Vector v = Vector::Zero(n);
            auto at = [&](double si, double sj) {
                v.setZero();
                v[i] = si * h;
                v[j] = sj * h;
                return eval_in_chart(e, frame, v);
            };
            const double val = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
            hess(i, j) = hess(j, i) = val;
        }
    }
    return hess;
}

}  // namespace fnir

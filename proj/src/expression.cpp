#include <fracspec/expression.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace fracspec {
namespace detail {

enum class Op {
    constant,
    var_t,
    var_x,
    var_y,
    add,
    sub,
    mul,
    divide,
    neg,
    pow,
    sin,
    cos,
    exp,
    log,
    sqrt,
};

struct ExprNode {
    Op op;
    double value = 0.0;  // payload for constants (and the pow exponent node)
    std::shared_ptr<const ExprNode> a;
    std::shared_ptr<const ExprNode> b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::constant;
    n->value = v;
    return n;
}

bool is_const(const NodePtr& n) { return n->op == Op::constant; }
bool is_const(const NodePtr& n, double v) {
    return n->op == Op::constant && n->value == v;
}

double eval_node(const ExprNode& n, const EvalPoint& p) {
    switch (n.op) {
        case Op::constant: return n.value;
        case Op::var_t: return p.t;
        case Op::var_x: return p.x;
        case Op::var_y: return p.y;
        case Op::add: return eval_node(*n.a, p) + eval_node(*n.b, p);
        case Op::sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
        case Op::mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
        case Op::divide: return eval_node(*n.a, p) / eval_node(*n.b, p);
        case Op::neg: return -eval_node(*n.a, p);
        case Op::pow: {
            const double base = eval_node(*n.a, p);
            const double c = n.b->value;
            // Small integer powers by repeated multiplication: exact for the
            // cases the polynomial atoms rely on, and faster than std::pow.
            double ipart;
            if (std::modf(c, &ipart) == 0.0 && std::fabs(c) <= 8.0) {
                double r = 1.0;
                const int k = static_cast<int>(std::fabs(c));
                for (int i = 0; i < k; ++i) r *= base;
                return c < 0.0 ? 1.0 / r : r;
            }
            return std::pow(base, c);
        }
        case Op::sin: return std::sin(eval_node(*n.a, p));
        case Op::cos: return std::cos(eval_node(*n.a, p));
        case Op::exp: return std::exp(eval_node(*n.a, p));
        case Op::log: return std::log(eval_node(*n.a, p));
        case Op::sqrt: return std::sqrt(eval_node(*n.a, p));
    }
    return 0.0;  // unreachable
}

bool node_depends(const ExprNode& n, Op var) {
    switch (n.op) {
        case Op::constant: return false;
        case Op::var_t:
        case Op::var_x:
        case Op::var_y: return n.op == var;
        default:
            if (n.a && node_depends(*n.a, var)) return true;
            if (n.b && node_depends(*n.b, var)) return true;
            return false;
    }
}

bool node_is_constant(const ExprNode& n) {
    return !node_depends(n, Op::var_t) && !node_depends(n, Op::var_x) &&
           !node_depends(n, Op::var_y);
}

// --- simplifying constructors -------------------------------------------

NodePtr mk_neg(NodePtr a) {
    if (is_const(a)) return make_const(-a->value);
    if (a->op == Op::neg) return a->a;
    return make_node(Op::neg, std::move(a));
}

NodePtr mk_add(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make_node(Op::add, std::move(a), std::move(b));
}

NodePtr mk_sub(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value - b->value);
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return mk_neg(std::move(b));
    return make_node(Op::sub, std::move(a), std::move(b));
}

NodePtr mk_mul(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    return make_node(Op::mul, std::move(a), std::move(b));
}

NodePtr mk_div(NodePtr a, NodePtr b) {
    if (is_const(a) && is_const(b)) return make_const(a->value / b->value);
    if (is_const(a, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    return make_node(Op::divide, std::move(a), std::move(b));
}

NodePtr mk_pow(NodePtr base, double c) {
    if (c == 0.0) return make_const(1.0);
    if (c == 1.0) return base;
    if (is_const(base)) {
        EvalPoint p;
        return make_const(eval_node(*make_node(Op::pow, base, make_const(c)), p));
    }
    return make_node(Op::pow, std::move(base), make_const(c));
}

NodePtr mk_fun(Op op, NodePtr a) {
    if (is_const(a)) {
        const double v = a->value;
        switch (op) {
            case Op::sin: return make_const(std::sin(v));
            case Op::cos: return make_const(std::cos(v));
            case Op::exp: return make_const(std::exp(v));
            case Op::log: return make_const(std::log(v));
            case Op::sqrt: return make_const(std::sqrt(v));
            default: break;
        }
    }
    return make_node(op, std::move(a));
}

NodePtr diff(const NodePtr& n, Op var) {
    switch (n->op) {
        case Op::constant: return make_const(0.0);
        case Op::var_t:
        case Op::var_x:
        case Op::var_y: return make_const(n->op == var ? 1.0 : 0.0);
        case Op::add: return mk_add(diff(n->a, var), diff(n->b, var));
        case Op::sub: return mk_sub(diff(n->a, var), diff(n->b, var));
        case Op::mul:
            return mk_add(mk_mul(diff(n->a, var), n->b),
                          mk_mul(n->a, diff(n->b, var)));
        case Op::divide:
            return mk_div(mk_sub(mk_mul(diff(n->a, var), n->b),
                                 mk_mul(n->a, diff(n->b, var))),
                          mk_pow(n->b, 2.0));
        case Op::neg: return mk_neg(diff(n->a, var));
        case Op::pow: {
            const double c = n->b->value;
            return mk_mul(mk_mul(make_const(c), mk_pow(n->a, c - 1.0)),
                          diff(n->a, var));
        }
        case Op::sin: return mk_mul(mk_fun(Op::cos, n->a), diff(n->a, var));
        case Op::cos:
            return mk_neg(mk_mul(mk_fun(Op::sin, n->a), diff(n->a, var)));
        case Op::exp: return mk_mul(n, diff(n->a, var));
        case Op::log: return mk_div(diff(n->a, var), n->a);
        case Op::sqrt:
            return mk_div(diff(n->a, var), mk_mul(make_const(2.0), n));
    }
    return make_const(0.0);  // unreachable
}

std::string fmt_double(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.op) {
        case Op::constant:
            if (n.value < 0.0) {
                out += '(';
                out += fmt_double(n.value);
                out += ')';
            } else {
                out += fmt_double(n.value);
            }
            return;
        case Op::var_t: out += 't'; return;
        case Op::var_x: out += 'x'; return;
        case Op::var_y: out += 'y'; return;
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::divide: {
            const char sym = n.op == Op::add      ? '+'
                             : n.op == Op::sub    ? '-'
                             : n.op == Op::mul    ? '*'
                                                  : '/';
            out += '(';
            print_node(*n.a, out);
            out += sym;
            print_node(*n.b, out);
            out += ')';
            return;
        }
        case Op::neg:
            out += "(-";
            print_node(*n.a, out);
            out += ')';
            return;
        case Op::pow:
            out += '(';
            print_node(*n.a, out);
            out += '^';
            print_node(*n.b, out);
            out += ')';
            return;
        case Op::sin:
        case Op::cos:
        case Op::exp:
        case Op::log:
        case Op::sqrt: {
            const char* name = n.op == Op::sin   ? "sin"
                               : n.op == Op::cos ? "cos"
                               : n.op == Op::exp ? "exp"
                               : n.op == Op::log ? "log"
                                                 : "sqrt";
            out += name;
            out += '(';
            print_node(*n.a, out);
            out += ')';
            return;
        }
    }
}

// --- recursive-descent parser ---------------------------------------------
//
// expr   := term (('+' | '-') term)*
// term   := factor (('*' | '/') factor)*
// factor := '-' factor | '+' factor | power
// power  := primary ('^' factor)?          (right-associative, binds above -)
// primary:= number | ident | ident '(' expr ')' | '(' expr ')'

struct Parser {
    const std::string& text;
    const std::string& allowed;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression '" + text + "': " + msg +
                                    " (at offset " + std::to_string(pos) + ")");
    }

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            const char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                NodePtr rhs = parse_term();
                lhs = c == '+' ? mk_add(std::move(lhs), std::move(rhs))
                               : mk_sub(std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            const char c = peek();
            if (c == '*' || c == '/') {
                ++pos;
                NodePtr rhs = parse_factor();
                lhs = c == '*' ? mk_mul(std::move(lhs), std::move(rhs))
                               : mk_div(std::move(lhs), std::move(rhs));
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        const char c = peek();
        if (c == '-') {
            ++pos;
            return mk_neg(parse_factor());
        }
        if (c == '+') {
            ++pos;
            return parse_factor();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (peek() == '^') {
            ++pos;
            NodePtr expo = parse_factor();
            if (!node_is_constant(*expo))
                fail("exponent must be a constant");
            EvalPoint origin;
            return mk_pow(std::move(base), eval_node(*expo, origin));
        }
        return base;
    }

    NodePtr parse_primary() {
        const char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (peek() != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = text.c_str() + pos;
            char* end = nullptr;
            const double v = std::strtod(start, &end);
            if (end == start) fail("malformed number");
            pos += static_cast<std::size_t>(end - start);
            return make_const(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                    text[pos] == '_'))
                ++pos;
            const std::string name = text.substr(start, pos - start);
            if (peek() == '(') {
                ++pos;
                NodePtr arg = parse_expr();
                if (peek() != ')') fail("expected ')' after argument of '" + name + "'");
                ++pos;
                if (name == "sin") return mk_fun(Op::sin, std::move(arg));
                if (name == "cos") return mk_fun(Op::cos, std::move(arg));
                if (name == "exp") return mk_fun(Op::exp, std::move(arg));
                if (name == "log") return mk_fun(Op::log, std::move(arg));
                if (name == "sqrt") return mk_fun(Op::sqrt, std::move(arg));
                fail("unknown function '" + name + "'");
            }
            if (name == "pi") return make_const(3.14159265358979323846);
            if (name.size() == 1 &&
                (name[0] == 't' || name[0] == 'x' || name[0] == 'y')) {
                if (allowed.find(name[0]) == std::string::npos)
                    fail("variable '" + name + "' is not allowed in this context");
                return make_node(name[0] == 't'   ? Op::var_t
                                 : name[0] == 'x' ? Op::var_x
                                                  : Op::var_y);
            }
            fail("unknown symbol '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

Op var_op(char var) {
    switch (var) {
        case 't': return Op::var_t;
        case 'x': return Op::var_x;
        case 'y': return Op::var_y;
        default: throw std::logic_error("Expression: unknown variable name");
    }
}

}  // namespace
}  // namespace detail

Expression::Expression() : root_(detail::make_const(0.0)), source_("0") {}

Expression Expression::constant(double c) {
    Expression e;
    e.root_ = detail::make_const(c);
    e.source_ = detail::fmt_double(c);
    return e;
}

double Expression::operator()(const EvalPoint& p) const {
    return detail::eval_node(*root_, p);
}

Expression Expression::derivative(char var) const {
    Expression out;
    out.root_ = detail::diff(root_, detail::var_op(var));
    std::string src;
    detail::print_node(*out.root_, src);
    out.source_ = std::move(src);
    return out;
}

bool Expression::depends_on(char var) const {
    return detail::node_depends(*root_, detail::var_op(var));
}

bool Expression::is_constant() const {
    return detail::node_is_constant(*root_);
}

double Expression::constant_value() const {
    if (!is_constant())
        throw std::logic_error("Expression: constant_value() on a non-constant");
    return detail::eval_node(*root_, EvalPoint{});
}

Expression parse_expression(const std::string& text,
                            const std::string& allowed_vars) {
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    const std::string trimmed = text.substr(b, e - b);
    if (trimmed.empty())
        throw std::invalid_argument("expression: empty input");

    detail::Parser parser{trimmed, allowed_vars};
    auto root = parser.parse_expr();
    parser.skip_ws();
    if (parser.pos != trimmed.size()) parser.fail("unexpected trailing input");

    Expression out;
    out.root_ = std::move(root);
    out.source_ = trimmed;
    return out;
}

}  // namespace fracspec

#pragma once

// Closed-form scalar expressions of chart coordinates.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' rational)?
//   base   := number | ident | '(' expr ')' | func '(' expr ')'
//   func   := exp | log | sin | cos | sqrt
//   ident  := xK (1 <= K <= n) | declared parameter name
//   rational := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//
// Unary minus binds looser than '^', so "-x1^2" is -(x1^2).

#include <minig/jet.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace minig {

using ParamMap = std::map<std::string, double, std::less<>>;

class ParseError : public std::runtime_error
{
  public:
    ParseError(std::string const& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {}
    std::size_t offset() const noexcept { return offset_; }

  private:
    std::size_t offset_;
};

class DomainError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { constant, coordinate, parameter, add, sub, mul, div, pow, neg, exp, log, sin, cos, sqrt };

struct Node;
using NodePtr = std::shared_ptr<Node const>;

struct Node
{
    NodeKind kind;
    double constant = 0.0;  // constant
    int index = 0;          // coordinate (zero-based)
    std::string name;       // parameter
    long num = 1, den = 1;  // pow exponent num/den, den > 0, reduced
    NodePtr lhs, rhs;       // operands; unary nodes use lhs
};

namespace detail {

inline bool is_unary_function(NodeKind k)
{
    return k == NodeKind::exp || k == NodeKind::log || k == NodeKind::sin || k == NodeKind::cos ||
           k == NodeKind::sqrt;
}

inline char const* function_name(NodeKind k)
{
    switch (k) {
    case NodeKind::exp: return "exp";
    case NodeKind::log: return "log";
    case NodeKind::sin: return "sin";
    case NodeKind::cos: return "cos";
    case NodeKind::sqrt: return "sqrt";
    default: return "";
    }
}

inline bool same_tree(Node const& a, Node const& b)
{
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::constant: return a.constant == b.constant;
    case NodeKind::coordinate: return a.index == b.index;
    case NodeKind::parameter: return a.name == b.name;
    case NodeKind::pow:
        return a.num == b.num && a.den == b.den && same_tree(*a.lhs, *b.lhs);
    default:
        if (!same_tree(*a.lhs, *b.lhs)) return false;
        if (a.rhs || b.rhs) return a.rhs && b.rhs && same_tree(*a.rhs, *b.rhs);
        return true;
    }
}

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Immutable parsed expression. Cheap to copy; shares its tree.
class ScalarExpr
{
  public:
    ScalarExpr() : root_(make_constant(0.0)) {}
    explicit ScalarExpr(NodePtr root) : root_(std::move(root)) {}

    static ScalarExpr constant(double v) { return ScalarExpr(make_constant(v)); }
    static ScalarExpr coordinate(int zero_based)
    {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::coordinate;
        n->index = zero_based;
        return ScalarExpr(std::move(n));
    }

    Node const& root() const { return *root_; }
    NodePtr const& root_ptr() const { return root_; }

    /// Zero-based indices of the coordinates the expression reads.
    std::set<int> free_coords() const
    {
        std::set<int> out;
        collect(*root_, out);
        return out;
    }

    bool is_constant_zero() const { return root_->kind == NodeKind::constant && root_->constant == 0.0; }

    /// Fully parenthesised text; parsing it again yields an equal tree.
    std::string to_string() const { return print(*root_); }

    friend bool operator==(ScalarExpr const& a, ScalarExpr const& b) { return detail::same_tree(*a.root_, *b.root_); }

  private:
    static NodePtr make_constant(double v)
    {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::constant;
        n->constant = v;
        return n;
    }

    static void collect(Node const& n, std::set<int>& out)
    {
        if (n.kind == NodeKind::coordinate) out.insert(n.index);
        if (n.lhs) collect(*n.lhs, out);
        if (n.rhs) collect(*n.rhs, out);
    }

    static std::string print(Node const& n)
    {
        switch (n.kind) {
        case NodeKind::constant:
            return n.constant < 0 ? "(-" + detail::format_number(-n.constant) + ")" : detail::format_number(n.constant);
        case NodeKind::coordinate: return "x" + std::to_string(n.index + 1);
        case NodeKind::parameter: return n.name;
        case NodeKind::add: return "(" + print(*n.lhs) + " + " + print(*n.rhs) + ")";
        case NodeKind::sub: return "(" + print(*n.lhs) + " - " + print(*n.rhs) + ")";
        case NodeKind::mul: return "(" + print(*n.lhs) + " * " + print(*n.rhs) + ")";
        case NodeKind::div: return "(" + print(*n.lhs) + " / " + print(*n.rhs) + ")";
        case NodeKind::neg: return "(-" + print(*n.lhs) + ")";
        case NodeKind::pow: {
            std::string e = std::to_string(n.num);
            if (n.den != 1) e += "/" + std::to_string(n.den);
            return "(" + print(*n.lhs) + "^(" + e + "))";
        }
        default: return std::string(detail::function_name(n.kind)) + "(" + print(*n.lhs) + ")";
        }
    }

    NodePtr root_;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

class Parser
{
  public:
    Parser(std::string_view text, int n, std::set<std::string, std::less<>> const& params)
        : text_(text), n_(n), params_(params)
    {}

    NodePtr parse()
    {
        auto e = expr();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("syntax error: unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        return e;
    }

  private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= text_.size()) throw ParseError(std::string("syntax error: expected '") + c + "' before end of input", pos_);
            throw ParseError(std::string("syntax error: expected '") + c + "'", pos_);
        }
    }

    static NodePtr binary(NodeKind k, NodePtr a, NodePtr b)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static NodePtr unary(NodeKind k, NodePtr a)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(a);
        return n;
    }

    NodePtr expr()
    {
        auto lhs = term();
        for (;;) {
            if (accept('+')) lhs = binary(NodeKind::add, lhs, term());
            else if (accept('-')) lhs = binary(NodeKind::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term()
    {
        auto lhs = factor();
        for (;;) {
            if (accept('*')) lhs = binary(NodeKind::mul, lhs, factor());
            else if (accept('/')) lhs = binary(NodeKind::div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr factor()
    {
        if (accept('-')) return unary(NodeKind::neg, factor());
        auto b = base();
        if (accept('^')) {
            auto [num, den] = rational();
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::pow;
            n->lhs = std::move(b);
            n->num = num;
            n->den = den;
            return n;
        }
        return b;
    }

    long integer()
    {
        skip_ws();
        std::size_t const start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("syntax error: exponent must be an integer or a rational literal", pos_);
        if (pos_ - start > 9) throw ParseError("syntax error: exponent literal too large", start);
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    std::pair<long, long> rational()
    {
        long num = 0, den = 1;
        if (accept('(')) {
            bool const negative = accept('-');
            num = integer();
            if (accept('/')) {
                std::size_t const at = pos_;
                den = integer();
                if (den == 0) throw ParseError("syntax error: zero denominator in exponent", at);
            }
            expect(')');
            if (negative) num = -num;
        } else {
            bool const negative = accept('-');
            num = integer();
            if (negative) num = -num;
        }
        long const g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        return {num, den};
    }

    NodePtr base()
    {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("syntax error: unexpected end of input", pos_);
        char const c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("syntax error: unexpected '") + c + "'", pos_);
    }

    NodePtr number()
    {
        std::size_t const start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t const save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits();
            else pos_ = save;
        }
        std::string const lit(text_.substr(start, pos_ - start));
        if (lit == ".") throw ParseError("syntax error: malformed number", start);
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::constant;
        n->constant = std::strtod(lit.c_str(), nullptr);
        return n;
    }

    NodePtr identifier()
    {
        std::size_t const start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string const id(text_.substr(start, pos_ - start));

        static constexpr std::pair<char const*, NodeKind> kFunctions[] = {
            {"exp", NodeKind::exp}, {"log", NodeKind::log}, {"sin", NodeKind::sin},
            {"cos", NodeKind::cos}, {"sqrt", NodeKind::sqrt}};
        for (auto const& [fname, kind] : kFunctions) {
            if (id == fname) {
                expect('(');
                auto arg = expr();
                expect(')');
                return unary(kind, std::move(arg));
            }
        }

        if (params_.count(id) != 0) {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::parameter;
            n->name = id;
            return n;
        }

        if (id.size() >= 2 && id[0] == 'x' &&
            id.find_first_not_of("0123456789", 1) == std::string::npos) {
            if (id.size() > 4) throw ParseError("coordinate index out of range: " + id, start);
            int const k = std::stoi(id.substr(1));
            if (k < 1 || k > n_)
                throw ParseError("coordinate index out of range: " + id + " (dimension " + std::to_string(n_) + ")", start);
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::coordinate;
            n->index = k - 1;
            return n;
        }
        throw ParseError("unknown identifier \"" + id + "\"", start);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int n_;
    std::set<std::string, std::less<>> const& params_;
};

}  // namespace detail

/// Parses `text` as a function of x1..xn; `params` lists the names that may
/// appear as symbolic parameters.
inline ScalarExpr parse_expr(std::string_view text, int n, std::set<std::string, std::less<>> const& params = {})
{
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("dimension must be in 1.." + std::to_string(kMaxDim));
    return ScalarExpr(detail::Parser(text, n, params).parse());
}

/// Parses with every key of `params` declared.
inline ScalarExpr parse_expr(std::string_view text, int n, ParamMap const& params)
{
    std::set<std::string, std::less<>> names;
    for (auto const& [k, v] : params) names.insert(k);
    return parse_expr(text, n, names);
}

/// Substitutes parameter values and folds every subtree that became constant.
inline ScalarExpr bind(ScalarExpr const& e, ParamMap const& params)
{
    struct Folder
    {
        ParamMap const& params;
        NodePtr operator()(NodePtr const& n) const
        {
            if (n->kind == NodeKind::parameter) {
                auto it = params.find(n->name);
                if (it == params.end()) return n;
                return ScalarExpr::constant(it->second).root_ptr();
            }
            if (!n->lhs) return n;
            NodePtr a = (*this)(n->lhs);
            NodePtr b = n->rhs ? (*this)(n->rhs) : nullptr;
            bool const ca = a->kind == NodeKind::constant;
            bool const cb = !b || b->kind == NodeKind::constant;
            if (ca && cb) {
                double const x = a->constant;
                double const y = b ? b->constant : 0.0;
                double v = 0.0;
                switch (n->kind) {
                case NodeKind::add: v = x + y; break;
                case NodeKind::sub: v = x - y; break;
                case NodeKind::mul: v = x * y; break;
                case NodeKind::div: v = x / y; break;
                case NodeKind::neg: v = -x; break;
                case NodeKind::pow: v = std::pow(x, static_cast<double>(n->num) / static_cast<double>(n->den)); break;
                case NodeKind::exp: v = std::exp(x); break;
                case NodeKind::log: v = std::log(x); break;
                case NodeKind::sin: v = std::sin(x); break;
                case NodeKind::cos: v = std::cos(x); break;
                case NodeKind::sqrt: v = std::sqrt(x); break;
                default: break;
                }
                if (std::isfinite(v)) return ScalarExpr::constant(v).root_ptr();
            }
            if (a == n->lhs && b == n->rhs) return n;
            auto copy = std::make_shared<Node>(*n);
            copy->lhs = std::move(a);
            copy->rhs = std::move(b);
            return copy;
        }
    };
    return ScalarExpr(Folder{params}(e.root_ptr()));
}

namespace detail {

// Node builders that drop trivial zero/one factors.
struct Builder
{
    static bool is_const(NodePtr const& n, double v) { return n->kind == NodeKind::constant && n->constant == v; }
    static NodePtr constant(double v) { return ScalarExpr::constant(v).root_ptr(); }
    static NodePtr node(NodeKind k, NodePtr a, NodePtr b = nullptr)
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }
    static NodePtr add(NodePtr a, NodePtr b)
    {
        if (is_const(a, 0.0)) return b;
        if (is_const(b, 0.0)) return a;
        return node(NodeKind::add, std::move(a), std::move(b));
    }
    static NodePtr sub(NodePtr a, NodePtr b)
    {
        if (is_const(b, 0.0)) return a;
        if (is_const(a, 0.0)) return neg(std::move(b));
        return node(NodeKind::sub, std::move(a), std::move(b));
    }
    static NodePtr mul(NodePtr a, NodePtr b)
    {
        if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
        if (is_const(a, 1.0)) return b;
        if (is_const(b, 1.0)) return a;
        return node(NodeKind::mul, std::move(a), std::move(b));
    }
    static NodePtr div(NodePtr a, NodePtr b)
    {
        if (is_const(a, 0.0)) return constant(0.0);
        if (is_const(b, 1.0)) return a;
        return node(NodeKind::div, std::move(a), std::move(b));
    }
    static NodePtr neg(NodePtr a)
    {
        if (is_const(a, 0.0)) return a;
        return node(NodeKind::neg, std::move(a));
    }
    static NodePtr pow(NodePtr a, long num, long den)
    {
        if (num == 0) return constant(1.0);
        if (num == den) return a;
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::pow;
        n->lhs = std::move(a);
        n->num = num;
        n->den = den;
        return n;
    }

    NodePtr d(NodePtr const& n) const
    {
        switch (n->kind) {
        case NodeKind::constant:
        case NodeKind::parameter: return constant(0.0);
        case NodeKind::coordinate: return constant(n->index == coord ? 1.0 : 0.0);
        case NodeKind::add: return add(d(n->lhs), d(n->rhs));
        case NodeKind::sub: return sub(d(n->lhs), d(n->rhs));
        case NodeKind::mul: return add(mul(d(n->lhs), n->rhs), mul(n->lhs, d(n->rhs)));
        case NodeKind::div: {
            // (u/v)' = u'/v - u v'/v^2
            NodePtr const du = d(n->lhs), dv = d(n->rhs);
            return sub(div(du, n->rhs), div(mul(n->lhs, dv), pow(n->rhs, 2, 1)));
        }
        case NodeKind::neg: return neg(d(n->lhs));
        case NodeKind::pow: {
            NodePtr const du = d(n->lhs);
            if (is_const(du, 0.0)) return du;
            long const g = std::gcd(n->num - n->den, n->den);
            NodePtr const coeff = constant(static_cast<double>(n->num) / static_cast<double>(n->den));
            return mul(mul(coeff, pow(n->lhs, (n->num - n->den) / g, n->den / g)), du);
        }
        case NodeKind::exp: return mul(n, d(n->lhs));
        case NodeKind::log: return div(d(n->lhs), n->lhs);
        case NodeKind::sin: return mul(node(NodeKind::cos, n->lhs), d(n->lhs));
        case NodeKind::cos: return neg(mul(node(NodeKind::sin, n->lhs), d(n->lhs)));
        case NodeKind::sqrt: return div(d(n->lhs), mul(constant(2.0), n));
        }
        return constant(0.0);
    }

    int coord;
};

}  // namespace detail

/// Symbolic partial derivative along x_{coord+1}.
inline ScalarExpr differentiate(ScalarExpr const& e, int coord)
{
    return ScalarExpr(detail::Builder{coord}.d(e.root_ptr()));
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

struct Evaluator
{
    std::span<double const> point;
    ParamMap const& params;
    int n;

    [[noreturn]] void fail(Node const& node, std::string const& why) const
    {
        std::string where = "(";
        for (std::size_t i = 0; i < point.size(); ++i) where += (i ? ", " : "") + format_number(point[i]);
        where += ")";
        throw DomainError(why + " in " + ScalarExpr(std::make_shared<Node>(node)).to_string() + " at " + where);
    }

    Jet2 operator()(Node const& node) const
    {
        switch (node.kind) {
        case NodeKind::constant: return Jet2(n, node.constant);
        case NodeKind::coordinate: return Jet2::variable(n, node.index, point[static_cast<std::size_t>(node.index)]);
        case NodeKind::parameter: {
            auto it = params.find(node.name);
            if (it == params.end()) throw DomainError("unbound parameter \"" + node.name + "\"");
            return Jet2(n, it->second);
        }
        case NodeKind::add: return (*this)(*node.lhs) + (*this)(*node.rhs);
        case NodeKind::sub: return (*this)(*node.lhs) - (*this)(*node.rhs);
        case NodeKind::mul: return (*this)(*node.lhs) * (*this)(*node.rhs);
        case NodeKind::div: {
            Jet2 const d = (*this)(*node.rhs);
            if (d.value() == 0.0) fail(node, "division by zero");
            return (*this)(*node.lhs) / d;
        }
        case NodeKind::neg: return -(*this)(*node.lhs);
        case NodeKind::pow: {
            Jet2 const b = (*this)(*node.lhs);
            double const x = b.value();
            if (node.den != 1 && x <= 0.0) fail(node, "fractional power of non-positive value");
            if (node.den == 1 && node.num < 0 && x == 0.0) fail(node, "negative power of zero");
            return pow_rational(b, node.num, node.den);
        }
        case NodeKind::exp: return minig::exp((*this)(*node.lhs));
        case NodeKind::log: {
            Jet2 const u = (*this)(*node.lhs);
            if (u.value() <= 0.0) fail(node, "log of non-positive value");
            return minig::log(u);
        }
        case NodeKind::sin: return minig::sin((*this)(*node.lhs));
        case NodeKind::cos: return minig::cos((*this)(*node.lhs));
        case NodeKind::sqrt: {
            Jet2 const u = (*this)(*node.lhs);
            if (u.value() <= 0.0) fail(node, "sqrt of non-positive value");
            return minig::sqrt(u);
        }
        }
        fail(node, "unknown node");
    }
};

}  // namespace detail

/// Value, gradient and Hessian of `e` at `point`.
inline Jet2 eval_jet2(ScalarExpr const& e, std::span<double const> point, ParamMap const& params = {})
{
    int const n = static_cast<int>(point.size());
    for (int k : e.free_coords())
        if (k >= n) throw DomainError("expression reads x" + std::to_string(k + 1) + " beyond the point dimension");
    Jet2 r = detail::Evaluator{point, params, n}(e.root());
    if (!std::isfinite(r.value())) throw DomainError("non-finite value of " + e.to_string());
    return r;
}

inline double eval(ScalarExpr const& e, std::span<double const> point, ParamMap const& params = {})
{
    return eval_jet2(e, point, params).value();
}

}  // namespace minig

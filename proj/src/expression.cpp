#include "hq/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hq/errors.hpp"

namespace hq {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        skip_space();
        if (at_ == src_.size()) throw ParseError("empty expression", at_);
        NodePtr root = expr();
        skip_space();
        if (at_ != src_.size())
            throw ParseError(std::string("unexpected '") + src_[at_] + "'", at_);
        return root;
    }

private:
    void skip_space() {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
    }

    bool accept(char c) {
        skip_space();
        if (at_ < src_.size() && src_[at_] == c) {
            ++at_;
            return true;
        }
        return false;
    }

    NodePtr binary(ExprOp op, NodePtr lhs, NodePtr rhs, std::size_t pos) {
        ExprNode n;
        n.op = op;
        n.lhs = std::move(lhs);
        n.rhs = std::move(rhs);
        n.position = pos;
        return make_node(std::move(n));
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_space();
            const std::size_t pos = at_;
            if (accept('+'))
                lhs = binary(ExprOp::Add, lhs, term(), pos);
            else if (accept('-'))
                lhs = binary(ExprOp::Sub, lhs, term(), pos);
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            skip_space();
            const std::size_t pos = at_;
            if (accept('*'))
                lhs = binary(ExprOp::Mul, lhs, unary(), pos);
            else if (accept('/'))
                lhs = binary(ExprOp::Div, lhs, unary(), pos);
            else
                return lhs;
        }
    }

    NodePtr unary() {
        skip_space();
        const std::size_t pos = at_;
        if (accept('-')) {
            ExprNode n;
            n.op = ExprOp::Neg;
            n.lhs = unary();
            n.position = pos;
            return make_node(std::move(n));
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        skip_space();
        const std::size_t pos = at_;
        if (accept('^')) return binary(ExprOp::Pow, base, unary(), pos);
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (at_ >= src_.size()) throw ParseError("unexpected end of expression", at_);
        const char c = src_[at_];
        if (c == '(') {
            ++at_;
            NodePtr inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", at_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected '") + c + "'", at_);
    }

    NodePtr number() {
        const std::size_t start = at_;
        double value = 0.0;
        const auto [end, ec] = std::from_chars(src_.data() + at_, src_.data() + src_.size(), value);
        if (ec != std::errc() || end == src_.data() + at_) throw ParseError("malformed number", start);
        at_ = static_cast<std::size_t>(end - src_.data());
        ExprNode n;
        n.op = ExprOp::Literal;
        n.value = value;
        n.position = start;
        return make_node(std::move(n));
    }

    static bool parse_index(std::string_view digits, int& out) {
        if (digits.empty() || digits[0] == '0') return false;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out);
        return ec == std::errc() && end == digits.data() + digits.size();
    }

    NodePtr identifier() {
        const std::size_t start = at_;
        while (at_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_'))
            ++at_;
        const std::string_view name = src_.substr(start, at_ - start);

        static constexpr std::pair<std::string_view, Func> kFuncs[] = {
            {"exp", Func::Exp}, {"log", Func::Log},   {"sin", Func::Sin},
            {"cos", Func::Cos}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
        for (const auto& [fname, func] : kFuncs) {
            if (name != fname) continue;
            if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), at_);
            ExprNode n;
            n.op = ExprOp::Call;
            n.func = func;
            n.lhs = expr();
            n.position = start;
            if (!accept(')')) throw ParseError("expected ')'", at_);
            return make_node(std::move(n));
        }

        ExprNode n;
        n.op = ExprOp::Variable;
        n.position = start;
        int index = 0;
        if (name == "rho") {
            n.var = VarKind::Radius;
        } else if (name.starts_with("nu") && parse_index(name.substr(2), index)) {
            n.var = VarKind::Normal;
            n.index = index - 1;
        } else if (name.starts_with("x") && parse_index(name.substr(1), index)) {
            n.var = VarKind::Position;
            n.index = index - 1;
        } else {
            throw UnknownIdentifier(std::string(name), start);
        }
        return make_node(std::move(n));
    }

    std::string_view src_;
    std::size_t at_ = 0;
};

std::string_view func_name(Func f) {
    switch (f) {
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Sqrt: return "sqrt";
        case Func::Abs: return "abs";
    }
    return "?";
}

std::string render(const ExprNode& n) {
    switch (n.op) {
        case ExprOp::Literal: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            return buf;
        }
        case ExprOp::Variable:
            if (n.var == VarKind::Radius) return "rho";
            return (n.var == VarKind::Normal ? "nu" : "x") + std::to_string(n.index + 1);
        case ExprOp::Neg: return "(-" + render(*n.lhs) + ")";
        case ExprOp::Call: return std::string(func_name(n.func)) + "(" + render(*n.lhs) + ")";
        case ExprOp::Add: return "(" + render(*n.lhs) + " + " + render(*n.rhs) + ")";
        case ExprOp::Sub: return "(" + render(*n.lhs) + " - " + render(*n.rhs) + ")";
        case ExprOp::Mul: return "(" + render(*n.lhs) + " * " + render(*n.rhs) + ")";
        case ExprOp::Div: return "(" + render(*n.lhs) + " / " + render(*n.rhs) + ")";
        case ExprOp::Pow: return "(" + render(*n.lhs) + " ^ " + render(*n.rhs) + ")";
    }
    return {};
}

struct Bindings {
    std::span<const double> X;
    std::span<const double> nu;
    double rho;
};

double eval(const ExprNode& n, const Bindings& b) {
    auto fail = [&](const char* what) -> double { throw EvalError(what, render(n)); };
    switch (n.op) {
        case ExprOp::Literal: return n.value;
        case ExprOp::Variable: {
            if (n.var == VarKind::Radius) return b.rho;
            const auto& vec = n.var == VarKind::Normal ? b.nu : b.X;
            if (n.index >= static_cast<int>(vec.size())) return fail("component out of range");
            return vec[static_cast<std::size_t>(n.index)];
        }
        case ExprOp::Neg: return -eval(*n.lhs, b);
        case ExprOp::Add: return eval(*n.lhs, b) + eval(*n.rhs, b);
        case ExprOp::Sub: return eval(*n.lhs, b) - eval(*n.rhs, b);
        case ExprOp::Mul: return eval(*n.lhs, b) * eval(*n.rhs, b);
        case ExprOp::Div: {
            const double den = eval(*n.rhs, b);
            if (den == 0.0) return fail("division by zero");
            return eval(*n.lhs, b) / den;
        }
        case ExprOp::Pow: {
            const double base = eval(*n.lhs, b);
            const double exponent = eval(*n.rhs, b);
            if (base < 0.0 && exponent != std::floor(exponent))
                return fail("negative base with non-integer exponent");
            if (base == 0.0 && exponent < 0.0) return fail("zero raised to a negative power");
            const double r = std::pow(base, exponent);
            if (!std::isfinite(r)) return fail("power overflow");
            return r;
        }
        case ExprOp::Call: {
            const double a = eval(*n.lhs, b);
            switch (n.func) {
                case Func::Exp: {
                    const double r = std::exp(a);
                    if (!std::isfinite(r)) return fail("exp overflow");
                    return r;
                }
                case Func::Log:
                    if (!(a > 0.0)) return fail("log of a nonpositive value");
                    return std::log(a);
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Sqrt:
                    if (a < 0.0) return fail("sqrt of a negative value");
                    return std::sqrt(a);
                case Func::Abs: return std::abs(a);
            }
        }
    }
    return fail("malformed expression");
}

bool same(const ExprNode& a, const ExprNode& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
        case ExprOp::Literal: return a.value == b.value;
        case ExprOp::Variable: return a.var == b.var && a.index == b.index;
        case ExprOp::Neg: return same(*a.lhs, *b.lhs);
        case ExprOp::Call: return a.func == b.func && same(*a.lhs, *b.lhs);
        default: return same(*a.lhs, *b.lhs) && same(*a.rhs, *b.rhs);
    }
}

void check_dims(const ExprNode& n, int ambient_dim) {
    if (n.op == ExprOp::Variable && n.var != VarKind::Radius && n.index >= ambient_dim) {
        const std::string name = (n.var == VarKind::Normal ? "nu" : "x") + std::to_string(n.index + 1);
        throw UnknownIdentifier(name, n.position);
    }
    if (n.lhs) check_dims(*n.lhs, ambient_dim);
    if (n.rhs) check_dims(*n.rhs, ambient_dim);
}

}  // namespace

double FExpr::evaluate(std::span<const double> X, std::span<const double> nu) const {
    double r2 = 0.0;
    for (double x : X) r2 += x * x;
    return eval(*root_, Bindings{X, nu, std::sqrt(r2)});
}

std::string FExpr::to_string() const { return render(*root_); }

void FExpr::check_dimension(int ambient_dim) const { check_dims(*root_, ambient_dim); }

bool FExpr::operator==(const FExpr& other) const { return same(*root_, *other.root_); }

FExpr parse_f(std::string_view source) { return FExpr(Parser(source).parse()); }

double eval_f(const FExpr& expr, std::span<const double> X, std::span<const double> nu) {
    double x2 = 0.0, n2 = 0.0;
    for (double x : X) x2 += x * x;
    for (double x : nu) n2 += x * x;
    if (!(x2 > 0.0)) throw std::invalid_argument("f is evaluated at X = 0");
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-8) throw std::invalid_argument("nu must be a unit vector");
    return expr.evaluate(X, nu);
}

}  // namespace hq

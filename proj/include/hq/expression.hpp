#pragma once

// Prescriptions f(X, ν) written as arithmetic expressions.
//
//   expr    ::= term { ("+" | "-") term }
//   term    ::= unary { ("*" | "/") unary }
//   unary   ::= "-" unary | power
//   power   ::= primary [ "^" unary ]              (right associative)
//   primary ::= number | variable | func "(" expr ")" | "(" expr ")"
//   variable::= "rho" | "x" index | "nu" index     (1-based index)
//   func    ::= exp | log | sin | cos | sqrt | abs

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace hq {

enum class ExprOp { Literal, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class VarKind { Position, Normal, Radius };
enum class Func { Exp, Log, Sin, Cos, Sqrt, Abs };

struct ExprNode {
    ExprOp op = ExprOp::Literal;
    double value = 0.0;                 // Literal
    VarKind var = VarKind::Radius;      // Variable
    int index = 0;                      // Variable, 0-based component
    Func func = Func::Exp;              // Call
    std::shared_ptr<const ExprNode> lhs;  // unary operand / left operand
    std::shared_ptr<const ExprNode> rhs;
    std::size_t position = 0;           // offset in the source text
};

/// Immutable expression tree; copies share structure.
class FExpr {
public:
    explicit FExpr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    /// Evaluates with rho bound to |X|.  Throws EvalError.
    [[nodiscard]] double evaluate(std::span<const double> X, std::span<const double> nu) const;

    /// Fully parenthesized text that parses back to the same tree.
    [[nodiscard]] std::string to_string() const;

    /// Throws UnknownIdentifier if a component index exceeds `ambient_dim`.
    void check_dimension(int ambient_dim) const;

    [[nodiscard]] const ExprNode& root() const { return *root_; }
    [[nodiscard]] bool operator==(const FExpr& other) const;

private:
    std::shared_ptr<const ExprNode> root_;
};

/// Throws ParseError / UnknownIdentifier with a byte offset.
[[nodiscard]] FExpr parse_f(std::string_view source);

[[nodiscard]] double eval_f(const FExpr& expr, std::span<const double> X, std::span<const double> nu);

}  // namespace hq

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortex/space.hpp"

namespace vortex {

// Thrown by the expression parser; offset is the 0-based character position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset)
        : std::runtime_error(std::move(message)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Thrown when evaluation hits a domain error (log/sqrt of a negative value,
// division by zero, negative base under a fractional power).  Carries the
// printed subexpression that failed.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string message, std::string node_text)
        : std::runtime_error(message + " in '" + node_text + "'"),
          node_text_(std::move(node_text)) {}
    const std::string& node_text() const { return node_text_; }

private:
    std::string node_text_;
};

namespace detail {
struct ExprNode;
}

// Immutable scalar field on extended phase space: a tree of constants,
// coordinate variables, arithmetic and the unary functions sin, cos, exp,
// ln, sqrt.  Power exponents are always constants, so differentiation stays
// closed under the node set.  Evaluation is pure; instances are safe to
// share across threads.
class Expression {
public:
    Expression() = default;  // the zero constant

    static Expression constant(double value);
    // Variable node bound to coordinate `index` of `space` (0 = t).
    static Expression variable(const SpaceSpec& space, int index);
    // Variable over an arbitrary name list (used for chain parameters).
    static Expression variable(std::string name, int index);

    Expression operator-() const;
    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);

    static Expression pow(const Expression& base, double exponent);
    static Expression sin(const Expression& a);
    static Expression cos(const Expression& a);
    static Expression exp(const Expression& a);
    static Expression ln(const Expression& a);
    static Expression sqrt(const Expression& a);

    // Exact partial derivative with respect to coordinate `index`.
    Expression differentiate(int index) const;

    // Evaluation against a point given as coordinate values indexed by
    // variable index (fast path) or as a name -> value map.
    double evaluate(std::span<const double> point) const;
    double evaluate(const std::map<std::string, double>& point) const;

    std::string print() const;

    bool is_zero() const;  // node is the constant 0
    bool is_constant(double* value = nullptr) const;

    // Indices of all variables appearing in the tree.
    std::set<int> variable_indices() const;

    friend class CompiledExpr;

private:
    explicit Expression(std::shared_ptr<const detail::ExprNode> node)
        : node_(std::move(node)) {}
    std::shared_ptr<const detail::ExprNode> node_;
};

// Parses `text` over the coordinates of `space` (grammar: + - * / ^, unary
// minus, sin/cos/exp/ln/sqrt, parentheses; ^ binds tightest and is
// right-associative, exponents must fold to constants).
Expression parse_expression(const std::string& text, const SpaceSpec& space);

// Same grammar over an explicit name list (index of a name in the list is
// its variable index).
Expression parse_expression(const std::string& text, const std::vector<std::string>& names);

// Expression flattened to a postfix program for cheap repeated evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expression& e);

    double evaluate(std::span<const double> point) const;

private:
    struct Instr {
        std::uint8_t op;
        double value;  // constant payload / pow exponent
        int index;     // variable index
    };
    std::vector<Instr> code_;
    int max_stack_ = 0;
    std::string text_;  // for error reporting
};

}  // namespace vortex

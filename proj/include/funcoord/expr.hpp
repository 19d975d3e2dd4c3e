#pragma once

#include <memory>
#include <string>
#include <vector>

#include "funcoord/types.hpp"

namespace funcoord {

/// Parse or evaluation failure with a 1-based column position.
class expr_error : public std::runtime_error {
public:
    expr_error(const std::string& what, int column)
        : std::runtime_error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

/// A parsed arithmetic expression over named variables.
///
/// Grammar: identifiers (declared variables plus the constants `pi` and `e`),
/// decimal literals, binary + - * / ^, unary -, exp/sin/cos calls, and
/// parentheses. Precedence, loosest to tightest: + -  |  * /  |  unary -  |  ^
/// (right-associative). Parsing is precedence climbing; errors carry the
/// offending column.
class Expr {
public:
    static Expr parse(const std::string& text, const std::vector<std::string>& variables);

    double eval(const std::vector<double>& values) const;
    double eval1(double x) const { return eval({x}); }
    double eval2(double x, double y) const { return eval({x, y}); }

    const std::string& text() const { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    size_t arity_ = 0;
};

}  // namespace funcoord

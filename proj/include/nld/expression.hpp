#pragma once

#include <memory>
#include <set>
#include <string>

namespace nld {

// Arithmetic expressions over the variables t, x, y:
//   numbers, pi, + - * / ^, unary minus, parentheses,
//   abs sin cos exp log sqrt (one argument), pow min max (two),
//   piecewise(v, lo, hi, inside, outside) = inside if lo <= v <= hi else outside.
// piecewise evaluates only the selected branch, so the other may be singular.
class Expression {
public:
    struct Node;

    Expression();
    explicit Expression(const std::string& text);   // throws ConfigError with the column

    double operator()(double t, double x, double y = 0.0) const;
    double of_x(double x) const { return (*this)(0.0, x, 0.0); }

    const std::string& text() const { return text_; }
    bool uses(char var) const { return vars_.count(var) > 0; }

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
    std::set<char> vars_;
};

}  // namespace nld

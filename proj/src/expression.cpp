#include "nld/expression.hpp"

#include "nld/common.hpp"

#include <cctype>
#include <cstdlib>
#include <vector>

namespace nld {

struct Expression::Node {
    enum Kind { number, var_t, var_x, var_y, neg, add, sub, mul, div, pow, call } kind = number;
    double value = 0.0;
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;

    double eval(double t, double x, double y) const {
        auto a = [&](std::size_t i) { return args[i]->eval(t, x, y); };
        switch (kind) {
            case number: return value;
            case var_t: return t;
            case var_x: return x;
            case var_y: return y;
            case neg: return -a(0);
            case add: return a(0) + a(1);
            case sub: return a(0) - a(1);
            case mul: return a(0) * a(1);
            case div: return a(0) / a(1);
            case pow: return std::pow(a(0), a(1));
            case call: break;
        }
        if (fn == "piecewise") {
            double v = a(0);
            return (v >= a(1) && v <= a(2)) ? a(3) : a(4);
        }
        if (fn == "abs") return std::abs(a(0));
        if (fn == "sin") return std::sin(a(0));
        if (fn == "cos") return std::cos(a(0));
        if (fn == "exp") return std::exp(a(0));
        if (fn == "log") return std::log(a(0));
        if (fn == "sqrt") return std::sqrt(a(0));
        if (fn == "pow") return std::pow(a(0), a(1));
        if (fn == "min") return std::min(a(0), a(1));
        return std::max(a(0), a(1));
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

class Parser {
public:
    Parser(const std::string& s, std::set<char>& vars) : s_(s), vars_(vars) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return n;
    }

private:
    const std::string& s_;
    std::set<char>& vars_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("expression '" + s_ + "', column " + std::to_string(i_ + 1) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    static NodePtr make(Expression::Node::Kind k, std::vector<NodePtr> args, double v = 0.0, std::string fn = {}) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->args = std::move(args);
        n->value = v;
        n->fn = std::move(fn);
        return n;
    }

    NodePtr expr() {
        NodePtr l = term();
        for (;;) {
            if (eat('+'))
                l = make(Expression::Node::add, {l, term()});
            else if (eat('-'))
                l = make(Expression::Node::sub, {l, term()});
            else
                return l;
        }
    }
    NodePtr term() {
        NodePtr l = unary();
        for (;;) {
            if (eat('*'))
                l = make(Expression::Node::mul, {l, unary()});
            else if (eat('/'))
                l = make(Expression::Node::div, {l, unary()});
            else
                return l;
        }
    }
    // -a^b = -(a^b); ^ is right associative
    NodePtr unary() {
        if (eat('-')) return make(Expression::Node::neg, {unary()});
        if (eat('+')) return unary();
        NodePtr base = primary();
        if (eat('^')) return make(Expression::Node::pow, {base, unary()});
        return base;
    }
    NodePtr primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        char c = s_[i_];
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + i_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            i_ += static_cast<std::size_t>(end - begin);
            return make(Expression::Node::number, {}, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            std::string name = s_.substr(start, i_ - start);
            if (name == "x" || name == "t" || name == "y") {
                vars_.insert(name[0]);
                auto k = name == "x" ? Expression::Node::var_x
                                     : (name == "t" ? Expression::Node::var_t : Expression::Node::var_y);
                return make(k, {});
            }
            if (name == "pi") return make(Expression::Node::number, {}, kPi);
            int arity = 0;
            if (name == "abs" || name == "sin" || name == "cos" || name == "exp" || name == "log" || name == "sqrt")
                arity = 1;
            else if (name == "pow" || name == "min" || name == "max")
                arity = 2;
            else if (name == "piecewise")
                arity = 5;
            else {
                i_ = start;
                fail("unknown name '" + name + "'");
            }
            if (!eat('(')) fail("expected '(' after " + name);
            std::vector<NodePtr> args;
            for (int a = 0; a < arity; ++a) {
                if (a > 0 && !eat(',')) fail(name + " takes " + std::to_string(arity) + " arguments");
                args.push_back(expr());
            }
            if (!eat(')')) fail("expected ')' after the arguments of " + name);
            return make(Expression::Node::call, std::move(args), 0.0, name);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace

Expression::Expression() : Expression("0") {}

Expression::Expression(const std::string& text) : text_(text) {
    root_ = Parser(text_, vars_).parse();
}

double Expression::operator()(double t, double x, double y) const { return root_->eval(t, x, y); }

}  // namespace nld

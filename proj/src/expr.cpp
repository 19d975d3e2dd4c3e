#include "funcoord/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace funcoord {

struct Expr::Node {
    enum class Kind { literal, variable, negate, add, sub, mul, div, pow, call };
    Kind kind = Kind::literal;
    double value = 0.0;                    // literal
    size_t var = 0;                        // variable index
    int fn = 0;                            // 0 exp, 1 sin, 2 cos
    std::shared_ptr<const Node> lhs, rhs;  // operands (lhs only for unary)
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

struct Token {
    enum class Kind { number, ident, op, lparen, rparen, end };
    Kind kind = Kind::end;
    double number = 0.0;
    std::string ident;
    char op = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.column = static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::end;
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = text_.c_str() + pos_;
            char* end = nullptr;
            tok_.number = std::strtod(start, &end);
            if (end == start) throw expr_error("malformed number", tok_.column);
            pos_ += static_cast<size_t>(end - start);
            tok_.kind = Token::Kind::number;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = pos_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            tok_.kind = Token::Kind::ident;
            tok_.ident = text_.substr(pos_, j - pos_);
            pos_ = j;
            return;
        }
        if (c == '(') {
            tok_.kind = Token::Kind::lparen;
            ++pos_;
            return;
        }
        if (c == ')') {
            tok_.kind = Token::Kind::rparen;
            ++pos_;
            return;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            tok_.kind = Token::Kind::op;
            tok_.op = c;
            ++pos_;
            return;
        }
        throw expr_error(std::string("unexpected character '") + c + "'", tok_.column);
    }

    const std::string& text_;
    size_t pos_ = 0;
    Token tok_;
};

NodePtr make_node(Expr::Node n) { return std::make_shared<Expr::Node>(std::move(n)); }

// binding powers: + - (10), * / (20), unary - (25), ^ (30, right-assoc)
int binding_power(char op) {
    switch (op) {
        case '+':
        case '-':
            return 10;
        case '*':
        case '/':
            return 20;
        case '^':
            return 30;
        default:
            return -1;
    }
}

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : lex_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expression(0);
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::end) {
            if (t.kind == Token::Kind::rparen) throw expr_error("unbalanced parenthesis", t.column);
            throw expr_error("trailing input after expression", t.column);
        }
        return e;
    }

private:
    NodePtr expression(int min_bp) {
        NodePtr lhs = prefix();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Kind::op) break;
            const int bp = binding_power(t.op);
            if (bp < min_bp) break;
            const Token op = lex_.take();
            // '^' binds its right operand at the same level (right-assoc).
            NodePtr rhs = expression(op.op == '^' ? bp : bp + 1);
            Expr::Node n;
            switch (op.op) {
                case '+': n.kind = Expr::Node::Kind::add; break;
                case '-': n.kind = Expr::Node::Kind::sub; break;
                case '*': n.kind = Expr::Node::Kind::mul; break;
                case '/': n.kind = Expr::Node::Kind::div; break;
                case '^': n.kind = Expr::Node::Kind::pow; break;
            }
            n.lhs = lhs;
            n.rhs = rhs;
            lhs = make_node(std::move(n));
        }
        return lhs;
    }

    NodePtr prefix() {
        const Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::number: {
                Expr::Node n;
                n.kind = Expr::Node::Kind::literal;
                n.value = t.number;
                return make_node(std::move(n));
            }
            case Token::Kind::ident:
                return identifier(t);
            case Token::Kind::lparen: {
                NodePtr e = expression(0);
                expect_rparen(t.column);
                return e;
            }
            case Token::Kind::op:
                if (t.op == '-') {
                    Expr::Node n;
                    n.kind = Expr::Node::Kind::negate;
                    n.lhs = expression(25);
                    return make_node(std::move(n));
                }
                throw expr_error(std::string("unexpected operator '") + t.op + "'", t.column);
            case Token::Kind::rparen:
                throw expr_error("unbalanced parenthesis", t.column);
            case Token::Kind::end:
                throw expr_error("unexpected end of expression", t.column);
        }
        throw expr_error("unexpected token", t.column);
    }

    NodePtr identifier(const Token& t) {
        if (t.ident == "exp" || t.ident == "sin" || t.ident == "cos") {
            const Token open = lex_.take();
            if (open.kind != Token::Kind::lparen)
                throw expr_error("expected '(' after " + t.ident, open.column);
            Expr::Node n;
            n.kind = Expr::Node::Kind::call;
            n.fn = t.ident == "exp" ? 0 : (t.ident == "sin" ? 1 : 2);
            n.lhs = expression(0);
            expect_rparen(open.column);
            return make_node(std::move(n));
        }
        if (t.ident == "pi") {
            Expr::Node n;
            n.kind = Expr::Node::Kind::literal;
            n.value = kPi;
            return make_node(std::move(n));
        }
        if (t.ident == "e") {
            Expr::Node n;
            n.kind = Expr::Node::Kind::literal;
            n.value = std::exp(1.0);
            return make_node(std::move(n));
        }
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == t.ident) {
                Expr::Node n;
                n.kind = Expr::Node::Kind::variable;
                n.var = i;
                return make_node(std::move(n));
            }
        }
        throw expr_error("unknown identifier '" + t.ident + "'", t.column);
    }

    void expect_rparen(int open_column) {
        const Token t = lex_.take();
        if (t.kind != Token::Kind::rparen)
            throw expr_error("unbalanced parenthesis (opened at column " +
                                 std::to_string(open_column) + ")",
                             t.column);
    }

    Lexer lex_;
    const std::vector<std::string>& vars_;
};

double eval_node(const Expr::Node& n, const std::vector<double>& values) {
    using Kind = Expr::Node::Kind;
    switch (n.kind) {
        case Kind::literal: return n.value;
        case Kind::variable: return values[n.var];
        case Kind::negate: return -eval_node(*n.lhs, values);
        case Kind::add: return eval_node(*n.lhs, values) + eval_node(*n.rhs, values);
        case Kind::sub: return eval_node(*n.lhs, values) - eval_node(*n.rhs, values);
        case Kind::mul: return eval_node(*n.lhs, values) * eval_node(*n.rhs, values);
        case Kind::div: return eval_node(*n.lhs, values) / eval_node(*n.rhs, values);
        case Kind::pow: return std::pow(eval_node(*n.lhs, values), eval_node(*n.rhs, values));
        case Kind::call: {
            const double v = eval_node(*n.lhs, values);
            return n.fn == 0 ? std::exp(v) : (n.fn == 1 ? std::sin(v) : std::cos(v));
        }
    }
    return 0.0;
}

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
    Parser p(text, variables);
    Expr e;
    e.text_ = text;
    e.root_ = p.parse();
    e.arity_ = variables.size();
    return e;
}

double Expr::eval(const std::vector<double>& values) const {
    if (values.size() != arity_)
        throw std::invalid_argument("Expr::eval: wrong number of variable values");
    return eval_node(*root_, values);
}

}  // namespace funcoord

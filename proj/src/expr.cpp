#include "vortex/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <utility>

namespace vortex {
namespace detail {

enum class Op : std::uint8_t {
    Constant,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // exponent held as a constant in `value`
    Sin,
    Cos,
    Exp,
    Ln,
    Sqrt,
};

struct ExprNode {
    Op op;
    double value = 0.0;    // Constant payload or Pow exponent
    int index = -1;        // Variable index
    std::string name;      // Variable name
    std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Constant;
    n->value = v;
    return n;
}

NodePtr make_variable(std::string name, int index) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Variable;
    n->index = index;
    n->name = std::move(name);
    return n;
}

bool is_const(const NodePtr& n, double* v = nullptr) {
    if (n->op != Op::Constant) return false;
    if (v) *v = n->value;
    return true;
}

bool is_const_value(const NodePtr& n, double v) {
    return n->op == Op::Constant && n->value == v;
}

NodePtr make_unary(Op op, NodePtr a);

// Minimal simplification only: constant folding, 0*x -> 0, x+0 -> x,
// x^1 -> x and friends.  Anything fancier is out of scope by design.
NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
    double ca, cb;
    const bool a_const = is_const(a, &ca);
    const bool b_const = is_const(b, &cb);
    switch (op) {
        case Op::Add:
            if (a_const && b_const) return make_constant(ca + cb);
            if (a_const && ca == 0.0) return b;
            if (b_const && cb == 0.0) return a;
            break;
        case Op::Sub:
            if (a_const && b_const) return make_constant(ca - cb);
            if (b_const && cb == 0.0) return a;
            if (a_const && ca == 0.0) return make_unary(Op::Neg, b);
            break;
        case Op::Mul:
            if (a_const && b_const) return make_constant(ca * cb);
            if ((a_const && ca == 0.0) || (b_const && cb == 0.0)) return make_constant(0.0);
            if (a_const && ca == 1.0) return b;
            if (b_const && cb == 1.0) return a;
            break;
        case Op::Div:
            if (a_const && b_const && cb != 0.0) return make_constant(ca / cb);
            if (a_const && ca == 0.0) return make_constant(0.0);
            if (b_const && cb == 1.0) return a;
            break;
        default:
            break;
    }
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_pow(NodePtr base, double exponent) {
    if (exponent == 1.0) return base;
    if (exponent == 0.0) return make_constant(1.0);
    double cb;
    if (is_const(base, &cb)) {
        const double v = std::pow(cb, exponent);
        if (std::isfinite(v)) return make_constant(v);
    }
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Pow;
    n->value = exponent;
    n->a = std::move(base);
    return n;
}

NodePtr make_unary(Op op, NodePtr a) {
    double ca;
    if (is_const(a, &ca)) {
        switch (op) {
            case Op::Neg: return make_constant(-ca);
            case Op::Sin: return make_constant(std::sin(ca));
            case Op::Cos: return make_constant(std::cos(ca));
            case Op::Exp: {
                const double v = std::exp(ca);
                if (std::isfinite(v)) return make_constant(v);
                break;
            }
            case Op::Ln:
                if (ca > 0.0) return make_constant(std::log(ca));
                break;
            case Op::Sqrt:
                if (ca >= 0.0) return make_constant(std::sqrt(ca));
                break;
            default: break;
        }
    }
    if (op == Op::Neg && a->op == Op::Neg) return a->a;
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Printing precedence levels: + - (1), * / (2), unary - (3), ^ (4), atom (5).
int print_level(const ExprNode& n) {
    switch (n.op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        default: return 5;
    }
}

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int min_level, std::string& out) {
    if (print_level(child) < min_level) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.op) {
        case Op::Constant:
            if (n.value < 0.0 || std::signbit(n.value)) {
                out += '-';
                out += format_double(-n.value);
            } else {
                out += format_double(n.value);
            }
            return;
        case Op::Variable: out += n.name; return;
        case Op::Neg:
            out += '-';
            print_child(*n.a, 3, out);
            return;
        case Op::Add:
            print_child(*n.a, 1, out);
            out += " + ";
            print_child(*n.b, 2, out);
            return;
        case Op::Sub:
            print_child(*n.a, 1, out);
            out += " - ";
            print_child(*n.b, 2, out);
            return;
        case Op::Mul:
            print_child(*n.a, 2, out);
            out += "*";
            print_child(*n.b, 3, out);
            return;
        case Op::Div:
            print_child(*n.a, 2, out);
            out += "/";
            print_child(*n.b, 3, out);
            return;
        case Op::Pow:
            print_child(*n.a, 5, out);
            out += '^';
            if (n.value < 0.0) {
                out += '(';
                out += '-';
                out += format_double(-n.value);
                out += ')';
            } else {
                out += format_double(n.value);
            }
            return;
        case Op::Sin: out += "sin("; print_node(*n.a, out); out += ')'; return;
        case Op::Cos: out += "cos("; print_node(*n.a, out); out += ')'; return;
        case Op::Exp: out += "exp("; print_node(*n.a, out); out += ')'; return;
        case Op::Ln: out += "ln("; print_node(*n.a, out); out += ')'; return;
        case Op::Sqrt: out += "sqrt("; print_node(*n.a, out); out += ')'; return;
    }
}

std::string print_tree(const ExprNode& n) {
    std::string out;
    print_node(n, out);
    return out;
}

[[noreturn]] void eval_fail(const ExprNode& n, const char* message) {
    throw EvalError(message, print_tree(n));
}

bool is_integer(double v) { return std::floor(v) == v && std::abs(v) < 1e15; }

double eval_pow(const ExprNode& n, double base, double exponent) {
    if (base == 0.0 && exponent < 0.0) eval_fail(n, "zero raised to a negative power");
    if (base < 0.0 && !is_integer(exponent)) eval_fail(n, "negative base under a fractional power");
    return std::pow(base, exponent);
}

double eval_node(const ExprNode& n, std::span<const double> point) {
    switch (n.op) {
        case Op::Constant: return n.value;
        case Op::Variable:
            if (n.index < 0 || static_cast<std::size_t>(n.index) >= point.size())
                eval_fail(n, "point does not assign a value to this variable");
            return point[static_cast<std::size_t>(n.index)];
        case Op::Neg: return -eval_node(*n.a, point);
        case Op::Add: return eval_node(*n.a, point) + eval_node(*n.b, point);
        case Op::Sub: return eval_node(*n.a, point) - eval_node(*n.b, point);
        case Op::Mul: return eval_node(*n.a, point) * eval_node(*n.b, point);
        case Op::Div: {
            const double num = eval_node(*n.a, point);
            const double den = eval_node(*n.b, point);
            if (den == 0.0) eval_fail(n, "division by zero");
            return num / den;
        }
        case Op::Pow: return eval_pow(n, eval_node(*n.a, point), n.value);
        case Op::Sin: return std::sin(eval_node(*n.a, point));
        case Op::Cos: return std::cos(eval_node(*n.a, point));
        case Op::Exp: return std::exp(eval_node(*n.a, point));
        case Op::Ln: {
            const double v = eval_node(*n.a, point);
            if (v <= 0.0) eval_fail(n, "logarithm of a non-positive value");
            return std::log(v);
        }
        case Op::Sqrt: {
            const double v = eval_node(*n.a, point);
            if (v < 0.0) eval_fail(n, "square root of a negative value");
            return std::sqrt(v);
        }
    }
    eval_fail(n, "corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int index) {
    switch (n->op) {
        case Op::Constant: return make_constant(0.0);
        case Op::Variable: return make_constant(n->index == index ? 1.0 : 0.0);
        case Op::Neg: return make_unary(Op::Neg, diff_node(n->a, index));
        case Op::Add:
            return make_binary(Op::Add, diff_node(n->a, index), diff_node(n->b, index));
        case Op::Sub:
            return make_binary(Op::Sub, diff_node(n->a, index), diff_node(n->b, index));
        case Op::Mul:
            return make_binary(Op::Add,
                               make_binary(Op::Mul, diff_node(n->a, index), n->b),
                               make_binary(Op::Mul, n->a, diff_node(n->b, index)));
        case Op::Div:
            // (u/v)' = u'/v - u v'/v^2
            return make_binary(
                Op::Sub, make_binary(Op::Div, diff_node(n->a, index), n->b),
                make_binary(Op::Div, make_binary(Op::Mul, n->a, diff_node(n->b, index)),
                            make_pow(n->b, 2.0)));
        case Op::Pow:
            // exponent is constant: (u^c)' = c u^(c-1) u'
            return make_binary(Op::Mul,
                               make_binary(Op::Mul, make_constant(n->value),
                                           make_pow(n->a, n->value - 1.0)),
                               diff_node(n->a, index));
        case Op::Sin:
            return make_binary(Op::Mul, make_unary(Op::Cos, n->a), diff_node(n->a, index));
        case Op::Cos:
            return make_unary(Op::Neg, make_binary(Op::Mul, make_unary(Op::Sin, n->a),
                                                   diff_node(n->a, index)));
        case Op::Exp:
            return make_binary(Op::Mul, make_unary(Op::Exp, n->a), diff_node(n->a, index));
        case Op::Ln:
            return make_binary(Op::Div, diff_node(n->a, index), n->a);
        case Op::Sqrt:
            return make_binary(Op::Div, diff_node(n->a, index),
                               make_binary(Op::Mul, make_constant(2.0),
                                           make_unary(Op::Sqrt, n->a)));
    }
    throw std::logic_error("diff_node: corrupt expression node");
}

void collect_variables(const ExprNode& n, std::set<int>& out) {
    if (n.op == Op::Variable) out.insert(n.index);
    if (n.a) collect_variables(*n.a, out);
    if (n.b) collect_variables(*n.b, out);
}

}  // namespace detail

using detail::NodePtr;
using detail::Op;

Expression Expression::constant(double value) {
    return Expression(detail::make_constant(value));
}

Expression Expression::variable(const SpaceSpec& space, int index) {
    if (index < 0 || index > space.dim())
        throw std::invalid_argument("Expression::variable: index out of range");
    return Expression(detail::make_variable(space.name(index), index));
}

Expression Expression::variable(std::string name, int index) {
    return Expression(detail::make_variable(std::move(name), index));
}

// Expression stores a shared_ptr; a default-constructed one means "0".
static const NodePtr& ensure(const NodePtr& n) {
    static const NodePtr zero = detail::make_constant(0.0);
    return n ? n : zero;
}

Expression Expression::operator-() const {
    return Expression(detail::make_unary(Op::Neg, ensure(node_)));
}

Expression operator+(const Expression& a, const Expression& b) {
    return Expression(detail::make_binary(Op::Add, ensure(a.node_), ensure(b.node_)));
}
Expression operator-(const Expression& a, const Expression& b) {
    return Expression(detail::make_binary(Op::Sub, ensure(a.node_), ensure(b.node_)));
}
Expression operator*(const Expression& a, const Expression& b) {
    return Expression(detail::make_binary(Op::Mul, ensure(a.node_), ensure(b.node_)));
}
Expression operator/(const Expression& a, const Expression& b) {
    return Expression(detail::make_binary(Op::Div, ensure(a.node_), ensure(b.node_)));
}

Expression Expression::pow(const Expression& base, double exponent) {
    return Expression(detail::make_pow(ensure(base.node_), exponent));
}
Expression Expression::sin(const Expression& a) {
    return Expression(detail::make_unary(Op::Sin, ensure(a.node_)));
}
Expression Expression::cos(const Expression& a) {
    return Expression(detail::make_unary(Op::Cos, ensure(a.node_)));
}
Expression Expression::exp(const Expression& a) {
    return Expression(detail::make_unary(Op::Exp, ensure(a.node_)));
}
Expression Expression::ln(const Expression& a) {
    return Expression(detail::make_unary(Op::Ln, ensure(a.node_)));
}
Expression Expression::sqrt(const Expression& a) {
    return Expression(detail::make_unary(Op::Sqrt, ensure(a.node_)));
}

Expression Expression::differentiate(int index) const {
    return Expression(detail::diff_node(ensure(node_), index));
}

double Expression::evaluate(std::span<const double> point) const {
    const double v = detail::eval_node(*ensure(node_), point);
    if (!std::isfinite(v))
        throw EvalError("non-finite result", detail::print_tree(*ensure(node_)));
    return v;
}

double Expression::evaluate(const std::map<std::string, double>& point) const {
    // Build an index -> value array: index order comes from the variable
    // nodes themselves, so only named lookups are needed.
    std::set<int> indices = variable_indices();
    int max_index = -1;
    for (int i : indices) max_index = std::max(max_index, i);
    std::vector<double> values(static_cast<std::size_t>(max_index + 1), 0.0);

    // Collect (index, name) pairs by walking the tree once more.
    struct Walker {
        static void run(const detail::ExprNode& n, std::vector<double>& values,
                        const std::map<std::string, double>& point) {
            if (n.op == Op::Variable) {
                auto it = point.find(n.name);
                if (it == point.end())
                    throw EvalError("point does not assign a value to variable", n.name);
                values[static_cast<std::size_t>(n.index)] = it->second;
            }
            if (n.a) run(*n.a, values, point);
            if (n.b) run(*n.b, values, point);
        }
    };
    Walker::run(*ensure(node_), values, point);
    return evaluate(std::span<const double>(values));
}

std::string Expression::print() const { return detail::print_tree(*ensure(node_)); }

bool Expression::is_zero() const {
    return detail::is_const_value(ensure(node_), 0.0);
}

bool Expression::is_constant(double* value) const {
    return detail::is_const(ensure(node_), value);
}

std::set<int> Expression::variable_indices() const {
    std::set<int> out;
    detail::collect_variables(*ensure(node_), out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
    enum Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } kind;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = Token::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': current_.kind = Token::Plus; ++pos_; return;
            case '-': current_.kind = Token::Minus; ++pos_; return;
            case '*': current_.kind = Token::Star; ++pos_; return;
            case '/': current_.kind = Token::Slash; ++pos_; return;
            case '^': current_.kind = Token::Caret; ++pos_; return;
            case '(': current_.kind = Token::LParen; ++pos_; return;
            case ')': current_.kind = Token::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                std::size_t mark = pos_;
                ++pos_;
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    while (pos_ < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        ++pos_;
                } else {
                    pos_ = mark;  // 'e' belongs to an identifier following the number
                }
            }
            current_.kind = Token::Number;
            current_.text = text_.substr(start, pos_ - start);
            std::size_t used = 0;
            try {
                current_.number = std::stod(current_.text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != current_.text.size())
                throw ParseError("malformed number '" + current_.text + "'", start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.kind = Token::Ident;
            current_.text = text_.substr(start, pos_ - start);
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    const std::string& text_;
    Token current_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& names)
        : lexer_(text), names_(names) {}

    Expression parse() {
        Expression e = parse_sum();
        const Token& t = lexer_.peek();
        if (t.kind != Token::End)
            throw ParseError("unexpected trailing input", t.offset);
        return e;
    }

private:
    Expression parse_sum() {
        Expression e = parse_product();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.kind == Token::Plus) {
                lexer_.take();
                e = e + parse_product();
            } else if (t.kind == Token::Minus) {
                lexer_.take();
                e = e - parse_product();
            } else {
                return e;
            }
        }
    }

    Expression parse_product() {
        Expression e = parse_unary();
        while (true) {
            const Token& t = lexer_.peek();
            if (t.kind == Token::Star) {
                lexer_.take();
                e = e * parse_unary();
            } else if (t.kind == Token::Slash) {
                lexer_.take();
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    // Unary minus sits between * / and ^, so -x^2 parses as -(x^2).
    Expression parse_unary() {
        if (lexer_.peek().kind == Token::Minus) {
            lexer_.take();
            return -parse_unary();
        }
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_atom();
        if (lexer_.peek().kind == Token::Caret) {
            Token caret = lexer_.take();
            Expression exponent = parse_unary();  // right-associative
            double value;
            if (!exponent.is_constant(&value))
                throw ParseError("exponent must be a constant", caret.offset);
            return Expression::pow(base, value);
        }
        return base;
    }

    Expression parse_atom() {
        Token t = lexer_.take();
        switch (t.kind) {
            case Token::Number: return Expression::constant(t.number);
            case Token::LParen: {
                Expression e = parse_sum();
                Token close = lexer_.take();
                if (close.kind != Token::RParen)
                    throw ParseError("expected ')'", close.offset);
                return e;
            }
            case Token::Ident: {
                if (lexer_.peek().kind == Token::LParen) {
                    lexer_.take();
                    Expression arg = parse_sum();
                    Token close = lexer_.take();
                    if (close.kind != Token::RParen)
                        throw ParseError("expected ')'", close.offset);
                    if (t.text == "sin") return Expression::sin(arg);
                    if (t.text == "cos") return Expression::cos(arg);
                    if (t.text == "exp") return Expression::exp(arg);
                    if (t.text == "ln") return Expression::ln(arg);
                    if (t.text == "sqrt") return Expression::sqrt(arg);
                    throw ParseError("unknown function '" + t.text + "'", t.offset);
                }
                for (std::size_t i = 0; i < names_.size(); ++i)
                    if (names_[i] == t.text)
                        return Expression::variable(t.text, static_cast<int>(i));
                throw ParseError("unknown identifier '" + t.text + "'", t.offset);
            }
            default:
                throw ParseError("expected a number, identifier or '('", t.offset);
        }
    }

    Lexer lexer_;
    const std::vector<std::string>& names_;
};

}  // namespace

Expression parse_expression(const std::string& text, const SpaceSpec& space) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(space.extended_dim()));
    for (int i = 0; i < space.extended_dim(); ++i) names.push_back(space.name(i));
    return Parser(text, names).parse();
}

Expression parse_expression(const std::string& text, const std::vector<std::string>& names) {
    return Parser(text, names).parse();
}

// ---------------------------------------------------------------------------
// Compiled evaluation

CompiledExpr::CompiledExpr(const Expression& e) {
    text_ = e.print();
    struct Emit {
        std::vector<Instr>& code;
        int depth = 0, max_depth = 0;
        void run(const detail::ExprNode& n) {
            switch (n.op) {
                case Op::Constant:
                    code.push_back({static_cast<std::uint8_t>(Op::Constant), n.value, -1});
                    push();
                    return;
                case Op::Variable:
                    code.push_back({static_cast<std::uint8_t>(Op::Variable), 0.0, n.index});
                    push();
                    return;
                case Op::Pow:
                    run(*n.a);
                    code.push_back({static_cast<std::uint8_t>(Op::Pow), n.value, -1});
                    return;
                default: break;
            }
            run(*n.a);
            if (n.b) {
                run(*n.b);
                --depth;  // binary op pops one
            }
            code.push_back({static_cast<std::uint8_t>(n.op), 0.0, -1});
        }
        void push() {
            ++depth;
            max_depth = std::max(max_depth, depth);
        }
    };
    Emit emit{code_};
    emit.run(*ensure(e.node_));
    max_stack_ = emit.max_depth;
}

double CompiledExpr::evaluate(std::span<const double> point) const {
    if (code_.empty()) return 0.0;  // default-constructed: the zero expression
    double local[64];
    std::vector<double> heap;
    double* stack = local;
    if (max_stack_ > 64) {
        heap.resize(static_cast<std::size_t>(max_stack_));
        stack = heap.data();
    }
    int top = -1;
    for (const Instr& ins : code_) {
        switch (static_cast<Op>(ins.op)) {
            case Op::Constant: stack[++top] = ins.value; break;
            case Op::Variable:
                if (ins.index < 0 || static_cast<std::size_t>(ins.index) >= point.size())
                    throw EvalError("point does not assign a value to a variable", text_);
                stack[++top] = point[static_cast<std::size_t>(ins.index)];
                break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::Add: --top; stack[top] += stack[top + 1]; break;
            case Op::Sub: --top; stack[top] -= stack[top + 1]; break;
            case Op::Mul: --top; stack[top] *= stack[top + 1]; break;
            case Op::Div:
                --top;
                if (stack[top + 1] == 0.0) throw EvalError("division by zero", text_);
                stack[top] /= stack[top + 1];
                break;
            case Op::Pow: {
                const double base = stack[top];
                if (base == 0.0 && ins.value < 0.0)
                    throw EvalError("zero raised to a negative power", text_);
                if (base < 0.0 && !detail::is_integer(ins.value))
                    throw EvalError("negative base under a fractional power", text_);
                stack[top] = std::pow(base, ins.value);
                break;
            }
            case Op::Sin: stack[top] = std::sin(stack[top]); break;
            case Op::Cos: stack[top] = std::cos(stack[top]); break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Ln:
                if (stack[top] <= 0.0)
                    throw EvalError("logarithm of a non-positive value", text_);
                stack[top] = std::log(stack[top]);
                break;
            case Op::Sqrt:
                if (stack[top] < 0.0)
                    throw EvalError("square root of a negative value", text_);
                stack[top] = std::sqrt(stack[top]);
                break;
        }
    }
    const double v = stack[0];
    if (!std::isfinite(v)) throw EvalError("non-finite result", text_);
    return v;
}

}  // namespace vortex

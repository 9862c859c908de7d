#include "pyopt/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <set>
#include <utility>

namespace pyopt {
namespace {

enum class Tok {
    Name, Int, Float, Str, Op, Newline, Indent, Dedent, End,
};

struct Token {
    Tok kind;
    std::string text;   // Name/Op text, Str contents (unescaped)
    long long ival = 0;
    double fval = 0.0;
    int line = 1, col = 1;
};

const std::set<std::string> kKeywords = {
    "def", "return", "if", "elif", "else", "while", "for", "in", "pass",
    "and", "or", "not", "True", "False",
};

// Legal Python we deliberately reject.
const std::set<std::string> kForeignKeywords = {
    "class", "lambda", "import", "from", "try", "except", "finally", "with",
    "yield", "global", "nonlocal", "del", "raise", "assert", "break",
    "continue", "async", "await", "None", "is", "match",
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { indents_.push_back(0); }

    std::vector<Token> run() {
        std::vector<Token> out;
        bool at_line_start = true;
        while (true) {
            if (at_line_start) {
                int spaces = scan_indent();
                if (pos_ >= src_.size()) break;
                char c = src_[pos_];
                if (c == '\n') { advance_newline(); continue; }
                if (c == '#') { skip_comment(); continue; }
                emit_indentation(spaces, out);
                at_line_start = false;
                continue;
            }
            if (pos_ >= src_.size()) break;
            char c = src_[pos_];
            if (c == '\n') {
                out.push_back(tok(Tok::Newline, "\\n"));
                advance_newline();
                at_line_start = true;
                continue;
            }
            if (c == '#') { skip_comment(); continue; }
            if (c == ' ' || c == '\t' || c == '\r') { ++pos_; ++col_; continue; }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '.' && pos_ + 1 < src_.size() &&
                 std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                out.push_back(lex_number());
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(lex_name());
                continue;
            }
            if (c == '\'' || c == '"') {
                out.push_back(lex_string());
                continue;
            }
            out.push_back(lex_operator());
        }
        if (!out.empty() && out.back().kind != Tok::Newline)
            out.push_back(tok(Tok::Newline, "\\n"));
        while (indents_.back() > 0) {
            indents_.pop_back();
            out.push_back(tok(Tok::Dedent, ""));
        }
        out.push_back(tok(Tok::End, ""));
        return out;
    }

private:
    Token tok(Tok kind, std::string text) {
        Token t;
        t.kind = kind;
        t.text = std::move(text);
        t.line = line_;
        t.col = col_;
        return t;
    }

    int scan_indent() {
        int spaces = 0;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ') { spaces += 1; }
            else if (c == '\t') { spaces += 8 - spaces % 8; }
            else break;
            ++pos_;
            ++col_;
        }
        return spaces;
    }

    void emit_indentation(int spaces, std::vector<Token>& out) {
        if (spaces > indents_.back()) {
            indents_.push_back(spaces);
            out.push_back(tok(Tok::Indent, ""));
            return;
        }
        while (spaces < indents_.back()) {
            indents_.pop_back();
            out.push_back(tok(Tok::Dedent, ""));
        }
        if (spaces != indents_.back())
            throw SyntaxError(line_, col_, "inconsistent indentation");
    }

    void advance_newline() {
        ++pos_;
        ++line_;
        col_ = 1;
    }

    void skip_comment() {
        while (pos_ < src_.size() && src_[pos_] != '\n') { ++pos_; ++col_; }
    }

    Token lex_number() {
        Token t = tok(Tok::Int, "");
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) { ++pos_; ++col_; }
        bool is_float = false;
        if (pos_ < src_.size() && src_[pos_] == '.' &&
            !(pos_ + 1 < src_.size() && src_[pos_ + 1] == '.')) {
            is_float = true;
            ++pos_; ++col_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) { ++pos_; ++col_; }
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_; ++col_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) { ++pos_; ++col_; }
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                is_float = true;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) { ++pos_; ++col_; }
            } else {
                col_ -= static_cast<int>(pos_ - save);
                pos_ = save;
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        if (is_float) {
            t.kind = Tok::Float;
            t.fval = std::strtod(text.c_str(), nullptr);
        } else {
            t.ival = std::stoll(text);
        }
        t.text = std::move(text);
        return t;
    }

    Token lex_name() {
        Token t = tok(Tok::Name, "");
        size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_; ++col_;
        }
        t.text = src_.substr(start, pos_ - start);
        return t;
    }

    Token lex_string() {
        Token t = tok(Tok::Str, "");
        char quote = src_[pos_];
        ++pos_; ++col_;
        std::string value;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n')
                throw SyntaxError(line_, col_, "unterminated string literal");
            char c = src_[pos_];
            if (c == quote) { ++pos_; ++col_; break; }
            if (c == '\\') {
                ++pos_; ++col_;
                if (pos_ >= src_.size()) throw SyntaxError(line_, col_, "bad escape");
                char e = src_[pos_];
                switch (e) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    default: throw SyntaxError(line_, col_, "unsupported escape sequence");
                }
                ++pos_; ++col_;
                continue;
            }
            value += c;
            ++pos_; ++col_;
        }
        t.text = std::move(value);
        return t;
    }

    Token lex_operator() {
        static const char* two[] = {"**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%="};
        for (const char* op : two) {
            if (src_.compare(pos_, 2, op) == 0) {
                Token t = tok(Tok::Op, op);
                pos_ += 2; col_ += 2;
                return t;
            }
        }
        char c = src_[pos_];
        static const std::string single = "+-*/%<>=()[]{},:.";
        if (single.find(c) == std::string::npos)
            throw SyntaxError(line_, col_, std::string("unexpected character '") + c + "'");
        Token t = tok(Tok::Op, std::string(1, c));
        ++pos_; ++col_;
        return t;
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    std::vector<int> indents_;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program parse_program() {
        Program p;
        skip_newlines();
        while (!at(Tok::End)) {
            p.body.push_back(parse_stmt());
            skip_newlines();
        }
        p.renumber();
        return p;
    }

    ExprPtr parse_single_expr() {
        ExprPtr e = parse_expr();
        skip_newlines();
        if (!at(Tok::End)) throw err("trailing input after expression");
        return e;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }
    bool at_op(const char* text) const { return at(Tok::Op) && cur().text == text; }
    bool at_name(const char* text) const { return at(Tok::Name) && cur().text == text; }
    Token take() { return toks_[pos_++]; }
    SyntaxError err(const std::string& m) const { return SyntaxError(cur().line, cur().col, m); }

    void expect_op(const char* text) {
        if (!at_op(text)) throw err(std::string("expected '") + text + "'");
        ++pos_;
    }
    void expect_newline() {
        if (!at(Tok::Newline)) throw err("expected end of line");
        ++pos_;
    }
    void skip_newlines() {
        while (at(Tok::Newline)) ++pos_;
    }

    void reject_foreign(const Token& t) {
        if (t.kind == Tok::Name && kForeignKeywords.count(t.text))
            throw UnsupportedConstruct(t.line, t.text);
    }

    std::vector<Stmt> parse_block() {
        expect_op(":");
        if (!at(Tok::Newline)) throw err("expected an indented block");
        ++pos_;
        skip_newlines();
        if (!at(Tok::Indent)) throw err("expected an indented block");
        ++pos_;
        std::vector<Stmt> body;
        skip_newlines();
        while (!at(Tok::Dedent) && !at(Tok::End)) {
            body.push_back(parse_stmt());
            skip_newlines();
        }
        if (at(Tok::Dedent)) ++pos_;
        if (body.empty()) throw err("empty block");
        return body;
    }

    Stmt parse_stmt() {
        reject_foreign(cur());
        if (at_name("if")) return parse_if(false);
        if (at_name("while")) return parse_while();
        if (at_name("for")) return parse_for();
        if (at_name("def")) return parse_def();
        if (at_name("return")) return parse_return();
        if (at_name("pass")) {
            ++pos_;
            expect_newline();
            Stmt s;
            s.kind = StmtKind::Pass;
            return s;
        }
        return parse_simple();
    }

    Stmt parse_if(bool from_elif) {
        ++pos_;  // if / elif
        Stmt s;
        s.kind = StmtKind::If;
        s.value = parse_expr();
        s.body = parse_block();
        skip_newlines();
        if (at_name("elif")) {
            s.orelse.push_back(parse_if(true));
        } else if (at_name("else")) {
            ++pos_;
            s.orelse = parse_block();
        }
        (void)from_elif;
        return s;
    }

    Stmt parse_while() {
        ++pos_;
        Stmt s;
        s.kind = StmtKind::While;
        s.value = parse_expr();
        s.body = parse_block();
        return s;
    }

    Stmt parse_for() {
        ++pos_;
        Stmt s;
        s.kind = StmtKind::For;
        if (!at(Tok::Name)) throw err("expected loop variable");
        s.target = take().text;
        if (!at_name("in")) throw err("expected 'in'");
        ++pos_;
        s.value = parse_expr();
        s.body = parse_block();
        return s;
    }

    Stmt parse_def() {
        ++pos_;
        Stmt s;
        s.kind = StmtKind::FunDef;
        if (!at(Tok::Name)) throw err("expected function name");
        s.target = take().text;
        expect_op("(");
        if (!at_op(")")) {
            while (true) {
                if (!at(Tok::Name)) throw err("expected parameter name");
                s.params.push_back(take().text);
                if (at_op(",")) { ++pos_; continue; }
                break;
            }
        }
        expect_op(")");
        s.body = parse_block();
        return s;
    }

    Stmt parse_return() {
        int line = cur().line;
        ++pos_;
        Stmt s;
        s.kind = StmtKind::Return;
        if (!at(Tok::Newline)) s.value = parse_expr();
        expect_newline();
        (void)line;
        return s;
    }

    Stmt parse_simple() {
        int line = cur().line;
        ExprPtr e = parse_expr();
        if (at(Tok::Op) && (cur().text == "+=" || cur().text == "-=" || cur().text == "*=" ||
                            cur().text == "/=" || cur().text == "%="))
            throw UnsupportedConstruct(line, "augmented assignment");
        if (at_op("=")) {
            ++pos_;
            Stmt s;
            if (const auto* v = e->as<VarE>()) {
                s.kind = StmtKind::Assign;
                s.target = v->name;
            } else if (const auto* sub = e->as<SubscriptE>()) {
                const auto* base = sub->base->as<VarE>();
                if (!base) throw UnsupportedConstruct(line, "subscript assignment to a non-variable");
                s.kind = StmtKind::SubscriptAssign;
                s.target = base->name;
                s.index = sub->index;
            } else if (e->as<ListE>()) {
                throw UnsupportedConstruct(line, "sequence unpacking assignment");
            } else {
                throw UnsupportedConstruct(line, "assignment to this target form");
            }
            s.value = parse_expr();
            if (at_op("=")) throw UnsupportedConstruct(line, "chained assignment");
            expect_newline();
            return s;
        }
        if (at_op(",")) throw UnsupportedConstruct(line, "tuple expression");
        if (!e->as<CallE>() && !e->as<MethodE>())
            throw UnsupportedConstruct(line, "expression statement that is not a call");
        Stmt s;
        s.kind = StmtKind::ExprStmt;
        s.value = e;
        expect_newline();
        return s;
    }

    // Expression grammar, loosest first: or, and, not, comparison,
    // additive, multiplicative, unary minus, power, postfix, atom.
    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_and();
        while (at_name("or")) {
            ++pos_;
            lhs = make_bin(BinOp::Or, lhs, parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (at_name("and")) {
            ++pos_;
            lhs = make_bin(BinOp::And, lhs, parse_not());
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (at_name("not")) {
            ++pos_;
            return make_expr(Expr{UnE{UnOp::Not, parse_not()}});
        }
        return parse_comparison();
    }

    std::optional<BinOp> comparison_op() const {
        if (!at(Tok::Op)) return std::nullopt;
        const std::string& t = cur().text;
        if (t == "==") return BinOp::Eq;
        if (t == "!=") return BinOp::Ne;
        if (t == "<") return BinOp::Lt;
        if (t == "<=") return BinOp::Le;
        if (t == ">") return BinOp::Gt;
        if (t == ">=") return BinOp::Ge;
        return std::nullopt;
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_additive();
        if (auto op = comparison_op()) {
            int line = cur().line;
            ++pos_;
            ExprPtr rhs = parse_additive();
            if (comparison_op()) throw UnsupportedConstruct(line, "chained comparison");
            return make_bin(*op, lhs, rhs);
        }
        if (at_name("in")) throw UnsupportedConstruct(cur().line, "'in' operator");
        return lhs;
    }

    ExprPtr parse_additive() {
        ExprPtr lhs = parse_multiplicative();
        while (at_op("+") || at_op("-")) {
            BinOp op = cur().text == "+" ? BinOp::Add : BinOp::Sub;
            ++pos_;
            lhs = make_bin(op, lhs, parse_multiplicative());
        }
        return lhs;
    }

    ExprPtr parse_multiplicative() {
        ExprPtr lhs = parse_unary();
        while (at_op("*") || at_op("//") || at_op("/") || at_op("%")) {
            BinOp op = cur().text == "*"    ? BinOp::Mul
                       : cur().text == "//" ? BinOp::FloorDiv
                       : cur().text == "/"  ? BinOp::TrueDiv
                                            : BinOp::Mod;
            ++pos_;
            lhs = make_bin(op, lhs, parse_unary());
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (at_op("-")) {
            ++pos_;
            return make_expr(Expr{UnE{UnOp::Neg, parse_unary()}});
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        if (at_op("**")) {
            ++pos_;
            // right-associative; the exponent may itself be unary.
            return make_bin(BinOp::Pow, base, parse_unary());
        }
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_atom();
        while (true) {
            if (at_op("[")) {
                ++pos_;
                e = parse_subscript_or_slice(e);
                continue;
            }
            if (at_op(".")) {
                ++pos_;
                if (!at(Tok::Name)) throw err("expected method name");
                std::string method = take().text;
                if (!at_op("("))
                    throw UnsupportedConstruct(cur().line, "attribute access without a call");
                e = make_expr(Expr{MethodE{e, method, parse_args()}});
                continue;
            }
            break;
        }
        return e;
    }

    ExprPtr parse_subscript_or_slice(ExprPtr base) {
        ExprPtr lo, hi, step;
        bool is_slice = false;
        if (!at_op(":")) lo = parse_expr();
        if (at_op(":")) {
            is_slice = true;
            ++pos_;
            if (!at_op(":") && !at_op("]")) hi = parse_expr();
            if (at_op(":")) {
                ++pos_;
                if (!at_op("]")) step = parse_expr();
            }
        }
        expect_op("]");
        if (is_slice) return make_expr(Expr{SliceE{base, lo, hi, step}});
        return make_expr(Expr{SubscriptE{base, lo}});
    }

    std::vector<ExprPtr> parse_args() {
        expect_op("(");
        std::vector<ExprPtr> args;
        if (!at_op(")")) {
            while (true) {
                args.push_back(parse_expr());
                if (at_op(",")) { ++pos_; continue; }
                break;
            }
        }
        expect_op(")");
        return args;
    }

    ExprPtr parse_atom() {
        reject_foreign(cur());
        if (at(Tok::Int)) {
            Token t = take();
            return make_const(Literal::make_int(t.ival));
        }
        if (at(Tok::Float)) {
            Token t = take();
            return make_const(Literal::make_float(t.fval));
        }
        if (at(Tok::Str)) {
            Token t = take();
            return make_const(Literal::make_str(t.text));
        }
        if (at_name("True")) { ++pos_; return make_const(Literal::make_bool(true)); }
        if (at_name("False")) { ++pos_; return make_const(Literal::make_bool(false)); }
        if (at(Tok::Name)) {
            if (kKeywords.count(cur().text)) throw err("unexpected keyword '" + cur().text + "'");
            Token t = take();
            if (at_op("(")) return make_expr(Expr{CallE{t.text, parse_args()}});
            return make_var(t.text);
        }
        if (at_op("(")) {
            ++pos_;
            ExprPtr e = parse_expr();
            if (at_op(",")) throw UnsupportedConstruct(cur().line, "tuple expression");
            expect_op(")");
            return e;
        }
        if (at_op("[")) {
            int line = cur().line;
            ++pos_;
            std::vector<ExprPtr> items;
            if (!at_op("]")) {
                while (true) {
                    items.push_back(parse_expr());
                    if (at_name("for")) throw UnsupportedConstruct(line, "comprehension");
                    if (at_op(",")) { ++pos_; continue; }
                    break;
                }
            }
            expect_op("]");
            return make_expr(Expr{ListE{std::move(items)}});
        }
        if (at_op("{")) {
            int line = cur().line;
            ++pos_;
            if (!at_op("}")) throw UnsupportedConstruct(line, "non-empty dict or set literal");
            ++pos_;
            return make_expr(Expr{DictE{}});
        }
        throw err("expected an expression");
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
};

}  // namespace

Program parse(const std::string& source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.parse_program();
}

ExprPtr parse_expression(const std::string& source) {
    Lexer lexer(source);
    Parser parser(lexer.run());
    return parser.parse_single_expr();
}

}  // namespace pyopt

#include "pyopt/printer.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

namespace pyopt {

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    bool neg = std::signbit(v);
    double a = neg ? -v : v;

    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), a, std::chars_format::scientific);
    *res.ptr = '\0';
    // buf holds "d[.ddd]e±XX" with the shortest digit run.
    std::string digits;
    int exp10 = 0;
    {
        const char* p = buf;
        for (; *p && *p != 'e'; ++p)
            if (*p != '.') digits += *p;
        exp10 = std::atoi(p + 1);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

    std::string out;
    if (exp10 >= -4 && exp10 < 16) {
        if (exp10 >= 0) {
            size_t point = static_cast<size_t>(exp10) + 1;
            if (digits.size() <= point) {
                out = digits + std::string(point - digits.size(), '0') + ".0";
            } else {
                out = digits.substr(0, point) + "." + digits.substr(point);
            }
        } else {
            out = "0." + std::string(static_cast<size_t>(-exp10) - 1, '0') + digits;
        }
    } else {
        out = digits.substr(0, 1);
        if (digits.size() > 1) out += "." + digits.substr(1);
        char e[8];
        std::snprintf(e, sizeof(e), "e%+03d", exp10);
        out += e;
    }
    return neg ? "-" + out : out;
}

static std::string quote_string(const std::string& s) {
    bool has_single = s.find('\'') != std::string::npos;
    bool has_double = s.find('"') != std::string::npos;
    char q = (has_single && !has_double) ? '"' : '\'';
    std::string out(1, q);
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            default:
                if (c == q) { out += '\\'; out += c; }
                else out += c;
        }
    }
    out += q;
    return out;
}

std::string format_literal(const Literal& v) {
    switch (v.type) {
        case Literal::Type::Int: return std::to_string(v.i);
        case Literal::Type::Bool: return v.b ? "True" : "False";
        case Literal::Type::Float: return format_float(v.f);
        case Literal::Type::Str: return quote_string(v.s);
    }
    return "?";
}

namespace {

int binop_prec(BinOp op) {
    switch (op) {
        case BinOp::Or: return 1;
        case BinOp::And: return 2;
        case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
        case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
        case BinOp::Add: case BinOp::Sub: return 5;
        case BinOp::Mul: case BinOp::FloorDiv: case BinOp::TrueDiv: case BinOp::Mod: return 6;
        case BinOp::Pow: return 8;
    }
    return 10;
}

int expr_prec(const Expr& e) {
    struct V {
        // Const literals are non-negative numerics by construction
        // (negative values are represented as UnOp Neg).
        int operator()(const ConstE&) const { return 10; }
        int operator()(const VarE&) const { return 10; }
        int operator()(const BinE& b) const { return binop_prec(b.op); }
        int operator()(const UnE& u) const { return u.op == UnOp::Not ? 3 : 7; }
        int operator()(const CallE&) const { return 9; }
        int operator()(const MethodE&) const { return 9; }
        int operator()(const SubscriptE&) const { return 9; }
        int operator()(const SliceE&) const { return 9; }
        int operator()(const ListE&) const { return 10; }
        int operator()(const DictE&) const { return 10; }
    };
    return std::visit(V{}, e.node);
}

void emit_expr(std::string& out, const Expr& e);

void emit_child(std::string& out, const ExprPtr& e, int min_prec) {
    bool parens = expr_prec(*e) < min_prec;
    if (parens) out += '(';
    emit_expr(out, *e);
    if (parens) out += ')';
}

void emit_args(std::string& out, const std::vector<ExprPtr>& args) {
    out += '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        emit_child(out, args[i], 0);
    }
    out += ')';
}

void emit_expr(std::string& out, const Expr& e) {
    struct V {
        std::string& out;
        void operator()(const ConstE& c) const { out += format_literal(c.value); }
        void operator()(const VarE& v) const { out += v.name; }
        void operator()(const BinE& b) const {
            int p = binop_prec(b.op);
            bool right_assoc = b.op == BinOp::Pow;
            emit_child(out, b.lhs, right_assoc ? p + 1 : p);
            out += ' ';
            out += binop_text(b.op);
            out += ' ';
            emit_child(out, b.rhs, right_assoc ? 7 : p + 1);
        }
        void operator()(const UnE& u) const {
            if (u.op == UnOp::Not) {
                out += "not ";
                emit_child(out, u.operand, 3);
            } else {
                out += '-';
                emit_child(out, u.operand, 7);
            }
        }
        void operator()(const CallE& c) const {
            out += c.callee;
            emit_args(out, c.args);
        }
        void operator()(const MethodE& m) const {
            emit_child(out, m.base, 9);
            out += '.';
            out += m.method;
            emit_args(out, m.args);
        }
        void operator()(const SubscriptE& s) const {
            emit_child(out, s.base, 9);
            out += '[';
            emit_child(out, s.index, 0);
            out += ']';
        }
        void operator()(const SliceE& s) const {
            emit_child(out, s.base, 9);
            out += '[';
            if (s.lo) emit_child(out, s.lo, 0);
            out += ':';
            if (s.hi) emit_child(out, s.hi, 0);
            if (s.step) {
                out += ':';
                emit_child(out, s.step, 0);
            }
            out += ']';
        }
        void operator()(const ListE& l) const {
            out += '[';
            for (size_t i = 0; i < l.items.size(); ++i) {
                if (i) out += ", ";
                emit_child(out, l.items[i], 0);
            }
            out += ']';
        }
        void operator()(const DictE&) const { out += "{}"; }
    };
    std::visit(V{out}, e.node);
}

void emit_stmts(std::string& out, const std::vector<Stmt>& body, int depth);

void emit_stmt(std::string& out, const Stmt& s, int depth) {
    std::string pad(static_cast<size_t>(depth) * 4, ' ');
    switch (s.kind) {
        case StmtKind::Assign:
            out += pad + s.target + " = " + print_expr(s.value) + "\n";
            break;
        case StmtKind::SubscriptAssign:
            out += pad + s.target + "[" + print_expr(s.index) + "] = " + print_expr(s.value) + "\n";
            break;
        case StmtKind::ExprStmt:
            out += pad + print_expr(s.value) + "\n";
            break;
        case StmtKind::Return:
            out += pad + (s.value ? "return " + print_expr(s.value) : std::string("return")) + "\n";
            break;
        case StmtKind::Pass:
            out += pad + "pass\n";
            break;
        case StmtKind::While:
            out += pad + "while (" + print_expr(s.value) + "):\n";
            emit_stmts(out, s.body, depth + 1);
            break;
        case StmtKind::For:
            out += pad + "for " + s.target + " in " + print_expr(s.value) + ":\n";
            emit_stmts(out, s.body, depth + 1);
            break;
        case StmtKind::FunDef: {
            out += pad + "def " + s.target + "(";
            for (size_t i = 0; i < s.params.size(); ++i) {
                if (i) out += ", ";
                out += s.params[i];
            }
            out += "):\n";
            emit_stmts(out, s.body, depth + 1);
            break;
        }
        case StmtKind::If: {
            const Stmt* node = &s;
            const char* intro = "if";
            while (true) {
                out += pad + intro + " (" + print_expr(node->value) + "):\n";
                emit_stmts(out, node->body, depth + 1);
                if (node->orelse.empty()) break;
                if (node->orelse.size() == 1 && node->orelse[0].kind == StmtKind::If) {
                    node = &node->orelse[0];
                    intro = "elif";
                    continue;
                }
                out += pad + "else:\n";
                emit_stmts(out, node->orelse, depth + 1);
                break;
            }
            break;
        }
    }
}

void emit_stmts(std::string& out, const std::vector<Stmt>& body, int depth) {
    if (body.empty()) {
        out += std::string(static_cast<size_t>(depth) * 4, ' ') + "pass\n";
        return;
    }
    for (const auto& s : body) emit_stmt(out, s, depth);
}

}  // namespace

std::string print_expr(const Expr& e) {
    std::string out;
    emit_expr(out, e);
    return out;
}

std::string print_expr(const ExprPtr& e) { return e ? print_expr(*e) : std::string(); }

std::string print_program(const Program& p) {
    std::string out;
    emit_stmts(out, p.body, 0);
    return out;
}

std::string stmt_header(const Stmt& s) {
    switch (s.kind) {
        case StmtKind::Assign: return s.target + " = " + print_expr(s.value);
        case StmtKind::SubscriptAssign:
            return s.target + "[" + print_expr(s.index) + "] = " + print_expr(s.value);
        case StmtKind::ExprStmt: return print_expr(s.value);
        case StmtKind::Return: return s.value ? "return " + print_expr(s.value) : "return";
        case StmtKind::Pass: return "pass";
        case StmtKind::While: return "while (" + print_expr(s.value) + "):";
        case StmtKind::For: return "for " + s.target + " in " + print_expr(s.value) + ":";
        case StmtKind::If: return "if (" + print_expr(s.value) + "):";
        case StmtKind::FunDef: {
            std::string h = "def " + s.target + "(";
            for (size_t i = 0; i < s.params.size(); ++i) {
                if (i) h += ", ";
                h += s.params[i];
            }
            return h + "):";
        }
    }
    return "?";
}

}  // namespace pyopt

#include "samp/ast.hpp"

#include <sstream>

namespace samp {

bool Span::contains(const Span& o) const noexcept
{
    auto before = [](std::uint32_t l1, std::uint32_t c1, std::uint32_t l2, std::uint32_t c2) {
        return l1 < l2 || (l1 == l2 && c1 <= c2);
    };
    return before(start_line, start_col, o.start_line, o.start_col)
        && before(o.end_line, o.end_col, end_line, end_col);
}

const char* to_string(BinaryOp op) noexcept
{
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    }
    return "?";
}

const ast::FnDecl* Program::find_function(std::string_view name) const
{
    for (const auto& s : stmts)
        if (auto* fn = std::get_if<ast::FnDecl>(&s->node); fn && fn->name == name)
            return fn;
    return nullptr;
}

std::vector<std::pair<const ast::FnDecl*, Span>> Program::functions() const
{
    std::vector<std::pair<const ast::FnDecl*, Span>> out;
    for (const auto& s : stmts)
        if (auto* fn = std::get_if<ast::FnDecl>(&s->node))
            out.emplace_back(fn, s->span);
    return out;
}

namespace {

struct Dumper {
    std::ostringstream out;

    void span(const Span& s)
    {
        out << '@' << s.start_line << ':' << s.start_col << '-' << s.end_line << ':' << s.end_col;
    }

    void expr(const Expr& e)
    {
        out << '(';
        std::visit([this](const auto& n) { node(n); }, e.node);
        span(e.span);
        out << ')';
    }

    void node(const ast::IntLit& n) { out << "int " << n.value; }
    void node(const ast::FloatLit& n) { out << "float " << n.value; }
    void node(const ast::StrLit& n) { out << "str " << n.value.size() << ':' << n.value; }
    void node(const ast::BoolLit& n) { out << (n.value ? "true" : "false"); }
    void node(const ast::NullLit&) { out << "null"; }
    void node(const ast::ArrayLit& n)
    {
        out << "array";
        for (const auto& e : n.elems) { out << ' '; expr(*e); }
    }
    void node(const ast::RecordLit& n)
    {
        out << "record";
        for (const auto& f : n.fields) { out << ' ' << f.key << '='; expr(*f.value); }
    }
    void node(const ast::Name& n) { out << "name " << n.id; }
    void node(const ast::Index& n) { out << "index "; expr(*n.base); out << ' '; expr(*n.index); }
    void node(const ast::Member& n) { out << "member "; expr(*n.base); out << ' ' << n.field; span(n.field_span); }
    void node(const ast::Call& n)
    {
        out << "call ";
        expr(*n.callee);
        for (const auto& a : n.args) { out << ' '; expr(*a); }
    }
    void node(const ast::Unary& n) { out << (n.op == UnaryOp::Neg ? "neg " : "not "); expr(*n.operand); }
    void node(const ast::Binary& n) { out << to_string(n.op) << ' '; expr(*n.lhs); out << ' '; expr(*n.rhs); }

    void block(const ast::Block& b)
    {
        out << "(block";
        for (const auto& s : b.stmts) { out << ' '; stmt(*s); }
        span(b.span);
        out << ')';
    }

    void stmt(const Stmt& s)
    {
        out << '[';
        std::visit([this](const auto& n) { snode(n); }, s.node);
        span(s.span);
        out << ']';
    }

    void snode(const ast::Let& n) { out << "let " << n.name; span(n.name_span); out << ' '; expr(*n.init); }
    void snode(const ast::Assign& n)
    {
        out << (n.op == ast::AssignOp::Set ? "set " : "add ");
        expr(*n.target);
        out << ' ';
        expr(*n.value);
    }
    void snode(const ast::ExprStmt& n) { out << "expr "; expr(*n.expr); }
    void snode(const ast::If& n)
    {
        out << "if ";
        expr(*n.cond);
        out << ' ';
        block(n.then_block);
        if (n.else_block) { out << " else "; block(*n.else_block); }
    }
    void snode(const ast::While& n) { out << "while "; expr(*n.cond); out << ' '; block(n.body); }
    void snode(const ast::For& n)
    {
        out << "for " << n.var;
        span(n.var_span);
        out << ' ';
        expr(*n.iterable);
        out << ' ';
        block(n.body);
    }
    void snode(const ast::FnDecl& n)
    {
        out << "fn " << n.name << " (";
        for (const auto& p : n.params) { out << p.name; span(p.span); out << ' '; }
        out << ") ";
        block(n.body);
    }
    void snode(const ast::Return& n)
    {
        out << "return";
        if (n.value) { out << ' '; expr(*n.value); }
    }
    void snode(const ast::Print& n) { out << "print "; expr(*n.value); }
};

} // namespace

std::string dump(const Program& program)
{
    Dumper d;
    d.out << "(program";
    for (const auto& s : program.stmts) { d.out << ' '; d.stmt(*s); }
    d.span(program.span);
    d.out << ')';
    return d.out.str();
}

} // namespace samp

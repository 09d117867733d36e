#include "samp/line_vars.hpp"

namespace samp {

const char* to_string(Access a) noexcept
{
    switch (a) {
    case Access::Read: return "read";
    case Access::Write: return "write";
    case Access::ReadWrite: return "readwrite";
    }
    return "?";
}

std::span<const LineVar> LineVarTable::at(std::uint32_t line) const noexcept
{
    if (line >= by_line_.size())
        return {};
    return by_line_[line];
}

std::uint32_t LineVarTable::max_line() const noexcept
{
    for (std::size_t i = by_line_.size(); i-- > 0;)
        if (!by_line_[i].empty())
            return static_cast<std::uint32_t>(i);
    return 0;
}

void LineVarTable::add(std::uint32_t line, std::string_view name, Access access, bool self_field)
{
    if (line >= by_line_.size())
        by_line_.resize(line + 1);
    auto& entries = by_line_[line];
    for (auto& e : entries) {
        if (e.name == name) {
            if (e.access != access)
                e.access = Access::ReadWrite;
            return;
        }
    }
    entries.push_back(LineVar{std::string(name), access, self_field});
}

namespace {

bool is_self_member(const ast::Member& m)
{
    auto* base = std::get_if<ast::Name>(&m.base->node);
    return base && base->id == "self";
}

class Collector {
public:
    LineVarTable table;

    void stmt(const Stmt& s)
    {
        std::visit([this](const auto& n) { visit(n); }, s.node);
    }

private:
    void expr(const Expr& e)
    {
        std::visit([this, &e](const auto& n) { visit(n, e); }, e.node);
    }

    void block(const ast::Block& b)
    {
        for (const auto& s : b.stmts)
            stmt(*s);
    }

    template <class Lit>
    void visit(const Lit&, const Expr&)
    {
    }
    void visit(const ast::ArrayLit& n, const Expr&)
    {
        for (const auto& e : n.elems)
            expr(*e);
    }
    void visit(const ast::RecordLit& n, const Expr&)
    {
        for (const auto& f : n.fields)
            expr(*f.value);
    }
    void visit(const ast::Name& n, const Expr& e) { table.add(e.span.start_line, n.id, Access::Read); }
    void visit(const ast::Index& n, const Expr&)
    {
        expr(*n.base);
        expr(*n.index);
    }
    void visit(const ast::Member& n, const Expr&)
    {
        if (is_self_member(n))
            table.add(n.field_span.start_line, n.field, Access::Read, true);
        else
            expr(*n.base);
    }
    void visit(const ast::Call& n, const Expr&)
    {
        if (!std::holds_alternative<ast::Name>(n.callee->node))
            expr(*n.callee);
        for (const auto& a : n.args)
            expr(*a);
    }
    void visit(const ast::Unary& n, const Expr&) { expr(*n.operand); }
    void visit(const ast::Binary& n, const Expr&)
    {
        expr(*n.lhs);
        expr(*n.rhs);
    }

    void visit(const ast::Let& n)
    {
        expr(*n.init);
        table.add(n.name_span.start_line, n.name, Access::Write);
    }

    // Sub-expressions of the target (indices, non-name bases) are evaluated
    // before the right-hand side; the stored-to variable is noted after it.
    void visit(const ast::Assign& n)
    {
        const Expr* root = n.target.get();
        std::vector<const Expr*> indices;
        bool direct = true;
        for (;;) {
            if (auto* idx = std::get_if<ast::Index>(&root->node)) {
                indices.push_back(idx->index.get());
                root = idx->base.get();
            } else if (auto* mem = std::get_if<ast::Member>(&root->node); mem && !is_self_member(*mem)) {
                root = mem->base.get();
            } else {
                break;
            }
            direct = false;
        }

        auto* self_mem = std::get_if<ast::Member>(&root->node);
        const bool deferred = std::holds_alternative<ast::Name>(root->node) || self_mem;
        if (!deferred)
            expr(*root);
        for (auto it = indices.rbegin(); it != indices.rend(); ++it)
            expr(**it);
        expr(*n.value);
        if (!deferred)
            return;

        const Access access = direct && n.op == ast::AssignOp::Set ? Access::Write : Access::ReadWrite;
        if (auto* name = std::get_if<ast::Name>(&root->node))
            table.add(root->span.start_line, name->id, access);
        else
            table.add(self_mem->field_span.start_line, self_mem->field, access, true);
    }

    void visit(const ast::ExprStmt& n) { expr(*n.expr); }
    void visit(const ast::If& n)
    {
        expr(*n.cond);
        block(n.then_block);
        if (n.else_block)
            block(*n.else_block);
    }
    void visit(const ast::While& n)
    {
        expr(*n.cond);
        block(n.body);
    }
    void visit(const ast::For& n)
    {
        expr(*n.iterable);
        table.add(n.var_span.start_line, n.var, Access::Write);
        block(n.body);
    }
    void visit(const ast::FnDecl& n)
    {
        for (const auto& p : n.params)
            table.add(p.span.start_line, p.name, Access::Write);
        block(n.body);
    }
    void visit(const ast::Return& n)
    {
        if (n.value)
            expr(*n.value);
    }
    void visit(const ast::Print& n) { expr(*n.value); }
};

} // namespace

LineVarTable line_vars(const Program& program)
{
    Collector c;
    for (const auto& s : program.stmts)
        c.stmt(*s);
    return std::move(c.table);
}

} // namespace samp

#include "samp/augment.hpp"

#include <algorithm>

namespace samp {

const char* to_string(AugmentKind k) noexcept
{
    switch (k) {
    case AugmentKind::None: return "none";
    case AugmentKind::Values: return "values";
    case AugmentKind::CheckMark: return "check";
    }
    return "?";
}

namespace {

// Function whose declaration spans `line` (first in source order).
const std::string* function_at(const Program& program, std::uint32_t line)
{
    for (const auto& s : program.stmts)
        if (auto* fn = std::get_if<ast::FnDecl>(&s->node); fn && s->span.covers_line(line))
            return &fn->name;
    return nullptr;
}

} // namespace

std::map<std::uint64_t, std::string> pass_functions(const TraceDb& db, const Program& program, std::string_view file)
{
    std::map<std::uint64_t, std::string> out;
    for (const auto& e : db.events()) {
        if (e.file != file || out.count(e.pass))
            continue;
        if (const std::string* fn = function_at(program, e.line))
            out.emplace(e.pass, *fn);
    }
    return out;
}

Selection select_pass(const TraceDb& db, const Program& program, const SourceFile& file, std::uint32_t cursor_line)
{
    if (is_stale(db, file))
        throw StaleTraceError();

    Selection sel;
    sel.cursor_line = cursor_line;
    const auto owners = pass_functions(db, program, file.path);
    for (const auto& [pass, fn] : owners)
        sel.pass_by_function.emplace(fn, pass);  // map is ascending, so first wins

    const std::string* cursor_fn = function_at(program, cursor_line);
    if (!cursor_fn)
        return sel;
    std::uint32_t fn_start = cursor_line;
    for (const auto& [fn, span] : program.functions())
        if (fn->name == *cursor_fn && span.covers_line(cursor_line))
            fn_start = span.start_line;

    auto covering_in_fn = [&](std::uint32_t line) -> std::optional<std::uint64_t> {
        for (std::uint64_t p : db.passes_covering(file.path, line)) {
            auto it = owners.find(p);
            if (it != owners.end() && it->second == *cursor_fn)
                return p;
        }
        return std::nullopt;
    };
    for (std::uint32_t line = cursor_line; line >= fn_start && line > 0; --line) {
        if (auto p = covering_in_fn(line)) {
            sel.pass_by_function[*cursor_fn] = *p;
            break;
        }
    }
    return sel;
}

std::vector<Augmentation> augment(const TraceDb& db, const Program& program, const SourceFile& file,
    const LineVarTable& vars, const Selection& selection)
{
    std::vector<Augmentation> out(file.line_count);
    for (std::uint32_t i = 0; i < file.line_count; ++i)
        out[i].line = i + 1;

    for (const auto& [fn, pass] : selection.pass_by_function) {
        const auto recs = db.records_of(pass);
        for (const LineEvent* e : recs.events) {
            if (e->file != file.path || e->line == 0 || e->line > file.line_count)
                continue;
            const std::string* owner = function_at(program, e->line);
            if (!owner || *owner != fn)
                continue;
            Augmentation& a = out[e->line - 1];
            std::vector<const VarRecord*> mine;
            for (const VarRecord* r : recs.vars)
                if (r->seq == e->seq)
                    mine.push_back(r);
            const auto order = vars.at(e->line);
            auto rank = [&](const VarRecord* r) {
                auto it = std::find_if(order.begin(), order.end(), [&](const LineVar& v) { return v.name == r->name; });
                return static_cast<std::size_t>(it - order.begin());
            };
            std::stable_sort(mine.begin(), mine.end(),
                [&](const VarRecord* x, const VarRecord* y) { return rank(x) < rank(y); });
            a.kind = mine.empty() ? AugmentKind::CheckMark : AugmentKind::Values;
            a.entries.clear();
            for (const VarRecord* r : mine)
                a.entries.emplace_back(r->name, r->value);
        }
    }
    return out;
}

std::string emit_annotated_source(const SourceFile& file, std::span<const Augmentation> augmentations)
{
    const auto lines = file.lines();
    std::string out;
    out.reserve(file.content.size() + augmentations.size() * 16);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0)
            out += '\n';
        out += lines[i];
        if (i >= augmentations.size())
            continue;
        const Augmentation& a = augmentations[i];
        if (a.kind == AugmentKind::CheckMark) {
            out += "  # ✓";
        } else if (a.kind == AugmentKind::Values) {
            out += "  #";
            for (const auto& [name, value] : a.entries) {
                out += ' ';
                out += name;
                out += ": ";
                out += value;
                out += ' ';
            }
            out.pop_back();
        }
    }
    return out;
}

} // namespace samp

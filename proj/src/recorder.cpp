#include "samp/recorder.hpp"

namespace samp {

std::int64_t hits_field(HitLimit limit) noexcept
{
    return limit ? static_cast<std::int64_t>(*limit) : kUnlimitedHits;
}

std::vector<std::pair<std::string, Value>> variables_in_scope(const Frame& frame, std::span<const LineVar> names)
{
    std::vector<std::pair<std::string, Value>> out;
    out.reserve(names.size());
    for (const auto& v : names) {
        if (v.self_field) {
            const Value* self = frame.lookup("self");
            if (!self || !self->is(Kind::Record))
                continue;
            if (const Value* field = self->as_record()->find(v.name))
                out.emplace_back(v.name, *field);
            continue;
        }
        if (const Value* value = frame.lookup(v.name))
            out.emplace_back(v.name, *value);
    }
    return out;
}

Recorder::Recorder(TraceSink& sink, HitLimit hits_per_line, RenderOptions render)
    : sink_(sink)
    , limit_(hits_per_line)
    , render_(render)
{
    render_.validate();
}

void Recorder::add_file(const SourceFile& file, LineVarTable vars)
{
    FileState st{&file, std::move(vars), {}};
    st.hits.assign(static_cast<std::size_t>(file.line_count) + 1, 0);
    files_.push_back(std::move(st));
    last_ = nullptr;
}

Recorder::FileState* Recorder::state_for(const SourceFile& file)
{
    if (last_ && last_->file == &file)
        return last_;
    for (auto& st : files_) {
        if (st.file == &file || st.file->path == file.path) {
            last_ = &st;
            return last_;
        }
    }
    return nullptr;
}

void Recorder::on_transition(const LineTransition& t)
{
    FileState* st = state_for(t.file);
    const std::uint32_t line = t.current_line;
    if (st && line < st->hits.size()) {
        std::uint32_t& hits = st->hits[line];
        if (!limit_ || hits < *limit_) {
            ++hits;
            if (t.frame.pass_id == 0)
                t.frame.pass_id = pass_counter_++;
            const std::uint64_t pass = t.frame.pass_id;
            const std::uint64_t seq = seq_++;
            sink_.append(LineEvent{seq, pass, t.file.path, line});
            for (auto& [name, value] : variables_in_scope(t.frame, st->vars.at(line))) {
                sink_.append(VarRecord{seq, pass, line, name, render(value, render_)});
                ++vars_;
            }
        }
    }
    if (t.is_backward())
        t.frame.pass_id = 0;
}

} // namespace samp

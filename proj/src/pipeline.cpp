#include "samp/pipeline.hpp"

#include "samp/parser.hpp"

#include <chrono>
#include <sstream>

namespace samp {

TraceHeader make_header(const SourceFile& file, HitLimit hits)
{
    TraceHeader h;
    h.hits_per_line = hits_field(hits);
    h.files.push_back({file.path, file.hash_string(), file.line_count});
    h.created = utc_timestamp();
    return h;
}

namespace {

RunSummary run_recorded(const SourceFile& file, const Program& program, TraceSink& sink, HitLimit hits,
    std::ostream* program_out)
{
    Recorder recorder(sink, hits);
    recorder.add_file(file, line_vars(program));
    const auto start = std::chrono::steady_clock::now();
    execute(program, file, &recorder, program_out);
    RunSummary s;
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    s.passes = recorder.passes_assigned();
    s.events = recorder.events_recorded();
    s.vars = recorder.vars_recorded();
    return s;
}

} // namespace

RunSummary record_to_file(const SourceFile& file, const std::string& trace_path, HitLimit hits,
    std::ostream* program_out)
{
    const Program program = parse(file);
    auto writer = TraceWriter::open(trace_path, make_header(file, hits));
    RunSummary s;
    try {
        s = run_recorded(file, program, writer, hits, program_out);
    } catch (...) {
        writer.close();
        throw;
    }
    writer.close();
    return s;
}

TraceDb record_in_memory(const SourceFile& file, HitLimit hits, std::ostream* program_out)
{
    const Program program = parse(file);
    MemorySink sink;
    run_recorded(file, program, sink, hits, program_out);
    return TraceDb(make_header(file, hits), std::move(sink.events), std::move(sink.vars));
}

std::string annotate(const TraceDb& db, const SourceFile& file, std::uint32_t cursor_line)
{
    const Program program = parse(file);
    const Selection sel = select_pass(db, program, file, cursor_line);
    const auto augs = augment(db, program, file, line_vars(program), sel);
    return emit_annotated_source(file, augs);
}

} // namespace samp

#include <cstdlib>
#include <filesystem>

namespace samp {

std::string default_trace_path(const std::string& program_path)
{
    namespace fs = std::filesystem;
    const fs::path program(program_path);
    fs::path dir = program.parent_path();
    if (const char* env = std::getenv("SAMP_TRACE_DIR"); env && *env)
        dir = env;
    return (dir / program.stem()).string() + ".samptrace";
}

} // namespace samp

#pragma once

#include "samp/augment.hpp"
#include "samp/interp.hpp"
#include "samp/recorder.hpp"
#include "samp/trace.hpp"

#include <iosfwd>
#include <string>

namespace samp {

struct RunSummary {
    std::uint64_t passes = 0;
    std::uint64_t events = 0;
    std::uint64_t vars = 0;
    double seconds = 0;
};

TraceHeader make_header(const SourceFile& file, HitLimit hits);

/// Parses, runs with the recorder attached and writes `trace_path`.
/// SyntaxError is thrown before the trace is created. On RuntimeError the
/// trace is closed with everything recorded so far, then the error rethrown.
RunSummary record_to_file(const SourceFile& file, const std::string& trace_path, HitLimit hits,
    std::ostream* program_out = nullptr);

/// Same as record_to_file, keeping the trace in memory.
TraceDb record_in_memory(const SourceFile& file, HitLimit hits, std::ostream* program_out = nullptr);

/// Annotated source for a cursor line. Throws StaleTraceError.
std::string annotate(const TraceDb& db, const SourceFile& file, std::uint32_t cursor_line);

} // namespace samp

namespace samp {

/// `<dir>/<stem>.samptrace` where dir is $SAMP_TRACE_DIR when set, else the
/// program's own directory.
std::string default_trace_path(const std::string& program_path);

} // namespace samp

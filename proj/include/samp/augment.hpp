#pragma once

#include "samp/ast.hpp"
#include "samp/line_vars.hpp"
#include "samp/source.hpp"
#include "samp/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace samp {

class StaleTraceError : public std::runtime_error {
public:
    StaleTraceError() : std::runtime_error("trace invalidated by edit") {}
};

enum class AugmentKind { None, Values, CheckMark };

const char* to_string(AugmentKind k) noexcept;

struct Augmentation {
    std::uint32_t line = 0;
    AugmentKind kind = AugmentKind::None;
    std::vector<std::pair<std::string, std::string>> entries;

    friend bool operator==(const Augmentation&, const Augmentation&) = default;
};

struct Selection {
    std::uint32_t cursor_line = 0;
    std::map<std::string, std::uint64_t> pass_by_function;
};

/// Which function each recorded pass of `file` belongs to, by the line of
/// its first event.
std::map<std::uint64_t, std::string> pass_functions(const TraceDb& db, const Program& program, std::string_view file);

/// Chooses one pass per function. For the function around the cursor: the
/// lowest pass covering the cursor line, else the lowest pass covering the
/// nearest covered line above it in that function, else the function's
/// lowest pass. Every other function gets its lowest pass.
/// Throws StaleTraceError if `file` changed since recording.
Selection select_pass(const TraceDb& db, const Program& program, const SourceFile& file, std::uint32_t cursor_line);

/// One entry per source line (1..line_count).
std::vector<Augmentation> augment(const TraceDb& db, const Program& program, const SourceFile& file,
    const LineVarTable& vars, const Selection& selection);

/// Source lines with `  # name: value  name: value` or `  # ✓` appended.
/// Lines are joined with '\n', so unannotated text round-trips.
std::string emit_annotated_source(const SourceFile& file, std::span<const Augmentation> augmentations);

} // namespace samp

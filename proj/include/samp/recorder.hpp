#pragma once

#include "samp/interp.hpp"
#include "samp/line_vars.hpp"
#include "samp/render.hpp"
#include "samp/trace.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace samp {

/// Hit limit per line; std::nullopt means unlimited.
using HitLimit = std::optional<std::uint32_t>;

/// Header "hits" value for a limit (-1 when unlimited).
std::int64_t hits_field(HitLimit limit) noexcept;

/// Names from `names` bound in the frame at this moment (locals, then
/// globals; `self.x` entries read field x of the bound `self` record), in
/// the given order. Unbound names are skipped.
std::vector<std::pair<std::string, Value>> variables_in_scope(const Frame& frame, std::span<const LineVar> names);

/// Hit-limited, pass-tagged line recorder.
///
/// On every line change of a frame:
///   if hits[file, line] < limit: count the hit, give the frame a pass id
///   from the global counter if it has none, then save the line event and
///   the end-of-line values of the line's variables under that pass id.
///   A jump to a smaller line number resets the frame's pass id to 0.
/// Function entry starts with pass id 0 (fresh frame).
class Recorder : public LineHook {
public:
    Recorder(TraceSink& sink, HitLimit hits_per_line, RenderOptions render = {});

    /// Registers a source file and its variable table. Transitions from
    /// unregistered files are ignored.
    void add_file(const SourceFile& file, LineVarTable vars);

    void on_transition(const LineTransition& t) override;

    /// Next id the counter will hand out (starts at 1).
    std::uint64_t pass_counter() const noexcept { return pass_counter_; }
    std::uint64_t passes_assigned() const noexcept { return pass_counter_ - 1; }
    std::uint64_t events_recorded() const noexcept { return seq_; }
    std::uint64_t vars_recorded() const noexcept { return vars_; }
    HitLimit hits_per_line() const noexcept { return limit_; }

private:
    struct FileState {
        const SourceFile* file;
        LineVarTable vars;
        std::vector<std::uint32_t> hits;  // indexed by line
    };

    FileState* state_for(const SourceFile& file);

    TraceSink& sink_;
    HitLimit limit_;
    RenderOptions render_;
    std::vector<FileState> files_;
    FileState* last_ = nullptr;
    std::uint64_t pass_counter_ = 1;
    std::uint64_t seq_ = 0;
    std::uint64_t vars_ = 0;
};

} // namespace samp

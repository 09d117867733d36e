#pragma once

#include "samp/ast.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace samp {

enum class Access : std::uint8_t { Read, Write, ReadWrite };

const char* to_string(Access a) noexcept;

struct LineVar {
    std::string name;
    Access access = Access::Read;
    /// Came from `self.name`: the value is read from the `self` record's
    /// field rather than from a variable.
    bool self_field = false;

    friend bool operator==(const LineVar&, const LineVar&) = default;
};

/// Per physical line, the variables read or written there. Each name appears
/// once per line; order follows evaluation, with an assignment's target
/// placed after its right-hand side.
class LineVarTable {
public:
    std::span<const LineVar> at(std::uint32_t line) const noexcept;
    /// Highest line with at least one entry (0 when empty).
    std::uint32_t max_line() const noexcept;

    /// Adds an occurrence, merging access with an earlier same-named entry.
    void add(std::uint32_t line, std::string_view name, Access access, bool self_field = false);

private:
    std::vector<std::vector<LineVar>> by_line_;
};

/// Builds the table for a parsed program. Function names, record keys and
/// member field names (other than `self.field`) are excluded; a member access
/// `a.b` contributes the base `a`. Declarations and parameters count as writes.
LineVarTable line_vars(const Program& program);

} // namespace samp

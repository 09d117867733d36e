#pragma once

#include "samp/value.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace samp {

struct RenderOptions {
    std::size_t max_len = 60;   // in code points; must be >= 8
    std::size_t max_depth = 2;  // containers nested this deep render as `…`
    std::size_t max_elems = 8;  // elements/fields shown per container

    /// Throws std::invalid_argument when max_len < 8 or max_elems == 0.
    void validate() const;
};

inline constexpr std::string_view kEllipsis = "…";

/// Short single-line representation used in augmentation labels.
///
/// Strings are double-quoted and escaped, arrays and records use braces
/// (`{1, 2}`, `{name: v}`), and the whole result is cut to max_len code
/// points with a trailing `…` (kept inside the quotes when the cut lands in
/// a string). Cyclic containers render as `…` at the repeated node.
std::string render(const Value& v, const RenderOptions& opts = {});

/// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t display_length(std::string_view utf8) noexcept;

} // namespace samp

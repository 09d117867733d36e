#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace samp {

/// 64-bit FNV-1a over raw bytes. Stable across platforms and runs.
std::uint64_t content_hash(std::string_view bytes) noexcept;

/// Renders a hash as 16 lowercase hex digits (the trace file form).
std::string hash_hex(std::uint64_t hash);

struct SourceFile {
    std::string path;
    std::string content;
    std::uint64_t hash = 0;
    std::uint32_t line_count = 0;

    static SourceFile from_string(std::string path, std::string content);

    /// Reads the file in binary mode. Throws std::runtime_error naming the path.
    static SourceFile load(const std::string& path);

    std::string hash_string() const { return hash_hex(hash); }

    /// Physical lines split on '\n' with a trailing '\r' stripped.
    /// Size equals line_count.
    std::vector<std::string_view> lines() const;
};

} // namespace samp

#include "samp/source.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace samp {

std::uint64_t content_hash(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

SourceFile SourceFile::from_string(std::string path, std::string content)
{
    SourceFile f;
    f.path = std::move(path);
    f.content = std::move(content);
    f.hash = content_hash(f.content);
    f.line_count = f.content.empty()
        ? 0
        : 1 + static_cast<std::uint32_t>(std::count(f.content.begin(), f.content.end(), '\n'));
    return f;
}

SourceFile SourceFile::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(path, ss.str());
}

std::vector<std::string_view> SourceFile::lines() const
{
    std::vector<std::string_view> out;
    if (content.empty())
        return out;
    std::string_view rest = content;
    for (;;) {
        auto nl = rest.find('\n');
        auto line = rest.substr(0, nl);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
        if (nl == std::string_view::npos)
            break;
        rest.remove_prefix(nl + 1);
    }
    return out;
}

} // namespace samp

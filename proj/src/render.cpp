#include "samp/render.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace samp {

void RenderOptions::validate() const
{
    if (max_len < 8)
        throw std::invalid_argument("RenderOptions.max_len must be at least 8");
    if (max_elems == 0)
        throw std::invalid_argument("RenderOptions.max_elems must be positive");
}

std::size_t display_length(std::string_view utf8) noexcept
{
    std::size_t n = 0;
    for (unsigned char c : utf8)
        if ((c & 0xC0) != 0x80)
            ++n;
    return n;
}

namespace {

class Builder {
public:
    explicit Builder(const RenderOptions& opts) : opts_(opts) {}

    bool full() const { return cps_ > opts_.max_len; }

    void put(std::string_view s)
    {
        if (full())
            return;
        out_ += s;
        cps_ += display_length(s);
    }

    void value(const Value& v, std::size_t depth)
    {
        if (full())
            return;
        switch (v.kind()) {
        case Kind::Null: put("null"); break;
        case Kind::Bool: put(v.as_bool() ? "true" : "false"); break;
        case Kind::Int: {
            char buf[24];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.as_int());
            put(std::string_view(buf, static_cast<std::size_t>(end - buf)));
            break;
        }
        case Kind::Float: put(format_float(v.as_float())); break;
        case Kind::Str: quoted(v.as_str()); break;
        case Kind::Func:
            put("<fn ");
            put(v.as_func().name);
            put(">");
            break;
        case Kind::Array: {
            const ArrayObj* arr = v.as_array().get();
            if (!enter(arr, depth))
                return;
            put("{");
            for (std::size_t i = 0; i < arr->elems.size() && !full(); ++i) {
                if (i > 0)
                    put(", ");
                if (i == opts_.max_elems) {
                    put(kEllipsis);
                    break;
                }
                value(arr->elems[i], depth + 1);
            }
            put("}");
            path_.pop_back();
            break;
        }
        case Kind::Record: {
            const RecordObj* rec = v.as_record().get();
            if (!enter(rec, depth))
                return;
            put("{");
            for (std::size_t i = 0; i < rec->fields.size() && !full(); ++i) {
                if (i > 0)
                    put(", ");
                if (i == opts_.max_elems) {
                    put(kEllipsis);
                    break;
                }
                put(rec->fields[i].first);
                put(": ");
                value(rec->fields[i].second, depth + 1);
            }
            put("}");
            path_.pop_back();
            break;
        }
        }
    }

    std::string finish() &&;

private:
    const RenderOptions& opts_;
    std::string out_;
    std::size_t cps_ = 0;
    std::vector<const void*> path_;

    bool enter(const void* node, std::size_t depth)
    {
        bool cyclic = false;
        for (const void* p : path_)
            cyclic = cyclic || p == node;
        if (depth >= opts_.max_depth || cyclic) {
            put(kEllipsis);
            return false;
        }
        path_.push_back(node);
        return true;
    }

    void quoted(const std::string& s)
    {
        put("\"");
        for (char c : s) {
            if (full())
                return;
            switch (c) {
            case '"': put("\\\""); break;
            case '\\': put("\\\\"); break;
            case '\n': put("\\n"); break;
            case '\t': put("\\t"); break;
            case '\r': put("\\r"); break;
            default:
                if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
                    put(buf);
                } else {
                    out_ += c;
                    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80)
                        ++cps_;
                }
            }
        }
        put("\"");
    }

    static std::string format_float(double d)
    {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
        std::string s(buf, static_cast<std::size_t>(end - buf));
        if (s.find_first_of(".eEna") == std::string::npos)
            s += ".0";
        return s;
    }
};

std::string Builder::finish() &&
{
    if (cps_ <= opts_.max_len)
        return std::move(out_);

    // State at every code point boundary: inside an open string literal,
    // and in the middle of an escape sequence.
    struct State {
        std::size_t byte;
        bool in_str;
        bool mid_escape;
    };
    std::vector<State> states;
    states.reserve(cps_ + 1);
    bool in_str = false;
    int escape_left = 0;
    for (std::size_t i = 0; i < out_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(out_[i]);
        if ((c & 0xC0) == 0x80)
            continue;
        states.push_back({i, in_str, escape_left > 0});
        if (escape_left > 0) {
            if (escape_left == 5 && c != 'u')
                escape_left = 0;  // two-char escape like \n
            else
                --escape_left;
        } else if (in_str && c == '\\') {
            escape_left = 5;  // long enough for \uXXXX
        } else if (c == '"') {
            in_str = !in_str;
        }
    }
    states.push_back({out_.size(), in_str, false});

    auto settle = [&](std::size_t cut) {
        while (cut > 0 && states[cut].mid_escape)
            --cut;
        return cut;
    };
    std::size_t cut = settle(opts_.max_len - 1);
    if (states[cut].in_str)
        cut = settle(opts_.max_len - 2);
    std::string result = out_.substr(0, states[cut].byte);
    result += kEllipsis;
    if (states[cut].in_str)
        result += '"';
    return result;
}

} // namespace

std::string render(const Value& v, const RenderOptions& opts)
{
    opts.validate();
    Builder b(opts);
    b.value(v, 0);
    return std::move(b).finish();
}

} // namespace samp

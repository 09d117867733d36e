#include "samp/trace.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <set>
#include <sstream>

namespace samp {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const TraceFileEntry* TraceHeader::find_file(std::string_view path) const
{
    for (const auto& f : files)
        if (f.path == path)
            return &f;
    std::error_code ec;
    const auto wanted = fs::weakly_canonical(fs::path(path), ec);
    if (!ec) {
        for (const auto& f : files) {
            std::error_code ec2;
            if (fs::weakly_canonical(fs::path(f.path), ec2) == wanted && !ec2)
                return &f;
        }
    }
    return nullptr;
}

std::string header_line(const TraceHeader& h)
{
    ojson files = ojson::array();
    for (const auto& f : h.files)
        files.push_back(ojson{{"path", f.path}, {"hash", f.hash}, {"lines", f.lines}});
    ojson j{{"t", "hdr"}, {"v", h.version}, {"hits", h.hits_per_line}, {"files", std::move(files)},
        {"created", h.created}};
    return j.dump();
}

std::string record_line(const LineEvent& e)
{
    return ojson{{"t", "line"}, {"seq", e.seq}, {"pass", e.pass}, {"file", e.file}, {"ln", e.line}}.dump();
}

std::string record_line(const VarRecord& r)
{
    return ojson{{"t", "var"}, {"seq", r.seq}, {"pass", r.pass}, {"ln", r.line}, {"name", r.name}, {"val", r.value}}
        .dump();
}

TraceWriter TraceWriter::open(const std::string& path, const TraceHeader& header)
{
    TraceWriter w(path);
    w.out_.open(path, std::ios::binary | std::ios::trunc);
    if (!w.out_)
        throw TraceError("cannot open trace file '" + path + "' for writing");
    w.write_line(header_line(header));
    return w;
}

TraceWriter::~TraceWriter()
{
    if (out_.is_open())
        out_.close();
}

void TraceWriter::write_line(const std::string& line)
{
    if (!out_.is_open())
        throw TraceError("handle closed");
    out_ << line << '\n';
    if (!out_)
        throw TraceError("write to trace file '" + path_ + "' failed");
}

void TraceWriter::append(const LineEvent& e) { write_line(record_line(e)); }
void TraceWriter::append(const VarRecord& r) { write_line(record_line(r)); }

void TraceWriter::close()
{
    if (!out_.is_open())
        return;
    out_.flush();
    const bool ok = static_cast<bool>(out_);
    out_.close();
    if (!ok)
        throw TraceError("flushing trace file '" + path_ + "' failed");
}

TraceDb::TraceDb(TraceHeader header, std::vector<LineEvent> events, std::vector<VarRecord> vars)
    : header_(std::move(header))
    , events_(std::move(events))
    , vars_(std::move(vars))
{
    for (std::size_t i = 0; i < events_.size(); ++i)
        by_pass_[events_[i].pass].first.push_back(i);
    for (std::size_t i = 0; i < vars_.size(); ++i)
        by_pass_[vars_[i].pass].second.push_back(i);
}

std::vector<std::uint64_t> TraceDb::passes_covering(std::string_view file, std::uint32_t line) const
{
    std::vector<std::uint64_t> out;
    for (const auto& e : events_)
        if (e.line == line && e.file == file)
            out.push_back(e.pass);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TraceDb::PassRecords TraceDb::records_of(std::uint64_t pass) const
{
    PassRecords out;
    auto it = by_pass_.find(pass);
    if (it == by_pass_.end())
        return out;
    for (std::size_t i : it->second.first)
        out.events.push_back(&events_[i]);
    for (std::size_t i : it->second.second)
        out.vars.push_back(&vars_[i]);
    return out;
}

std::vector<std::uint64_t> TraceDb::passes() const
{
    std::vector<std::uint64_t> out;
    out.reserve(by_pass_.size());
    for (const auto& [p, _] : by_pass_)
        out.push_back(p);
    return out;
}

namespace {

struct LineParser {
    std::size_t lineno;

    [[noreturn]] void bad(const std::string& what) const
    {
        throw TraceError("trace line " + std::to_string(lineno) + ": " + what);
    }

    const ojson& field(const ojson& j, const char* key) const
    {
        auto it = j.find(key);
        if (it == j.end())
            bad(std::string("missing field '") + key + "'");
        return *it;
    }

    std::uint64_t uint(const ojson& j, const char* key) const
    {
        const auto& v = field(j, key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            bad(std::string("field '") + key + "' must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string str(const ojson& j, const char* key) const
    {
        const auto& v = field(j, key);
        if (!v.is_string())
            bad(std::string("field '") + key + "' must be a string");
        return v.get<std::string>();
    }

    std::uint32_t line_no(const ojson& j, const char* key) const
    {
        const auto v = uint(j, key);
        if (v == 0 || v > 0xFFFFFFFFull)
            bad(std::string("field '") + key + "' out of range");
        return static_cast<std::uint32_t>(v);
    }
};

bool is_hex16(const std::string& s)
{
    return s.size() == 16
        && std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

} // namespace

TraceDb parse_trace(std::istream& in)
{
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    // A trailing fragment without '\n' is a torn write.
    if (auto last_nl = content.rfind('\n'); last_nl == std::string::npos)
        content.clear();
    else
        content.resize(last_nl + 1);

    TraceHeader header;
    std::vector<LineEvent> events;
    std::vector<VarRecord> vars;
    bool have_header = false;
    std::map<std::uint64_t, std::uint32_t> last_line_of_pass;
    std::set<std::string> names_of_event;

    std::istringstream lines(content);
    std::string text;
    std::size_t lineno = 0;
    while (std::getline(lines, text)) {
        ++lineno;
        LineParser p{lineno};
        ojson j;
        try {
            j = ojson::parse(text);
        } catch (const nlohmann::json::parse_error&) {
            p.bad("malformed record");
        }
        if (!j.is_object())
            p.bad("malformed record");
        const std::string kind = p.str(j, "t");

        if (!have_header) {
            if (kind != "hdr")
                p.bad("expected header record");
            const auto& v = p.field(j, "v");
            if (!v.is_number_integer())
                p.bad("field 'v' must be an integer");
            header.version = v.get<int>();
            if (header.version != kTraceFormatVersion)
                throw TraceError("unsupported trace version " + std::to_string(header.version));
            const auto& hits = p.field(j, "hits");
            if (!hits.is_number_integer() || hits.get<std::int64_t>() < kUnlimitedHits)
                p.bad("field 'hits' must be an integer >= -1");
            header.hits_per_line = hits.get<std::int64_t>();
            const auto& files = p.field(j, "files");
            if (!files.is_array())
                p.bad("field 'files' must be an array");
            for (const auto& f : files) {
                if (!f.is_object())
                    p.bad("malformed file entry");
                TraceFileEntry entry{p.str(f, "path"), p.str(f, "hash"), 0};
                const auto lines_count = p.uint(f, "lines");
                if (lines_count > 0xFFFFFFFFull)
                    p.bad("field 'lines' out of range");
                entry.lines = static_cast<std::uint32_t>(lines_count);
                if (!is_hex16(entry.hash))
                    p.bad("file hash must be 16 lowercase hex digits");
                header.files.push_back(std::move(entry));
            }
            header.created = p.str(j, "created");
            have_header = true;
            continue;
        }

        if (kind == "line") {
            LineEvent e{p.uint(j, "seq"), p.uint(j, "pass"), p.str(j, "file"), p.line_no(j, "ln")};
            if (e.pass == 0)
                p.bad("pass id must be positive");
            if (!events.empty() && e.seq <= events.back().seq)
                p.bad("seq must increase");
            auto it = std::find_if(header.files.begin(), header.files.end(),
                [&](const TraceFileEntry& f) { return f.path == e.file; });
            if (it == header.files.end())
                p.bad("file '" + e.file + "' not listed in header");
            if (e.line > it->lines)
                p.bad("line " + std::to_string(e.line) + " beyond end of '" + e.file + "'");
            auto [pos, fresh] = last_line_of_pass.emplace(e.pass, e.line);
            if (!fresh) {
                if (e.line <= pos->second)
                    p.bad("pass " + std::to_string(e.pass) + " does not move forward");
                pos->second = e.line;
            }
            names_of_event.clear();
            events.push_back(std::move(e));
        } else if (kind == "var") {
            VarRecord r{p.uint(j, "seq"), p.uint(j, "pass"), p.line_no(j, "ln"), p.str(j, "name"), p.str(j, "val")};
            if (events.empty() || events.back().seq != r.seq)
                p.bad("variable record does not follow its line event");
            if (events.back().pass != r.pass || events.back().line != r.line)
                p.bad("variable record disagrees with its line event");
            if (!names_of_event.insert(r.name).second)
                p.bad("duplicate variable '" + r.name + "' in one line event");
            vars.push_back(std::move(r));
        } else {
            p.bad("unknown record type '" + kind + "'");
        }
    }
    if (!have_header)
        throw TraceError("trace has no header");
    return TraceDb(std::move(header), std::move(events), std::move(vars));
}

TraceDb load_trace(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw TraceError("cannot open trace file '" + path + "'");
    return parse_trace(in);
}

void write_trace(const std::string& path, const TraceDb& db)
{
    auto w = TraceWriter::open(path, db.header());
    std::size_t v = 0;
    const auto& vars = db.vars();
    for (const auto& e : db.events()) {
        w.append(e);
        while (v < vars.size() && vars[v].seq == e.seq)
            w.append(vars[v++]);
    }
    w.close();
}

bool is_stale(const TraceDb& db, const SourceFile& file)
{
    const TraceFileEntry* entry = db.header().find_file(file.path);
    if (!entry)
        throw TraceError("file '" + file.path + "' is not part of this trace");
    return entry->hash != file.hash_string();
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace samp

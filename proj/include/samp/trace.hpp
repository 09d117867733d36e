#pragma once

#include "samp/source.hpp"

#include <cstdint>
#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace samp {

inline constexpr int kTraceFormatVersion = 1;
inline constexpr std::int64_t kUnlimitedHits = -1;

struct TraceFileEntry {
    std::string path;
    std::string hash;  // 16 lowercase hex digits
    std::uint32_t lines = 0;

    friend bool operator==(const TraceFileEntry&, const TraceFileEntry&) = default;
};

struct TraceHeader {
    int version = kTraceFormatVersion;
    std::int64_t hits_per_line = 1;  // kUnlimitedHits for no limit
    std::vector<TraceFileEntry> files;
    std::string created;

    const TraceFileEntry* find_file(std::string_view path) const;

    friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct LineEvent {
    std::uint64_t seq = 0;
    std::uint64_t pass = 0;
    std::string file;
    std::uint32_t line = 0;

    friend bool operator==(const LineEvent&, const LineEvent&) = default;
};

struct VarRecord {
    std::uint64_t seq = 0;
    std::uint64_t pass = 0;
    std::uint32_t line = 0;
    std::string name;
    std::string value;

    friend bool operator==(const VarRecord&, const VarRecord&) = default;
};

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Destination for recorded data.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void append(const LineEvent& e) = 0;
    virtual void append(const VarRecord& r) = 0;
};

/// Keeps everything in memory; used by tests and the benchmark.
class MemorySink : public TraceSink {
public:
    std::vector<LineEvent> events;
    std::vector<VarRecord> vars;

    void append(const LineEvent& e) override { events.push_back(e); }
    void append(const VarRecord& r) override { vars.push_back(r); }
};

/// Line-delimited JSON writer: a header line, then one line per record.
class TraceWriter : public TraceSink {
public:
    /// Creates/truncates `path` and writes the header. Throws TraceError.
    static TraceWriter open(const std::string& path, const TraceHeader& header);

    TraceWriter(TraceWriter&&) noexcept = default;
    TraceWriter& operator=(TraceWriter&&) noexcept = default;
    ~TraceWriter() override;

    void append(const LineEvent& e) override;
    void append(const VarRecord& r) override;
    /// Flushes and closes; later appends throw TraceError("handle closed").
    void close();
    bool is_open() const noexcept { return out_.is_open(); }

private:
    explicit TraceWriter(std::string path) : path_(std::move(path)) {}
    void write_line(const std::string& line);

    std::string path_;
    std::ofstream out_;
};

std::string header_line(const TraceHeader& h);
std::string record_line(const LineEvent& e);
std::string record_line(const VarRecord& r);

/// A loaded trace. Immutable after construction; safe for concurrent readers.
class TraceDb {
public:
    TraceDb() = default;
    TraceDb(TraceHeader header, std::vector<LineEvent> events, std::vector<VarRecord> vars);

    const TraceHeader& header() const noexcept { return header_; }
    const std::vector<LineEvent>& events() const noexcept { return events_; }
    const std::vector<VarRecord>& vars() const noexcept { return vars_; }

    /// Passes with a line event at (file, line), ascending.
    std::vector<std::uint64_t> passes_covering(std::string_view file, std::uint32_t line) const;

    struct PassRecords {
        std::vector<const LineEvent*> events;
        std::vector<const VarRecord*> vars;
    };
    /// Events and variable records of one pass, in seq order.
    PassRecords records_of(std::uint64_t pass) const;

    /// All pass ids present, ascending.
    std::vector<std::uint64_t> passes() const;

    friend bool operator==(const TraceDb& a, const TraceDb& b)
    {
        return a.header_ == b.header_ && a.events_ == b.events_ && a.vars_ == b.vars_;
    }

private:
    TraceHeader header_;
    std::vector<LineEvent> events_;
    std::vector<VarRecord> vars_;
    std::map<std::uint64_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_pass_;
};

/// Parses and validates a trace. A final line without its terminating newline
/// is treated as a torn write and ignored; any other malformed line rejects
/// the whole file with a TraceError naming the line number.
TraceDb parse_trace(std::istream& in);
TraceDb load_trace(const std::string& path);
void write_trace(const std::string& path, const TraceDb& db);

/// True iff the file's current content hash differs from the recorded one.
/// Throws TraceError when the file is not listed in the header.
bool is_stale(const TraceDb& db, const SourceFile& file);

/// Current UTC time as ISO-8601 (seconds precision).
std::string utc_timestamp();

} // namespace samp

#include "samp/bench.hpp"

#include "samp/parser.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <sstream>

namespace samp {

BenchProgram loop_benchmark(std::uint64_t iterations)
{
    std::string src = "fn main() {\n"
                      "  let total = 0;\n"
                      "  let i = 0;\n"
                      "  while (i < " + std::to_string(iterations) + ") {\n"
                      "    total += i % 7;\n"
                      "    i += 1;\n"
                      "  }\n"
                      "  return total;\n"
                      "}\n";
    return {"loop", std::move(src)};
}

std::vector<BenchProgram> bundled_benchmarks(std::uint32_t scale)
{
    std::vector<BenchProgram> out;
    out.push_back(loop_benchmark(200'000ULL * scale));

    out.push_back({"calls",
        "fn fib(n) {\n"
        "  if (n < 2) {\n"
        "    return n;\n"
        "  }\n"
        "  let a = fib(n - 1);\n"
        "  let b = fib(n - 2);\n"
        "  return a + b;\n"
        "}\n"
        "fn main() {\n"
        "  let rounds = " + std::to_string(scale) + ";\n"
        "  let r = 0;\n"
        "  while (rounds > 0) {\n"
        "    r = fib(20);\n"
        "    rounds = rounds - 1;\n"
        "  }\n"
        "  return r;\n"
        "}\n"});

    out.push_back({"strings",
        "fn main() {\n"
        "  let text = \"1.1E-700F\";\n"
        "  let count = 0;\n"
        "  let i = 0;\n"
        "  while (i < " + std::to_string(40'000ULL * scale) + ") {\n"
        "    let expPos = 3;\n"
        "    let exp = substring(text, expPos + 1, len(text) - 1);\n"
        "    let joined = exp + \":\" + substring(text, 0, expPos);\n"
        "    count += len(joined);\n"
        "    i += 1;\n"
        "  }\n"
        "  return count;\n"
        "}\n"});
    return out;
}

std::uint64_t BenchCase::expected_events(std::uint32_t hits) const
{
    std::uint64_t total = 0;
    for (const auto& [line, n] : line_executions)
        total += std::min<std::uint64_t>(hits, n);
    return total;
}

namespace {

class DiscardBuf : public std::streambuf {
protected:
    int overflow(int c) override { return c; }
};

class LineCounter : public LineHook {
public:
    std::map<std::uint32_t, std::uint64_t> counts;
    void on_transition(const LineTransition& t) override { ++counts[t.current_line]; }
};

} // namespace

double time_program(const BenchProgram& bp, std::optional<HitLimit> hits, int repeats, std::uint64_t* events)
{
    const SourceFile file = SourceFile::from_string(bp.name + ".samp", bp.source);
    const Program program = parse(file);
    const LineVarTable vars = line_vars(program);
    DiscardBuf buf;
    std::ostream sink_out(&buf);

    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < std::max(1, repeats); ++r) {
        MemorySink sink;
        std::optional<Recorder> recorder;
        if (hits) {
            recorder.emplace(sink, *hits);
            recorder->add_file(file, vars);
        }
        const auto start = std::chrono::steady_clock::now();
        execute(program, file, recorder ? &*recorder : nullptr, &sink_out);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, s);
        if (events && recorder)
            *events = recorder->events_recorded();
    }
    return best;
}

BenchReport run_bench(const std::vector<BenchProgram>& programs, const std::vector<std::uint32_t>& hits, int repeats)
{
    BenchReport report;
    report.hits = hits;
    for (const auto& bp : programs) {
        BenchCase c;
        c.name = bp.name;
        c.plain_seconds = time_program(bp, std::nullopt, repeats);
        for (std::uint32_t k : hits) {
            std::uint64_t ev = 0;
            c.seconds[k] = time_program(bp, HitLimit{k}, repeats, &ev);
            c.events[k] = ev;
        }
        {
            const SourceFile file = SourceFile::from_string(bp.name + ".samp", bp.source);
            const Program program = parse(file);
            LineCounter counter;
            DiscardBuf buf;
            std::ostream discard(&buf);
            execute(program, file, &counter, &discard);
            c.line_executions = std::move(counter.counts);
            c.executed_lines = static_cast<std::uint32_t>(c.line_executions.size());
        }
        report.cases.push_back(std::move(c));
    }
    return report;
}

std::string format_bench(const BenchReport& report)
{
    std::ostringstream out;
    char buf[64];
    out << "Time overhead of instrumented runs (instrumented/plain - 1)\n";
    std::snprintf(buf, sizeof buf, "%-14s", "Hits per line");
    out << buf;
    for (const auto& c : report.cases) {
        std::snprintf(buf, sizeof buf, " %10s", c.name.c_str());
        out << buf;
    }
    out << '\n';
    for (std::uint32_t k : report.hits) {
        std::snprintf(buf, sizeof buf, "%-14u", k);
        out << buf;
        for (const auto& c : report.cases) {
            std::snprintf(buf, sizeof buf, " %10.2f", c.overhead(k));
            out << buf;
        }
        out << '\n';
    }
    out << "\nEvents recorded\n";
    std::snprintf(buf, sizeof buf, "%-14s", "Hits per line");
    out << buf;
    for (const auto& c : report.cases) {
        std::snprintf(buf, sizeof buf, " %10s", c.name.c_str());
        out << buf;
    }
    out << '\n';
    for (std::uint32_t k : report.hits) {
        std::snprintf(buf, sizeof buf, "%-14u", k);
        out << buf;
        for (const auto& c : report.cases) {
            std::snprintf(buf, sizeof buf, " %10llu", static_cast<unsigned long long>(c.events.at(k)));
            out << buf;
        }
        out << '\n';
    }
    out << "\nPlain run time (s)";
    for (const auto& c : report.cases) {
        std::snprintf(buf, sizeof buf, "  %s=%.4f", c.name.c_str(), c.plain_seconds);
        out << buf;
    }
    out << '\n';
    return out.str();
}

} // namespace samp

#pragma once

#include "samp/recorder.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace samp {

struct BenchProgram {
    std::string name;
    std::string source;
};

/// The bundled suite: loop-heavy, call-heavy and string-heavy programs.
/// `scale` multiplies the amount of work.
std::vector<BenchProgram> bundled_benchmarks(std::uint32_t scale = 1);

/// A `main` that runs `iterations` rounds of a small multi-line loop body.
BenchProgram loop_benchmark(std::uint64_t iterations);

struct BenchCase {
    std::string name;
    double plain_seconds = 0;                     // min over repeats, no hook
    std::map<std::uint32_t, double> seconds;      // by hits per line, recorder attached
    std::map<std::uint32_t, std::uint64_t> events;
    std::map<std::uint32_t, std::uint64_t> line_executions;  // by line
    std::uint32_t executed_lines = 0;

    double overhead(std::uint32_t hits) const { return seconds.at(hits) / plain_seconds - 1.0; }
    /// Sum over lines of min(hits, executions): what a first-k recorder must store.
    std::uint64_t expected_events(std::uint32_t hits) const;
};

struct BenchReport {
    std::vector<std::uint32_t> hits;
    std::vector<BenchCase> cases;
};

/// Times each program plainly and with the recorder at each hit limit,
/// keeping the minimum of `repeats` runs. Program output is discarded.
BenchReport run_bench(const std::vector<BenchProgram>& programs, const std::vector<std::uint32_t>& hits,
    int repeats = 5);

/// Minimum wall time of `repeats` runs; `hits` unset means no recorder.
double time_program(const BenchProgram& program, std::optional<HitLimit> hits, int repeats,
    std::uint64_t* events = nullptr);

/// Table with one row per hit limit and one overhead column per program.
std::string format_bench(const BenchReport& report);

} // namespace samp

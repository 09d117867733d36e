#include "oracle_check.hpp"

#include "samp/pipeline.hpp"

#include <map>
#include <sstream>

namespace samp::testgen {

std::vector<OracleEvent> recorded_events(const TraceDb& db)
{
    std::vector<OracleEvent> out;
    std::map<std::uint64_t, std::size_t> by_seq;
    for (const auto& e : db.events()) {
        by_seq[e.seq] = out.size();
        out.push_back({e.pass, e.line, {}});
    }
    for (const auto& v : db.vars())
        out[by_seq.at(v.seq)].vars[v.name] = v.value;
    return out;
}

namespace {

std::string describe(const OracleEvent& e)
{
    std::ostringstream s;
    s << "pass " << e.pass << " line " << e.line << " {";
    for (const auto& [k, v] : e.vars)
        s << ' ' << k << '=' << v;
    s << " }";
    return s.str();
}

} // namespace

std::string compare_with_oracle(const GProgram& program, std::optional<std::uint32_t> hits)
{
    const auto file = SourceFile::from_string("gen.samp", program.source);
    std::vector<OracleEvent> got;
    try {
        std::ostringstream sink;
        got = recorded_events(record_in_memory(file, hits, &sink));
    } catch (const std::exception& e) {
        return std::string("pipeline failed: ") + e.what();
    }
    const auto want = simulate(program, hits);
    const std::size_t n = std::min(got.size(), want.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!(got[i] == want[i]))
            return "event " + std::to_string(i) + ": recorded " + describe(got[i]) + ", oracle " + describe(want[i]);
    if (got.size() != want.size())
        return "recorded " + std::to_string(got.size()) + " events, oracle " + std::to_string(want.size());
    return {};
}

std::string check_prefix(const std::vector<OracleEvent>& full, const std::vector<OracleEvent>& limited, std::uint32_t k)
{
    std::map<std::uint32_t, std::vector<const OracleEvent*>> all, some;
    for (const auto& e : full)
        all[e.line].push_back(&e);
    for (const auto& e : limited)
        some[e.line].push_back(&e);
    for (const auto& [line, evs] : some) {
        const auto& ref = all[line];
        if (evs.size() != std::min<std::size_t>(k, ref.size()))
            return "line " + std::to_string(line) + ": " + std::to_string(evs.size()) + " events with k=" + std::to_string(k)
                + " but " + std::to_string(ref.size()) + " executions";
        for (std::size_t i = 0; i < evs.size(); ++i)
            if (evs[i]->vars != ref[i]->vars)
                return "line " + std::to_string(line) + ": execution " + std::to_string(i) + " differs from the full trace";
    }
    for (const auto& [line, ref] : all)
        if (k > 0 && !some.count(line))
            return "line " + std::to_string(line) + " missing with k=" + std::to_string(k);
    return {};
}

std::string check_forward(const std::vector<OracleEvent>& events)
{
    std::map<std::uint64_t, std::uint32_t> last;
    for (const auto& e : events) {
        auto [it, fresh] = last.emplace(e.pass, e.line);
        if (!fresh) {
            if (e.line <= it->second)
                return "pass " + std::to_string(e.pass) + " goes from line " + std::to_string(it->second) + " to "
                    + std::to_string(e.line);
            it->second = e.line;
        }
    }
    return {};
}

} // namespace samp::testgen

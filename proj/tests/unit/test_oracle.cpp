#include <doctest.h>

#include "oracle_check.hpp"
#include "program_gen.hpp"
#include "samp/augment.hpp"
#include "samp/line_vars.hpp"
#include "samp/parser.hpp"
#include "samp/pipeline.hpp"

#include <set>
#include <sstream>

using namespace samp;
using namespace samp::testgen;

TEST_SUITE("oracle")
{
    TEST_CASE("generated programs parse and respect the size bound")
    {
        std::mt19937_64 rng(1);
        for (int i = 0; i < 50; ++i) {
            const auto g = generate(rng);
            CHECK(g.line_count - 1 <= 40);
            INFO(g.source);
            CHECK_NOTHROW(parse(g.source));
            CHECK(dump(parse(g.source)) == dump(parse(g.source)));
        }
    }

    TEST_CASE("line variable table lists every identifier of each line")
    {
        std::mt19937_64 rng(2);
        for (int i = 0; i < 50; ++i) {
            const auto g = generate(rng);
            const auto table = line_vars(parse(g.source));
            for (std::uint32_t line = 1; line < g.line_count; ++line) {
                std::set<std::string> got;
                for (const auto& v : table.at(line))
                    CHECK(got.insert(v.name).second);
                const auto it = g.names.find(line);
                const std::set<std::string> want = it == g.names.end() ? std::set<std::string>{} : it->second;
                INFO(g.source, " line ", line);
                CHECK(got == want);
            }
        }
    }

    TEST_CASE("recorder matches the oracle for several hit limits")
    {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 60; ++i) {
            const auto g = generate(rng);
            INFO(g.source);
            CHECK(compare_with_oracle(g, std::nullopt) == "");
            const auto full = simulate(g, std::nullopt);
            CHECK(check_forward(full) == "");
            for (std::uint32_t k : {0u, 1u, 2u, 3u}) {
                CHECK(compare_with_oracle(g, k) == "");
                CHECK(check_prefix(full, simulate(g, k), k) == "");
            }
        }
    }

    TEST_CASE("augmentations are coherent and cover the cursor line")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 30; ++i) {
            const auto g = generate(rng);
            const auto file = SourceFile::from_string("gen.samp", g.source);
            const Program p = parse(file);
            const auto vars = line_vars(p);
            std::ostringstream sink;
            const auto db = record_in_memory(file, std::nullopt, &sink);
            INFO(g.source);
            for (std::uint32_t cursor = 1; cursor <= file.line_count; ++cursor) {
                const auto sel = select_pass(db, p, file, cursor);
                const auto augs = augment(db, p, file, vars, sel);
                std::set<std::uint64_t> chosen;
                for (const auto& [fn, pass] : sel.pass_by_function)
                    chosen.insert(pass);
                for (const auto& a : augs) {
                    if (a.kind == AugmentKind::None)
                        continue;
                    bool found = false;
                    for (std::uint64_t pass : chosen) {
                        const auto recs = db.records_of(pass);
                        for (const auto* e : recs.events)
                            found = found || e->line == a.line;
                        for (const auto& [name, value] : a.entries) {
                            bool has = false;
                            for (const auto* r : recs.vars)
                                has = has || (r->line == a.line && r->name == name && r->value == value);
                            if (found && !has)
                                found = false;
                        }
                        if (found)
                            break;
                    }
                    CHECK(found);
                }
                if (!db.passes_covering(file.path, cursor).empty())
                    CHECK(augs.at(cursor - 1).kind != AugmentKind::None);
            }
        }
    }
}

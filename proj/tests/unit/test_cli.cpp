#include <doctest.h>

#include "cli.hpp"
#include "samp/trace.hpp"
#include "samp/viewer_api.hpp"
#include "test_paths.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace samp;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result samp_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("run writes a trace and a summary")
    {
        test::TempDir dir;
        const auto prog = dir.write("evenodd.samp", test::slurp(test::data_path("evenodd.samp")));
        const auto trace = dir.file("t.samptrace");
        const auto r = samp_cli({"run", prog, "--trace", trace, "--hits-per-line", "1"});
        CHECK(r.code == cli::kOk);
        CHECK(r.err.find("recorded 2 pass(es), 4 line event(s), 7 variable(s)") != std::string::npos);
        const auto db = load_trace(trace);
        CHECK(db.events().size() == 4);
        CHECK(db.vars().size() == 7);
        CHECK(db.passes().size() == 2);
    }

    TEST_CASE("hits per line 0 writes only the header")
    {
        test::TempDir dir;
        const auto prog = dir.write("e.samp", test::slurp(test::data_path("evenodd.samp")));
        const auto trace = dir.file("t.samptrace");
        CHECK(samp_cli({"run", prog, "--trace", trace, "--hits-per-line", "0"}).code == cli::kOk);
        const auto text = test::slurp(trace);
        CHECK(std::count(text.begin(), text.end(), '\n') == 1);
        CHECK(text.rfind(R"({"t":"hdr","v":1,"hits":0,)", 0) == 0);
    }

    TEST_CASE("missing input and bad arguments exit with 2")
    {
        auto r = samp_cli({"run", "/no/such/prog.samp"});
        CHECK(r.code == cli::kUsage);
        CHECK(r.err.find("/no/such/prog.samp") != std::string::npos);
        CHECK(samp_cli({}).code == cli::kUsage);
        CHECK(samp_cli({"frobnicate"}).code == cli::kUsage);
        CHECK(samp_cli({"run", test::data_path("evenodd.samp"), "--hits-per-line", "-3"}).code == cli::kUsage);
        CHECK(samp_cli({"run", test::data_path("evenodd.samp"), "--hits-per-line", "lots"}).code == cli::kUsage);
        CHECK(samp_cli({"annotate", test::data_path("evenodd.samp")}).code == cli::kUsage);
        CHECK(samp_cli({"annotate", test::data_path("evenodd.samp"), "--cursor", "1", "--trace", "/no/trace"}).code
              == cli::kUsage);
        CHECK(samp_cli({"--help"}).code == cli::kOk);
    }

    TEST_CASE("program errors exit with 1 and keep the partial trace")
    {
        test::TempDir dir;
        const auto syntax = dir.write("s.samp", "fn main() { let x = ; }\n");
        auto r = samp_cli({"run", syntax, "--trace", dir.file("s.samptrace")});
        CHECK(r.code == cli::kProgramError);
        CHECK(r.err.find("1:21: unexpected ';'") != std::string::npos);

        const auto crash = dir.write("c.samp", "fn main() {\n  let a = 1;\n  print(a / 0);\n}\n");
        r = samp_cli({"run", crash, "--trace", dir.file("c.samptrace")});
        CHECK(r.code == cli::kProgramError);
        CHECK(r.err.find("c.samp:3: runtime error: division by zero") != std::string::npos);
        CHECK(load_trace(dir.file("c.samptrace")).events().size() == 1);
    }

    TEST_CASE("annotate reproduces the golden listings")
    {
        test::TempDir dir;
        const auto prog = test::data_path("evenodd.samp");
        const auto trace = dir.file("u.samptrace");
        REQUIRE(samp_cli({"run", prog, "--trace", trace, "--hits-per-line", "unlimited"}).code == cli::kOk);
        for (int cursor : {3, 5}) {
            const auto r = samp_cli({"annotate", prog, "--cursor", std::to_string(cursor), "--trace", trace});
            CHECK(r.code == cli::kOk);
            CHECK(r.out == test::slurp(test::data_path("evenodd_cursor" + std::to_string(cursor) + ".golden")));
        }
        CHECK(samp_cli({"annotate", prog, "--cursor", "99", "--trace", trace}).code == cli::kUsage);
    }

    TEST_CASE("edited source exits with 3")
    {
        test::TempDir dir;
        const auto prog = dir.write("e.samp", test::slurp(test::data_path("evenodd.samp")));
        const auto trace = dir.file("e.samptrace");
        REQUIRE(samp_cli({"run", prog, "--trace", trace}).code == cli::kOk);
        std::ofstream(prog, std::ios::app) << "// edited\n";
        auto r = samp_cli({"annotate", prog, "--cursor", "1", "--trace", trace});
        CHECK(r.code == cli::kStale);
        CHECK(r.err.find("trace invalidated by edit") != std::string::npos);
        CHECK(std::filesystem::exists(trace));
        r = samp_cli({"annotate", prog, "--cursor", "1", "--trace", trace, "--purge-stale"});
        CHECK(r.code == cli::kStale);
        CHECK_FALSE(std::filesystem::exists(trace));
    }

    TEST_CASE("default trace location")
    {
        test::TempDir dir;
        const auto prog = dir.write("prog.samp", "fn main() {\n  let a = 1;\n}\n");
        ::unsetenv("SAMP_TRACE_DIR");
        REQUIRE(samp_cli({"run", prog}).code == cli::kOk);
        CHECK(std::filesystem::exists(dir.file("prog.samptrace")));
        CHECK(samp_cli({"annotate", prog, "--cursor", "2"}).out == "fn main() {\n  let a = 1;  # a: 1\n}\n");

        test::TempDir elsewhere;
        ::setenv("SAMP_TRACE_DIR", elsewhere.file("").c_str(), 1);
        REQUIRE(samp_cli({"run", prog}).code == cli::kOk);
        ::unsetenv("SAMP_TRACE_DIR");
        CHECK(std::filesystem::exists(elsewhere.file("prog.samptrace")));
    }

    TEST_CASE("serve exits with 4 when the port is taken")
    {
        test::TempDir dir;
        const auto prog = dir.write("e.samp", test::slurp(test::data_path("evenodd.samp")));
        const auto trace = dir.file("e.samptrace");
        REQUIRE(samp_cli({"run", prog, "--trace", trace}).code == cli::kOk);
        ViewerServer holder(std::make_shared<ViewerApi>(load_trace(trace)));
        REQUIRE(holder.start("127.0.0.1", 0));
        const auto r = samp_cli({"serve", prog, "--trace", trace, "--port", std::to_string(holder.port())});
        CHECK(r.code == cli::kPortBusy);
        holder.stop();
    }

    TEST_CASE("bench prints a table for hits 1 to 3")
    {
        const auto r = samp_cli({"bench", "--repeats", "1", "--scale", "1"});
        CHECK(r.code == cli::kOk);
        CHECK(r.out.find("Hits per line") != std::string::npos);
        for (const char* row : {"\n1 ", "\n2 ", "\n3 "})
            CHECK(r.out.find(row) != std::string::npos);
    }
}

#include <doctest.h>

#include "samp/interp.hpp"
#include "samp/parser.hpp"
#include "samp/pipeline.hpp"
#include "samp/render.hpp"
#include "test_paths.hpp"

#include <sstream>

using namespace samp;

namespace {

struct Step {
    std::string fn;
    std::uint32_t from, to;
    friend bool operator==(const Step&, const Step&) = default;
};

class StepLog : public LineHook {
public:
    std::vector<Step> steps;
    void on_transition(const LineTransition& t) override
    {
        steps.push_back({t.frame.function_name, t.current_line, t.next_line});
    }
};

Value eval_one(const std::string& expr_text)
{
    const auto file = SourceFile::from_string("e.samp", "let v = " + expr_text + ";\nfn main() { }\n");
    const Program p = parse(file);
    Interpreter in(p, file);
    Frame f = in.scratch_frame();
    return in.eval_expr(*std::get<ast::Let>(p.stmts[0]->node).init, f);
}

std::vector<Step> steps_of(const std::string& src)
{
    const auto file = SourceFile::from_string("s.samp", src);
    const Program p = parse(file);
    StepLog log;
    std::ostringstream out;
    execute(p, file, &log, &out);
    return log.steps;
}

std::string run_error(const std::string& src)
{
    const auto file = SourceFile::from_string("bad.samp", src);
    const Program p = parse(file);
    std::ostringstream out;
    try {
        execute(p, file, nullptr, &out);
    } catch (const RuntimeError& e) {
        return e.what();
    }
    return "no error";
}

constexpr std::uint32_t X = kExitLine;

} // namespace

TEST_SUITE("interp")
{
    TEST_CASE("eval_expr examples")
    {
        CHECK(eval_one("5 % 2 == 0") == Value::boolean(false));
        CHECK(eval_one("len(\"1.1E-700F\")") == Value::integer(9));
        CHECK(eval_one("-0.0 == 0.0") == Value::boolean(true));
    }

    TEST_CASE("arithmetic and comparison semantics")
    {
        CHECK(eval_one("7 / 2") == Value::integer(3));
        CHECK(eval_one("7 / 2.0") == Value::floating(3.5));
        CHECK(eval_one("-7 % 3") == Value::integer(-1));
        CHECK(eval_one("9223372036854775807 + 1") == Value::integer(INT64_MIN));
        CHECK(eval_one("1 == 1.0") == Value::boolean(false));
        CHECK(eval_one("\"ab\" + \"cd\"") == Value::string("abcd"));
        CHECK(eval_one("\"ab\" < \"b\"") == Value::boolean(true));
        CHECK(eval_one("[1, [2]] == [1, [2]]") == Value::boolean(true));
        CHECK(eval_one("{a: 1} != {a: 2}") == Value::boolean(true));
        CHECK(eval_one("substring(\"hello\", 1, 3)") == Value::string("el"));
        CHECK(eval_one("false && 1 / 0 == 0") == Value::boolean(false));
        CHECK(eval_one("true || undefined_name") == Value::boolean(true));
        CHECK(eval_one("!(1 < 2)") == Value::boolean(false));
    }

    TEST_CASE("exponent example yields -700")
    {
        const auto file = SourceFile::from_string("exp.samp",
            "fn main() {\n"
            "  let str = \"1.1E-700F\";\n"
            "  let expPos = 3;\n"
            "  let exp = substring(str, expPos + 1, len(str) - 1);\n"
            "  print(exp);\n"
            "}\n");
        std::ostringstream out;
        const TraceDb db = record_in_memory(file, std::nullopt, &out);
        CHECK(out.str() == "\"-700\"\n");
        std::vector<std::pair<std::string, std::string>> line4;
        for (const auto& r : db.vars())
            if (r.line == 4)
                line4.emplace_back(r.name, r.value);
        CHECK(line4 == std::vector<std::pair<std::string, std::string>>{
                  {"str", "\"1.1E-700F\""}, {"expPos", "3"}, {"exp", "\"-700\""}});
    }

    TEST_CASE("even/odd program leaves even = 2, odd = 1")
    {
        const auto file = SourceFile::load(test::data_path("evenodd.samp"));
        const Program p = parse(file);
        Interpreter in(p, file);
        in.run();
        CHECK(in.globals().at("even") == Value::integer(2));
        CHECK(in.globals().at("odd") == Value::integer(1));
    }

    TEST_CASE("straight-line main gives three increasing transitions")
    {
        const auto steps = steps_of("fn main() {\n  let a = 1;\n  let b = a + 1;\n  let c = b * 2;\n}\n");
        CHECK(steps == std::vector<Step>{{"main", 2, 3}, {"main", 3, 4}, {"main", 4, X}});
    }

    TEST_CASE("loop back-edges and exhaustion")
    {
        const auto steps = steps_of(test::slurp(test::data_path("evenodd.samp")));
        CHECK(steps == std::vector<Step>{{"main", 1, 2}, {"main", 2, 5}, {"main", 5, 1},
                           {"main", 1, 2}, {"main", 2, 3}, {"main", 3, X}});
        const auto w = steps_of("fn main() {\n  let i = 0;\n  while (i < 2)\n    i += 1;\n  print(i);\n}\n");
        CHECK(w == std::vector<Step>{{"main", 2, 3}, {"main", 3, 4}, {"main", 4, 3}, {"main", 3, 4},
                       {"main", 4, 3}, {"main", 3, 5}, {"main", 5, X}});
    }

    TEST_CASE("calls interleave and the caller line completes after the call")
    {
        const auto steps = steps_of("fn sq(x) {\n  return x * x;\n}\nfn main() {\n  let y = sq(3) + 1;\n  print(y);\n}\n");
        CHECK(steps == std::vector<Step>{{"sq", 2, X}, {"main", 5, 6}, {"main", 6, X}});
    }

    TEST_CASE("one-line loops produce no backward transitions")
    {
        const auto steps = steps_of("fn main() {\n  let i = 0; while (i < 5) { i += 1; }\n  print(i);\n}\n");
        CHECK(steps == std::vector<Step>{{"main", 2, 3}, {"main", 3, X}});
    }

    TEST_CASE("end-of-line capture sees the line's assignment")
    {
        class Peek : public LineHook {
        public:
            std::vector<std::string> seen;
            void on_transition(const LineTransition& t) override
            {
                if (const Value* v = t.frame.lookup("x"))
                    seen.push_back(render(*v));
            }
        } peek;
        const auto file = SourceFile::from_string("p.samp", "fn main() {\n  let x = 1;\n  x = x + 41;\n}\n");
        execute(parse(file), file, &peek);
        CHECK(peek.seen == std::vector<std::string>{"1", "42"});
    }

    TEST_CASE("runs are deterministic")
    {
        const auto src = test::slurp(test::data_path("callercallee.samp"));
        CHECK(steps_of(src) == steps_of(src));
    }

    TEST_CASE("runtime errors name file and line")
    {
        CHECK(run_error("fn main() {\n  let x = 1 + \"a\";\n}\n") ==
              "bad.samp:2: runtime error: cannot apply '+' to int and string");
        CHECK(run_error("fn main() {\n\n  let a = [1];\n  print(a[3]);\n}\n") ==
              "bad.samp:4: runtime error: index 3 out of bounds for length 1");
        CHECK(run_error("fn main() {\n  print(nope);\n}\n") == "bad.samp:2: runtime error: undefined name 'nope'");
        CHECK(run_error("fn main() {\n  print(1 / 0);\n}\n") == "bad.samp:2: runtime error: division by zero");
        CHECK(run_error("fn main() {\n  print(1.0 / 0.0);\n}\n") == "bad.samp:2: runtime error: division by zero");
        CHECK(run_error("fn main() {\n  if (1) { }\n}\n") == "bad.samp:2: runtime error: condition must be bool, got int");
        CHECK(run_error("let x = 1;\n") == "bad.samp:1: runtime error: no 'main' function defined");
    }

    TEST_CASE("recursion depth cap")
    {
        CHECK(run_error("fn f(n) {\n  return f(n + 1);\n}\nfn main() {\n  f(0);\n}\n") ==
              "bad.samp:2: runtime error: maximum call depth of 10000 exceeded");
        const auto ok = steps_of("fn f(n) {\n  if (n == 0) return 0;\n  return f(n - 1);\n}\n"
                                 "fn main() {\n  print(f(9000));\n}\n");
        CHECK(ok.size() > 9000);
    }
}

#include <doctest.h>

#include "samp/parser.hpp"
#include "samp/source.hpp"
#include "test_paths.hpp"


using namespace samp;

namespace {

const Stmt& only_stmt(const ast::Block& b)
{
    REQUIRE(b.stmts.size() == 1);
    return *b.stmts[0];
}

void check_nesting(const ast::Block& block, const Span& parent);

void check_stmt(const Stmt& s, const Span& parent)
{
    CHECK(parent.contains(s.span));
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ast::If>) {
                CHECK(s.span.contains(n.cond->span));
                check_nesting(n.then_block, s.span);
                if (n.else_block)
                    check_nesting(*n.else_block, s.span);
            } else if constexpr (std::is_same_v<T, ast::While>) {
                CHECK(s.span.contains(n.cond->span));
                check_nesting(n.body, s.span);
            } else if constexpr (std::is_same_v<T, ast::For>) {
                CHECK(s.span.contains(n.iterable->span));
                check_nesting(n.body, s.span);
            } else if constexpr (std::is_same_v<T, ast::FnDecl>) {
                check_nesting(n.body, s.span);
            } else if constexpr (std::is_same_v<T, ast::Let>) {
                CHECK(s.span.contains(n.init->span));
            } else if constexpr (std::is_same_v<T, ast::Assign>) {
                CHECK(s.span.contains(n.target->span));
                CHECK(s.span.contains(n.value->span));
            }
        },
        s.node);
}

void check_nesting(const ast::Block& block, const Span& parent)
{
    CHECK(parent.contains(block.span));
    for (const auto& s : block.stmts)
        check_stmt(*s, block.span);
}

} // namespace

TEST_SUITE("parser")
{
    TEST_CASE("even/odd listing: for spans lines 1-5, if on line 2")
    {
        const auto file = SourceFile::load(test::data_path("evenodd.samp"));
        const Program p = parse(file);
        const auto* main_fn = p.find_function("main");
        REQUIRE(main_fn);
        const Stmt& loop = only_stmt(main_fn->body);
        REQUIRE(std::holds_alternative<ast::For>(loop.node));
        CHECK(loop.span.start_line == 1);
        CHECK(loop.span.end_line == 5);
        const auto& f = std::get<ast::For>(loop.node);
        CHECK(f.var == "n");
        const Stmt& branch = only_stmt(f.body);
        REQUIRE(std::holds_alternative<ast::If>(branch.node));
        CHECK(branch.span.start_line == 2);
        CHECK(branch.span.end_line == 5);
        const auto& i = std::get<ast::If>(branch.node);
        CHECK(only_stmt(i.then_block).line() == 3);
        REQUIRE(i.else_block);
        CHECK(only_stmt(*i.else_block).line() == 5);
    }

    TEST_CASE("empty input is an empty program")
    {
        CHECK(parse("").stmts.empty());
        CHECK(parse("  // nothing here\n\n").stmts.empty());
    }

    TEST_CASE("unexpected ';' is reported with its position")
    {
        try {
            parse("let x = (1 +;");
            FAIL("expected a syntax error");
        } catch (const SyntaxError& e) {
            CHECK(e.line() == 1);
            CHECK(e.column() == 13);
            CHECK(e.detail() == "unexpected ';'");
            CHECK(std::string(e.what()) == "1:13: unexpected ';'");
        }
    }

    TEST_CASE("malformed programs are rejected")
    {
        CHECK_THROWS_AS(parse("let = 3;"), SyntaxError);
        CHECK_THROWS_AS(parse("x = \"open"), SyntaxError);
        CHECK_THROWS_AS(parse("fn f() { fn g() { } }"), SyntaxError);
        CHECK_THROWS_AS(parse("1 = 2;"), SyntaxError);
        CHECK_THROWS_AS(parse("if (x) { y = 1;"), SyntaxError);
        CHECK_THROWS_AS(parse("let a = [1, 2"), SyntaxError);
        CHECK_THROWS_AS(parse("let r = {a 1};"), SyntaxError);
        CHECK_THROWS_AS(parse("for (x of y) {}"), SyntaxError);
        CHECK_THROWS_WITH_AS(parse("\n\nx = 1 $ 2;"), doctest::Contains("3:"), SyntaxError);
    }

    TEST_CASE("nesting limit fails cleanly")
    {
        std::string deep(10000, '(');
        CHECK_THROWS_AS(parse("let x = " + deep + "1;"), SyntaxError);
    }

    TEST_CASE("expressions and statements of the grammar")
    {
        const char* src = "fn f(a, b) {\n"
                          "  let r = {x: [1, 2.5, \"s\"], y: null, z: true};\n"
                          "  r.x[0] += -a * (b % 3) / 2;\n"
                          "  while (!(a >= b) && a != 0 || false) a = a - 1;\n"
                          "  if (a <= b) return r; else print(len(r.x));\n"
                          "  return;\n"
                          "}\n";
        const Program p = parse(src);
        REQUIRE(p.stmts.size() == 1);
        const auto* f = p.find_function("f");
        REQUIRE(f);
        CHECK(f->params.size() == 2);
        CHECK(f->body.stmts.size() == 5);
        check_nesting(f->body, p.span);
    }

    TEST_CASE("multi-line statement keeps token start lines")
    {
        const Program p = parse("let x = 1 +\n  2;\n");
        const auto& let = std::get<ast::Let>(p.stmts[0]->node);
        const auto& bin = std::get<ast::Binary>(let.init->node);
        CHECK(bin.lhs->span.start_line == 1);
        CHECK(bin.rhs->span.start_line == 2);
        CHECK(p.stmts[0]->span.end_line == 2);
    }

    TEST_CASE("parsing is deterministic and child spans nest")
    {
        const auto file = SourceFile::load(test::data_path("evenodd.samp"));
        CHECK(dump(parse(file)) == dump(parse(file)));
        const Program p = parse(file);
        for (const auto& s : p.stmts)
            check_stmt(*s, p.span);
        CHECK(p.span.end_line <= file.line_count);
    }
}

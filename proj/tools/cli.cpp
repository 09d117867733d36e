#include "cli.hpp"

#include "samp/bench.hpp"
#include "samp/parser.hpp"
#include "samp/pipeline.hpp"
#include "samp/viewer_api.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

namespace samp::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
    std::string program;
    std::string trace;
    std::string hits = "1";
    std::uint32_t cursor = 0;
    int port = 7847;
    std::string host = "127.0.0.1";
    std::string assets;
    bool purge_stale = false;
    int repeats = 5;
    std::uint32_t scale = 1;
};

std::optional<HitLimit> parse_hits(const std::string& s)
{
    if (s == "unlimited")
        return HitLimit{};
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 9)
        return std::nullopt;
    return HitLimit{static_cast<std::uint32_t>(std::stoul(s))};
}

std::string trace_path_for(const Config& c)
{
    return c.trace.empty() ? default_trace_path(c.program) : c.trace;
}

std::optional<SourceFile> load_program(const Config& c, std::ostream& err)
{
    if (!fs::is_regular_file(c.program)) {
        err << "samp: no such file: " << c.program << '\n';
        return std::nullopt;
    }
    try {
        return SourceFile::load(c.program);
    } catch (const std::exception& e) {
        err << "samp: " << e.what() << '\n';
        return std::nullopt;
    }
}

int cmd_run(const Config& c, std::ostream& out, std::ostream& err)
{
    const auto hits = parse_hits(c.hits);
    if (!hits) {
        err << "samp: --hits-per-line must be a non-negative integer or 'unlimited'\n";
        return kUsage;
    }
    const auto file = load_program(c, err);
    if (!file)
        return kUsage;
    const std::string trace = trace_path_for(c);
    try {
        const RunSummary s = record_to_file(*file, trace, *hits, &out);
        char buf[160];
        std::snprintf(buf, sizeof buf, "recorded %llu pass(es), %llu line event(s), %llu variable(s) in %.3f s -> ",
            static_cast<unsigned long long>(s.passes), static_cast<unsigned long long>(s.events),
            static_cast<unsigned long long>(s.vars), s.seconds);
        err << buf << trace << '\n';
        return kOk;
    } catch (const SyntaxError& e) {
        err << c.program << ':' << e.what() << '\n';
    } catch (const RuntimeError& e) {
        err << e.what() << "\n(partial trace kept in " << trace << ")\n";
    } catch (const TraceError& e) {
        err << "samp: " << e.what() << '\n';
    }
    return kProgramError;
}

int cmd_annotate(const Config& c, std::ostream& out, std::ostream& err)
{
    const auto file = load_program(c, err);
    if (!file)
        return kUsage;
    const std::string trace = trace_path_for(c);
    if (!fs::is_regular_file(trace)) {
        err << "samp: no such trace: " << trace << '\n';
        return kUsage;
    }
    try {
        const TraceDb db = load_trace(trace);
        if (c.cursor < 1 || c.cursor > file->line_count) {
            err << "samp: --cursor must be within 1.." << file->line_count << '\n';
            return kUsage;
        }
        if (is_stale(db, *file)) {
            if (c.purge_stale) {
                fs::remove(trace);
                err << "samp: trace invalidated by edit (deleted " << trace << ")\n";
            } else {
                err << "samp: trace invalidated by edit\n";
            }
            return kStale;
        }
        out << annotate(db, *file, c.cursor);
        return kOk;
    } catch (const SyntaxError& e) {
        err << c.program << ':' << e.what() << '\n';
        return kProgramError;
    } catch (const TraceError& e) {
        err << "samp: " << e.what() << '\n';
        return kUsage;
    }
}

ViewerServer* g_server = nullptr;

int cmd_serve(const Config& c, std::ostream& err)
{
    const auto file = load_program(c, err);
    if (!file)
        return kUsage;
    const std::string trace = trace_path_for(c);
    std::shared_ptr<ViewerApi> api;
    try {
        TraceDb db = load_trace(trace);
        if (is_stale(db, *file)) {
            err << "samp: trace invalidated by edit\n";
            return kStale;
        }
        api = std::make_shared<ViewerApi>(std::move(db));
    } catch (const TraceError& e) {
        err << "samp: " << e.what() << '\n';
        return kUsage;
    }
    ViewerServer server(api, c.assets);
    if (!server.bind(c.host, c.port)) {
        err << "samp: port " << c.port << " is busy\n";
        return kPortBusy;
    }
    err << "serving " << c.program << " on http://" << c.host << ':' << server.port() << "/\n";
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server)
            g_server->stop();
    });
    server.listen();
    g_server = nullptr;
    return kOk;
}

int cmd_bench(const Config& c, std::ostream& out)
{
    const BenchReport report = run_bench(bundled_benchmarks(c.scale), {1, 2, 3}, c.repeats);
    out << format_bench(report);
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Record sample variable values of Samp programs and show them next to source lines"};
    app.name("samp");
    app.require_subcommand(1);
    Config c;

    auto* run_cmd = app.add_subcommand("run", "Execute a program with the recorder attached");
    run_cmd->add_option("program", c.program, "Samp source file (.samp)")->required();
    run_cmd->add_option("--trace", c.trace, "Trace output path (default: <program>.samptrace)");
    run_cmd->add_option("--hits-per-line", c.hits, "Executions recorded per line: N or 'unlimited'");

    auto* ann_cmd = app.add_subcommand("annotate", "Print the source with values for one cursor line");
    ann_cmd->add_option("program", c.program, "Samp source file")->required();
    ann_cmd->add_option("--cursor", c.cursor, "Cursor line (1-based)")->required();
    ann_cmd->add_option("--trace", c.trace, "Trace file");
    ann_cmd->add_flag("--purge-stale", c.purge_stale, "Delete the trace if the source was edited");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the viewer API over HTTP");
    serve_cmd->add_option("program", c.program, "Samp source file")->required();
    serve_cmd->add_option("--trace", c.trace, "Trace file");
    serve_cmd->add_option("--port", c.port, "Port (default 7847)");
    serve_cmd->add_option("--host", c.host, "Bind address");
    serve_cmd->add_option("--assets", c.assets, "Directory with the built viewer");

    auto* bench_cmd = app.add_subcommand("bench", "Measure recording overhead on the bundled programs");
    bench_cmd->add_option("--repeats", c.repeats, "Runs per configuration; the minimum is kept");
    bench_cmd->add_option("--scale", c.scale, "Work multiplier for the bundled programs");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "samp: " << e.what() << '\n';
        return kUsage;
    }

    if (*run_cmd)
        return cmd_run(c, out, err);
    if (*ann_cmd)
        return cmd_annotate(c, out, err);
    if (*serve_cmd)
        return cmd_serve(c, err);
    return cmd_bench(c, out);
}

} // namespace samp::cli

#include "samp/viewer_api.hpp"

#include "samp/augment.hpp"
#include "samp/line_vars.hpp"
#include "samp/parser.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <charconv>
#include <filesystem>

namespace samp {

using ojson = nlohmann::ordered_json;

namespace {

ApiResponse error(int status, const std::string& message)
{
    return {status, ojson{{"error", message}}.dump()};
}

} // namespace

ViewerApi::ViewerApi(TraceDb db) : db_(std::move(db)) {}

std::string ViewerApi::resolve(std::string_view file) const
{
    if (file.empty())
        return {};
    if (const auto* entry = db_.header().find_file(file))
        return entry->path;
    const std::string wanted = std::filesystem::path(file).filename().string();
    std::string found;
    for (const auto& f : db_.header().files) {
        if (std::filesystem::path(f.path).filename().string() == wanted) {
            if (!found.empty())
                return {};  // ambiguous
            found = f.path;
        }
    }
    return found;
}

ApiResponse ViewerApi::source(std::string_view file) const
{
    const std::string path = resolve(file);
    if (path.empty())
        return error(404, "file not found");
    SourceFile src;
    try {
        src = SourceFile::load(path);
    } catch (const std::exception&) {
        return error(404, "file not found");
    }
    ojson lines = ojson::array();
    for (auto l : src.lines())
        lines.push_back(std::string(l));
    return {200, ojson{{"path", path}, {"hash", src.hash_string()}, {"lines", std::move(lines)}}.dump()};
}

ApiResponse ViewerApi::augment(std::string_view file, std::string_view cursor) const
{
    const std::string path = resolve(file);
    if (path.empty())
        return error(404, "file not found");
    SourceFile src;
    try {
        src = SourceFile::load(path);
    } catch (const std::exception&) {
        return error(404, "file not found");
    }

    std::uint32_t cursor_line = 0;
    auto [ptr, ec] = std::from_chars(cursor.data(), cursor.data() + cursor.size(), cursor_line);
    if (cursor.empty() || ec != std::errc{} || ptr != cursor.data() + cursor.size())
        return error(400, "cursor must be a positive line number");
    if (cursor_line < 1 || cursor_line > src.line_count)
        return error(400, "cursor " + std::string(cursor) + " outside 1.." + std::to_string(src.line_count));
    if (is_stale(db_, src))
        return error(409, StaleTraceError().what());

    Program program;
    try {
        program = parse(src);
    } catch (const SyntaxError& e) {
        return error(422, std::string("syntax error: ") + e.what());
    }
    const Selection sel = select_pass(db_, program, src, cursor_line);
    const auto augs = samp::augment(db_, program, src, line_vars(program), sel);

    ojson by_fn = ojson::object();
    for (const auto& [fn, pass] : sel.pass_by_function)
        by_fn[fn] = pass;
    ojson lines = ojson::array();
    for (const auto& a : augs) {
        ojson entries = ojson::array();
        for (const auto& [name, value] : a.entries)
            entries.push_back(ojson{{"name", name}, {"value", value}});
        lines.push_back(ojson{{"ln", a.line}, {"kind", to_string(a.kind)}, {"entries", std::move(entries)}});
    }
    return {200,
        ojson{{"cursor", cursor_line}, {"pass_by_function", std::move(by_fn)}, {"lines", std::move(lines)}}.dump()};
}

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>samp viewer</title></head>
<body><p>The viewer assets are not installed. The JSON API is available at
<code>/api/source?file=...</code> and <code>/api/augment?file=...&amp;cursor=N</code>.</p></body></html>
)";

} // namespace

struct ViewerServer::Impl {
    httplib::Server server;
};

ViewerServer::ViewerServer(std::shared_ptr<const ViewerApi> api, std::string assets_dir)
    : impl_(std::make_unique<Impl>())
{
    // httplib's default also sets SO_REUSEPORT, which would let a second
    // server share the port instead of reporting it busy.
    impl_->server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    auto reply = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    impl_->server.Get("/api/source", [api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api->source(req.get_param_value("file")));
    });
    impl_->server.Get("/api/augment", [api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api->augment(req.get_param_value("file"), req.get_param_value("cursor")));
    });
    if (!assets_dir.empty()) {
        impl_->server.set_mount_point("/", assets_dir);
    } else {
        impl_->server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
        });
    }
}

ViewerServer::~ViewerServer() { stop(); }

bool ViewerServer::bind(const std::string& host, int port)
{
    if (port == 0) {
        port_ = impl_->server.bind_to_any_port(host);
        return port_ > 0;
    }
    if (!impl_->server.bind_to_port(host, port))
        return false;
    port_ = port;
    return true;
}

void ViewerServer::listen() { impl_->server.listen_after_bind(); }

bool ViewerServer::start(const std::string& host, int port)
{
    if (!bind(host, port))
        return false;
    thread_ = std::thread([this] { listen(); });
    impl_->server.wait_until_ready();
    return true;
}

void ViewerServer::stop()
{
    impl_->server.stop();
    if (thread_.joinable())
        thread_.join();
}

} // namespace samp

#pragma once

#include "samp/trace.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <string_view>
#include <thread>

namespace samp {

struct ApiResponse {
    int status = 200;
    std::string body;  // JSON
};

/// JSON endpoints backing the browser viewer:
///   GET /api/source?file=P           -> {"path","hash","lines":[...]}
///   GET /api/augment?file=P&cursor=N -> {"cursor","pass_by_function","lines":[{"ln","kind","entries"}]}
/// Errors are {"error": message} with a 4xx status. Sources are re-read on
/// every request so edits made after loading surface as 409 "trace
/// invalidated by edit".
class ViewerApi {
public:
    explicit ViewerApi(TraceDb db);

    ApiResponse source(std::string_view file) const;
    ApiResponse augment(std::string_view file, std::string_view cursor) const;

    const TraceDb& trace() const noexcept { return db_; }

    /// Header path matching a request parameter (exact, canonical, or unique
    /// file name). Empty when nothing matches.
    std::string resolve(std::string_view file) const;

private:
    TraceDb db_;
};

/// HTTP wrapper serving ViewerApi plus static assets.
class ViewerServer {
public:
    /// `assets_dir` may be empty; then "/" serves a short placeholder page.
    ViewerServer(std::shared_ptr<const ViewerApi> api, std::string assets_dir = {});
    ~ViewerServer();

    /// Binds host:port (port 0 picks a free one). Returns false when busy.
    bool bind(const std::string& host, int port);
    int port() const noexcept { return port_; }
    /// Blocks serving requests until stop().
    void listen();
    /// bind() then listen() on a background thread.
    bool start(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace samp

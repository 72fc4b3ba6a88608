#pragma once

#include <array>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "codesign/agents.hpp"
#include "codesign/render.hpp"
#include "codesign/session.hpp"

// HTTP + event-stream surface over sessions, and the service configuration.
namespace codesign::gateway {

// ---- configuration -------------------------------------------------------------

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::filesystem::path data_dir = "sessions";
    agents::ProviderConfig provider;
    annealer::AnnealConfig anneal;
    double threshold = 75.0;
    int max_rounds = 3;
    std::optional<std::filesystem::path> catalog_path;
    std::optional<std::filesystem::path> rag_path;
    /// Static bearer token; empty disables the check.
    std::string api_token;
    std::size_t workers = 2;
    double px_per_m = 80.0;
};

/// A configuration field is missing, malformed or points at a missing path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Relative paths resolve against `base`.
ServiceConfig config_from_json(const Json& j, const std::filesystem::path& base = {});
ServiceConfig load_config(const std::filesystem::path& file);
/// Every configured path must exist; the data directory is the only one created.
void check_paths(const ServiceConfig& config);

// ---- errors --------------------------------------------------------------------

enum class ErrorCode {
    BadRequest,
    InvalidJson,
    InvalidRoom,
    NotFound,
    MethodNotAllowed,
    NoPendingProposal,
    WrongMode,
    SessionClosed,
    InvalidTransition,
    SessionExists,
    Forbidden,
    StageFailed,
    Unplaceable,
    UngradableReply,
    ClientError,
    ParseError,
    Unauthorized,
    Busy,
    Internal,
};

inline constexpr std::array kAllErrorCodes = {
    ErrorCode::BadRequest,        ErrorCode::InvalidJson,   ErrorCode::InvalidRoom,      ErrorCode::NotFound,
    ErrorCode::MethodNotAllowed,  ErrorCode::NoPendingProposal, ErrorCode::WrongMode,    ErrorCode::SessionClosed,
    ErrorCode::InvalidTransition, ErrorCode::SessionExists, ErrorCode::Forbidden,        ErrorCode::StageFailed,
    ErrorCode::Unplaceable,       ErrorCode::UngradableReply, ErrorCode::ClientError,    ErrorCode::ParseError,
    ErrorCode::Unauthorized,      ErrorCode::Busy,          ErrorCode::Internal,
};

std::string_view error_code_name(ErrorCode code);
int http_status(ErrorCode code);
std::optional<ErrorCode> error_code_from_name(std::string_view name);

class ApiError : public std::runtime_error {
public:
    ApiError(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// Maps a module exception (or anything else) to an API error.
ApiError to_api_error(const std::exception& e);

// ---- transport-neutral request handling ------------------------------------------

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    /// Lowercase header names.
    std::map<std::string, std::string> headers;
    std::string body;
};

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

Response error_response(const ApiError& e);

/// One server-sent-events frame: id, event and data lines.
std::string sse_frame(const session::Event& e);

/// Fixed-size pool running background jobs in submission order.
class WorkerPool {
public:
    explicit WorkerPool(std::size_t threads);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    void submit(std::function<void()> job);
    /// Blocks until the queue is empty and no job is running.
    void drain();

private:
    void run();

    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable idle_cv_;
    std::deque<std::function<void()>> jobs_;
    std::vector<std::thread> threads_;
    std::size_t active_ = 0;
    bool stopping_ = false;
};

using ClientFactory = std::function<std::unique_ptr<agents::CompletionClient>()>;

/// Default factory: a fresh mock per session (attempt counters are per session),
/// or one shared live client.
ClientFactory client_factory(const agents::ProviderConfig& provider);

class Service {
public:
    Service(ServiceConfig config, ClientFactory clients);
    ~Service();

    Response handle(const Request& request);

    /// Event log of a session, for streaming transports; nullptr when unknown.
    std::shared_ptr<session::EventLog> events(const std::string& id) const;
    /// Waits for every queued optimization job.
    void drain();
    std::vector<std::string> session_ids() const;
    const ServiceConfig& config() const { return config_; }

private:
    struct Entry {
        std::mutex op;
        std::unique_ptr<agents::CompletionClient> client;
        std::unique_ptr<session::Session> session;
        std::shared_ptr<session::EventLog> log;
        geometry::RoomPolygon room;
        std::filesystem::path dir;
        std::atomic<bool> optimizing{false};
        mutable std::mutex cache_mu;
        Json cache;

        void refresh();
        Json state() const;
    };

    Response route(const Request& request);
    std::shared_ptr<Entry> find(const std::string& id) const;
    std::shared_ptr<Entry> require(const std::string& id) const;
    Response create(const Request& request);
    Response session_op(const std::string& id, const std::string& op, const Request& request);
    Response optimize(const std::string& id);
    Response event_stream(const std::string& id, const Request& request);
    Response artifact(const std::string& id, const std::string& name);
    Response snapshot_png(const std::string& id, const std::string& n);
    Response references(const std::string& id, const Request& request);
    session::Services services(agents::CompletionClient* client) const;
    void load_existing();

    ServiceConfig config_;
    ClientFactory clients_;
    catalog::Catalog catalog_;
    agents::RagStore rag_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::size_t next_id_ = 1;
    WorkerPool pool_;
};

/// httplib adapter: every route goes through Service::handle except the live event
/// stream, which is pushed chunk by chunk until the session log closes.
class HttpServer {
public:
    explicit HttpServer(Service& service);
    ~HttpServer();

    /// Binds to host:port (port 0 picks a free one) and returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop(); blocks.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace codesign::gateway

#include "codesign/gateway.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "codesign/text.hpp"

namespace codesign::gateway {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, kAllErrorCodes.size()> kErrorNames = {
    "bad_request",         "invalid_json",     "invalid_room",       "not_found",       "method_not_allowed",
    "no_pending_proposal", "wrong_mode",       "session_closed",     "invalid_transition", "session_exists",
    "forbidden",           "stage_failed",     "unplaceable",        "ungradable_reply", "client_error",
    "parse_error",         "unauthorized",     "busy",               "internal",
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw ApiError(ErrorCode::NotFound, "missing file " + p.filename().string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Response json_response(const Json& j, int status = 200) { return {status, "application/json", j.dump(), {}}; }

Json parse_body(const Request& r) {
    if (text::trim(r.body).empty()) {
        return Json::object();
    }
    auto j = Json::parse(r.body);
    if (!j.is_object()) {
        throw ApiError(ErrorCode::BadRequest, "request body must be a JSON object");
    }
    return j;
}

bool valid_id(const std::string& id) {
    static const std::regex re("[A-Za-z0-9][A-Za-z0-9_.-]{0,63}");
    return std::regex_match(id, re) && id.find("..") == std::string::npos;
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    for (const auto part : text::split(path, '/')) {
        if (!part.empty()) {
            out.emplace_back(part);
        }
    }
    return out;
}

std::uint64_t parse_seq(const std::string& s, const char* what) {
    const auto n = text::parse_integer(s);
    if (!n || *n < 0) {
        throw ApiError(ErrorCode::BadRequest, std::string(what) + " must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(*n);
}

// Forwards to a client shared by every session.
class SharedClient : public agents::CompletionClient {
public:
    explicit SharedClient(std::shared_ptr<agents::CompletionClient> inner) : inner_(std::move(inner)) {}
    std::string complete(const agents::CompletionRequest& r) override { return inner_->complete(r); }
    bool supports_images() const override { return inner_->supports_images(); }

private:
    std::shared_ptr<agents::CompletionClient> inner_;
};

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() || base.empty() ? p : base / p; }

}  // namespace

// ---- configuration -------------------------------------------------------------

ServiceConfig config_from_json(const Json& j, const fs::path& base) {
    if (!j.is_object()) {
        throw ConfigError("config", "must be a JSON object");
    }
    ServiceConfig c;
    auto field = [&](const char* key, auto& out) {
        if (!j.contains(key)) {
            return;
        }
        try {
            out = j.at(key).get<std::decay_t<decltype(out)>>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(key, "has the wrong type");
        }
    };
    static const std::set<std::string> known = {"host",    "port",      "data_dir",   "provider", "anneal",
                                                "threshold", "max_rounds", "catalog",  "rag",      "api_token",
                                                "api_token_env", "workers", "px_per_m"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key())) {
            throw ConfigError(it.key(), "unknown configuration key");
        }
    }
    field("host", c.host);
    field("port", c.port);
    std::string data_dir = c.data_dir.string();
    field("data_dir", data_dir);
    c.data_dir = resolve(data_dir, base);
    field("threshold", c.threshold);
    field("max_rounds", c.max_rounds);
    field("api_token", c.api_token);
    field("workers", c.workers);
    field("px_per_m", c.px_per_m);
    if (j.contains("api_token_env")) {
        std::string var;
        field("api_token_env", var);
        const char* v = std::getenv(var.c_str());
        if (v == nullptr || *v == '\0') {
            throw ConfigError("api_token_env", "environment variable " + var + " is not set");
        }
        c.api_token = v;
    }
    if (j.contains("catalog")) {
        std::string p;
        field("catalog", p);
        c.catalog_path = resolve(p, base);
    }
    if (j.contains("rag")) {
        std::string p;
        field("rag", p);
        c.rag_path = resolve(p, base);
    }
    if (j.contains("provider")) {
        try {
            c.provider = agents::provider_config_from_json(j.at("provider"));
        } catch (const std::exception& e) {
            throw ConfigError("provider", e.what());
        }
        if (!c.provider.fixtures.empty()) {
            c.provider.fixtures = resolve(c.provider.fixtures, base);
        }
    }
    if (j.contains("anneal")) {
        try {
            c.anneal = session::options_from_json(Json{{"anneal", j.at("anneal")}}).anneal;
        } catch (const std::exception& e) {
            throw ConfigError("anneal", e.what());
        }
    }
    if (c.port < 0 || c.port > 65535) {
        throw ConfigError("port", "must lie in [0, 65535]");
    }
    if (!(c.threshold >= 0 && c.threshold <= 100)) {
        throw ConfigError("threshold", "must lie in [0, 100]");
    }
    if (c.max_rounds < 1) {
        throw ConfigError("max_rounds", "must be at least 1");
    }
    if (c.workers < 1) {
        throw ConfigError("workers", "must be at least 1");
    }
    if (!(c.px_per_m > 0)) {
        throw ConfigError("px_per_m", "must be positive");
    }
    return c;
}

ServiceConfig load_config(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw ConfigError("config", "cannot open " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
        j = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("not valid JSON: ") + e.what());
    }
    return config_from_json(j, file.parent_path());
}

void check_paths(const ServiceConfig& c) {
    if (c.catalog_path && !fs::is_regular_file(*c.catalog_path)) {
        throw ConfigError("catalog", "no catalog file at " + c.catalog_path->string());
    }
    if (c.rag_path && !fs::is_directory(*c.rag_path)) {
        throw ConfigError("rag", "no snippet directory at " + c.rag_path->string());
    }
    if (c.provider.kind == "mock") {
        if (c.provider.fixtures.empty()) {
            throw ConfigError("provider.fixtures", "the mock provider needs a fixture file");
        }
        if (!fs::is_regular_file(c.provider.fixtures)) {
            throw ConfigError("provider.fixtures", "no fixture file at " + c.provider.fixtures.string());
        }
    } else if (c.provider.kind == "live") {
        if (c.provider.endpoint.empty()) {
            throw ConfigError("provider.endpoint", "the live provider needs an endpoint");
        }
    } else {
        throw ConfigError("provider.kind", "must be mock or live");
    }
    std::error_code ec;
    fs::create_directories(c.data_dir, ec);
    if (ec || !fs::is_directory(c.data_dir)) {
        throw ConfigError("data_dir", "cannot use " + c.data_dir.string());
    }
}

// ---- errors --------------------------------------------------------------------

std::string_view error_code_name(ErrorCode code) { return kErrorNames[static_cast<std::size_t>(code)]; }

std::optional<ErrorCode> error_code_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kErrorNames.size(); ++i) {
        if (kErrorNames[i] == name) {
            return static_cast<ErrorCode>(i);
        }
    }
    return std::nullopt;
}

int http_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::BadRequest:
    case ErrorCode::InvalidJson:
        return 400;
    case ErrorCode::Unauthorized:
        return 401;
    case ErrorCode::Forbidden:
        return 403;
    case ErrorCode::NotFound:
        return 404;
    case ErrorCode::MethodNotAllowed:
        return 405;
    case ErrorCode::NoPendingProposal:
    case ErrorCode::WrongMode:
    case ErrorCode::SessionClosed:
    case ErrorCode::InvalidTransition:
    case ErrorCode::SessionExists:
    case ErrorCode::Busy:
        return 409;
    case ErrorCode::InvalidRoom:
    case ErrorCode::StageFailed:
    case ErrorCode::Unplaceable:
    case ErrorCode::ParseError:
        return 422;
    case ErrorCode::UngradableReply:
    case ErrorCode::ClientError:
        return 502;
    case ErrorCode::Internal:
        return 500;
    }
    return 500;
}

ApiError to_api_error(const std::exception& e) {
    if (const auto* a = dynamic_cast<const ApiError*>(&e)) {
        return *a;
    }
    if (dynamic_cast<const nlohmann::json::parse_error*>(&e)) {
        return {ErrorCode::InvalidJson, e.what()};
    }
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) {
        return {ErrorCode::BadRequest, e.what()};
    }
    if (dynamic_cast<const geometry::InvalidRoom*>(&e)) {
        return {ErrorCode::InvalidRoom, e.what()};
    }
    if (const auto* s = dynamic_cast<const session::SessionError*>(&e)) {
        if (const auto code = error_code_from_name(s->code())) {
            return {*code, e.what()};
        }
        return {ErrorCode::Internal, e.what()};
    }
    if (dynamic_cast<const agents::StageFailed*>(&e)) {
        return {ErrorCode::StageFailed, e.what()};
    }
    if (dynamic_cast<const annealer::Unplaceable*>(&e)) {
        return {ErrorCode::Unplaceable, e.what()};
    }
    if (dynamic_cast<const agents::UngradableReply*>(&e)) {
        return {ErrorCode::UngradableReply, e.what()};
    }
    if (dynamic_cast<const agents::ClientError*>(&e)) {
        return {ErrorCode::ClientError, e.what()};
    }
    if (dynamic_cast<const ruledsl::ParseError*>(&e)) {
        return {ErrorCode::ParseError, e.what()};
    }
    if (dynamic_cast<const agents::CapabilityError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
        dynamic_cast<const std::invalid_argument*>(&e)) {
        return {ErrorCode::BadRequest, e.what()};
    }
    return {ErrorCode::Internal, e.what()};
}

Response error_response(const ApiError& e) {
    return json_response(Json{{"error", {{"code", error_code_name(e.code())}, {"message", e.what()}}}},
                         http_status(e.code()));
}

std::string sse_frame(const session::Event& e) {
    return "id: " + std::to_string(e.seq) + "\nevent: " + e.kind + "\ndata: " + session::to_json(e).dump() + "\n\n";
}

// ---- worker pool ----------------------------------------------------------------

WorkerPool::WorkerPool(std::size_t threads) {
    for (std::size_t i = 0; i < std::max<std::size_t>(1, threads); ++i) {
        threads_.emplace_back([this] { run(); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void WorkerPool::submit(std::function<void()> job) {
    {
        std::lock_guard lock(mu_);
        jobs_.push_back(std::move(job));
    }
    cv_.notify_one();
}

void WorkerPool::drain() {
    std::unique_lock lock(mu_);
    idle_cv_.wait(lock, [&] { return jobs_.empty() && active_ == 0; });
}

void WorkerPool::run() {
    for (;;) {
        std::function<void()> job;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [&] { return stopping_ || !jobs_.empty(); });
            if (jobs_.empty()) {
                return;
            }
            job = std::move(jobs_.front());
            jobs_.pop_front();
            ++active_;
        }
        try {
            job();
        } catch (const std::exception& e) {
            std::cerr << "background job failed: " << e.what() << "\n";
        }
        {
            std::lock_guard lock(mu_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

// ---- service --------------------------------------------------------------------

ClientFactory client_factory(const agents::ProviderConfig& provider) {
    if (provider.kind == "mock") {
        std::ifstream in(provider.fixtures, std::ios::binary);
        if (!in) {
            throw ConfigError("provider.fixtures", "cannot open " + provider.fixtures.string());
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        auto fixture = std::make_shared<Json>(Json::parse(ss.str()));
        return [fixture] { return std::unique_ptr<agents::CompletionClient>(agents::MockClient::from_json(*fixture)); };
    }
    std::shared_ptr<agents::CompletionClient> shared = agents::make_client(provider);
    return [shared] { return std::unique_ptr<agents::CompletionClient>(std::make_unique<SharedClient>(shared)); };
}

void Service::Entry::refresh() {
    auto s = session->state_json();
    std::lock_guard lock(cache_mu);
    cache = std::move(s);
}

Json Service::Entry::state() const {
    std::lock_guard lock(cache_mu);
    Json out = cache;
    out["optimizing"] = optimizing.load();
    return out;
}

Service::Service(ServiceConfig config, ClientFactory clients)
    : config_(std::move(config)),
      clients_(std::move(clients)),
      catalog_(config_.catalog_path ? catalog::Catalog::load(*config_.catalog_path) : catalog::Catalog::builtin()),
      rag_(config_.rag_path ? agents::RagStore::from_directory(*config_.rag_path) : agents::RagStore::builtin()),
      pool_(config_.workers) {
    fs::create_directories(config_.data_dir);
    load_existing();
}

Service::~Service() { pool_.drain(); }

session::Services Service::services(agents::CompletionClient* client) const { return {client, &catalog_, &rag_}; }

void Service::load_existing() {
    std::vector<fs::path> dirs;
    for (const auto& d : fs::directory_iterator(config_.data_dir)) {
        if (d.is_directory() && fs::exists(d.path() / session::kEventsFile)) {
            dirs.push_back(d.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        auto e = std::make_shared<Entry>();
        e->client = clients_();
        try {
            e->session = session::Session::load(d, services(e->client.get()));
        } catch (const std::exception& ex) {
            std::cerr << "skipping session in " << d << ": " << ex.what() << "\n";
            continue;
        }
        e->log = e->session->log();
        e->room = e->session->room().polygon;
        e->dir = d;
        e->refresh();
        sessions_[e->session->id()] = e;
    }
}

std::vector<std::string> Service::session_ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) {
        out.push_back(id);
    }
    return out;
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Service::Entry> Service::require(const std::string& id) const {
    auto e = find(id);
    if (!e) {
        throw ApiError(ErrorCode::NotFound, "no session '" + id + "'");
    }
    return e;
}

std::shared_ptr<session::EventLog> Service::events(const std::string& id) const {
    const auto e = find(id);
    return e ? e->log : nullptr;
}

void Service::drain() { pool_.drain(); }

Response Service::handle(const Request& request) {
    try {
        if (!config_.api_token.empty() && request.path != "/api/health") {
            const auto it = request.headers.find("authorization");
            if (it == request.headers.end() || it->second != "Bearer " + config_.api_token) {
                throw ApiError(ErrorCode::Unauthorized, "missing or wrong bearer token");
            }
        }
        return route(request);
    } catch (const std::exception& e) {
        return error_response(to_api_error(e));
    }
}

Response Service::route(const Request& r) {
    const auto parts = split_path(r.path);
    const auto& m = r.method;
    auto allow = [&](std::initializer_list<const char*> methods) {
        for (const char* x : methods) {
            if (m == x) {
                return;
            }
        }
        throw ApiError(ErrorCode::MethodNotAllowed, m + " is not allowed on " + r.path);
    };
    if (parts.size() < 2 || parts[0] != "api") {
        throw ApiError(ErrorCode::NotFound, "no route " + r.path);
    }
    if (parts.size() == 2 && parts[1] == "health") {
        allow({"GET"});
        return json_response(Json{{"status", "ok"}});
    }
    if (parts.size() == 2 && parts[1] == "errors") {
        allow({"GET"});
        Json list = Json::array();
        for (const auto c : kAllErrorCodes) {
            list.push_back({{"code", error_code_name(c)}, {"status", http_status(c)}});
        }
        return json_response(list);
    }
    if (parts[1] != "sessions") {
        throw ApiError(ErrorCode::NotFound, "no route " + r.path);
    }
    if (parts.size() == 2) {
        allow({"GET", "POST"});
        if (m == "POST") {
            return create(r);
        }
        return json_response(Json{{"sessions", session_ids()}});
    }
    const auto& id = parts[2];
    if (parts.size() == 3) {
        allow({"GET"});
        return json_response(require(id)->state());
    }
    const auto& op = parts[3];
    if (parts.size() == 4) {
        if (op == "proposal") {
            allow({"GET"});
            const auto state = require(id)->state();
            if (state.at("pending").is_null()) {
                throw session::NoPendingProposal();
            }
            return json_response(state.at("pending"));
        }
        if (op == "advance" || op == "decision" || op == "mode" || op == "edit") {
            allow({"POST"});
            return session_op(id, op, r);
        }
        if (op == "optimize") {
            allow({"POST"});
            return optimize(id);
        }
        if (op == "references") {
            allow({"POST"});
            return references(id, r);
        }
        if (op == "events") {
            allow({"GET"});
            return event_stream(id, r);
        }
        if (op == "events.jsonl" || op == "scene" || op == "loss.csv" || op == "top_view.png") {
            allow({"GET"});
            return artifact(id, op);
        }
    }
    if (parts.size() == 6 && op == "snapshots" && parts[5] == "top_view.png") {
        allow({"GET"});
        return snapshot_png(id, parts[4]);
    }
    throw ApiError(ErrorCode::NotFound, "no route " + r.path);
}

Response Service::create(const Request& r) {
    const auto body = parse_body(r);
    if (!body.contains("room")) {
        throw ApiError(ErrorCode::BadRequest, "create needs a room object");
    }
    auto room = room_spec_from_json(body.at("room"));
    room.validate();
    const auto mode = session::mode_from_string(body.value("mode", std::string("manual")));

    session::SessionOptions defaults;
    defaults.threshold = config_.threshold;
    defaults.max_rounds = config_.max_rounds;
    defaults.anneal = config_.anneal;
    Json opts = session::to_json(defaults);
    if (body.contains("options")) {
        if (!body.at("options").is_object()) {
            throw ApiError(ErrorCode::BadRequest, "options must be an object");
        }
        opts.merge_patch(body.at("options"));
    }
    const auto options = session::options_from_json(opts);

    std::string id;
    {
        std::lock_guard lock(mu_);
        id = body.value("id", room.output_name);
        if (id.empty()) {
            do {
                id = "session-" + std::to_string(next_id_++);
            } while (sessions_.count(id) || fs::exists(config_.data_dir / id));
        }
        if (!valid_id(id)) {
            throw ApiError(ErrorCode::BadRequest, "session id may only use letters, digits, '.', '_' and '-'");
        }
        if (sessions_.count(id)) {
            throw ApiError(ErrorCode::SessionExists, "session '" + id + "' already exists");
        }
        // reserve the id while the session is built
        sessions_[id] = nullptr;
    }
    try {
        auto e = std::make_shared<Entry>();
        e->client = clients_();
        e->dir = config_.data_dir / id;
        e->session = session::Session::create(id, room, mode, options, services(e->client.get()), e->dir);
        e->log = e->session->log();
        e->room = e->session->room().polygon;
        if (!room.reference_images.empty()) {
            e->session->describe_references();
        }
        e->refresh();
        {
            std::lock_guard lock(mu_);
            sessions_[id] = e;
        }
        return json_response(Json{{"id", id}, {"state", e->state()}}, 201);
    } catch (...) {
        std::lock_guard lock(mu_);
        sessions_.erase(id);
        throw;
    }
}

Response Service::session_op(const std::string& id, const std::string& op, const Request& r) {
    const auto e = require(id);
    const auto body = parse_body(r);
    if (e->optimizing) {
        throw ApiError(ErrorCode::Busy, "the session is optimizing");
    }
    std::unique_lock lock(e->op);
    auto& s = *e->session;
    try {
        if (op == "advance") {
            s.advance();
        } else if (op == "decision") {
            if (!body.contains("accept") || !body.at("accept").is_boolean()) {
                throw ApiError(ErrorCode::BadRequest, "decision needs a boolean accept field");
            }
            s.decide({body.at("accept").get<bool>(), body.value("feedback", std::string())});
        } else if (op == "mode") {
            s.set_mode(session::mode_from_string(body.at("mode").get<std::string>()));
        } else {
            s.edit(agents::stage_from_key(body.at("stage").get<std::string>()), body.at("raw").get<std::string>());
        }
    } catch (...) {
        e->refresh();
        throw;
    }
    e->refresh();
    return json_response(e->state());
}

Response Service::optimize(const std::string& id) {
    const auto e = require(id);
    {
        std::unique_lock lock(e->op);
        const auto stage = e->session->stage();
        if (stage == session::Stage::Done || stage == session::Stage::Failed) {
            throw session::SessionClosed();
        }
        if (stage != session::Stage::Optimizing) {
            throw session::InvalidTransition("optimization starts only after the score terms are accepted");
        }
        bool expected = false;
        if (!e->optimizing.compare_exchange_strong(expected, true)) {
            throw ApiError(ErrorCode::Busy, "the session is already optimizing");
        }
    }
    pool_.submit([e] {
        std::unique_lock lock(e->op);
        try {
            e->session->run_optimization();
        } catch (const std::exception& ex) {
            // the session has recorded the failure in its log
            std::cerr << "optimization of " << e->session->id() << " failed: " << ex.what() << "\n";
        }
        e->refresh();
        e->optimizing = false;
    });
    return json_response(Json{{"id", id}, {"status", "optimizing"}, {"events", "/api/sessions/" + id + "/events"}}, 202);
}

Response Service::event_stream(const std::string& id, const Request& r) {
    const auto e = require(id);
    std::uint64_t after = 0;
    if (const auto it = r.query.find("after"); it != r.query.end()) {
        after = parse_seq(it->second, "after");
    } else if (const auto h = r.headers.find("last-event-id"); h != r.headers.end()) {
        after = parse_seq(h->second, "Last-Event-ID");
    }
    std::string body;
    for (const auto& ev : e->log->after(after)) {
        body += sse_frame(ev);
    }
    return {200, "text/event-stream", body, {{"Cache-Control", "no-cache"}}};
}

Response Service::artifact(const std::string& id, const std::string& name) {
    const auto e = require(id);
    if (name == "events.jsonl") {
        return {200, "application/x-ndjson", e->log->jsonl(), {}};
    }
    const auto ex = e->dir / "exports";
    if (name == "scene") {
        return {200, "application/json", read_file(ex / session::kSceneFile), {}};
    }
    if (name == "loss.csv") {
        return {200, "text/csv", read_file(ex / session::kLossFile), {}};
    }
    const auto doc = scene::scene_from_json(Json::parse(read_file(ex / session::kSceneFile)));
    render::RenderOptions ro;
    ro.px_per_m = config_.px_per_m;
    return {200, "image/png", render::encode_png(render::render_top_view(doc, ro)), {}};
}

Response Service::snapshot_png(const std::string& id, const std::string& n) {
    const auto e = require(id);
    const auto seq = parse_seq(n, "snapshot number");
    for (const auto& ev : e->log->after(0)) {
        if (ev.kind == session::event::kSnapshot && ev.payload.at("sequence").get<std::uint64_t>() == seq) {
            render::RenderOptions ro;
            ro.px_per_m = config_.px_per_m;
            const auto objects = scene::objects_from_json(ev.payload.at("objects"));
            return {200, "image/png", render::encode_png(render::render_layout(e->room, objects, ro)), {}};
        }
    }
    throw ApiError(ErrorCode::NotFound, "no snapshot " + n);
}

Response Service::references(const std::string& id, const Request& r) {
    const auto e = require(id);
    if (r.body.empty()) {
        throw ApiError(ErrorCode::BadRequest, "upload the image bytes as the request body");
    }
    if (e->optimizing) {
        throw ApiError(ErrorCode::Busy, "the session is optimizing");
    }
    std::unique_lock lock(e->op);
    const auto dir = e->dir / "references";
    fs::create_directories(dir);
    std::string name;
    if (const auto it = r.query.find("name"); it != r.query.end()) {
        name = it->second;
    } else {
        name = "reference_" + std::to_string(e->session->notes().size() + 1) + ".png";
    }
    if (!valid_id(name)) {
        throw ApiError(ErrorCode::BadRequest, "bad file name");
    }
    const auto path = dir / name;
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << r.body;
    }
    try {
        e->session->add_reference(path.string());
    } catch (...) {
        e->refresh();
        throw;
    }
    e->refresh();
    return json_response(e->state(), 201);
}

// ---- httplib adapter --------------------------------------------------------------

struct HttpServer::Impl {
    Service& service;
    httplib::Server server;
    explicit Impl(Service& s) : service(s) {}
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto& svc = impl_->service;
    auto handler = [&svc](const httplib::Request& hr, httplib::Response& res) {
        Request r;
        r.method = hr.method;
        r.path = hr.path;
        for (const auto& [k, v] : hr.params) {
            r.query.emplace(k, v);
        }
        for (const auto& [k, v] : hr.headers) {
            r.headers.emplace(text::to_lower(k), v);
        }
        r.body = hr.body;

        // live push for event-stream clients
        const auto parts = split_path(r.path);
        const bool wants_stream = hr.get_header_value("Accept").find("text/event-stream") != std::string::npos ||
                                  r.query.count("stream");
        if (r.method == "GET" && wants_stream && parts.size() == 4 && parts[0] == "api" && parts[1] == "sessions" &&
            parts[3] == "events") {
            auto probe = svc.handle(r);
            if (probe.status != 200) {
                res.status = probe.status;
                res.set_content(probe.body, probe.content_type);
                return;
            }
            auto log = svc.events(parts[2]);
            std::uint64_t start = 0;
            if (const auto it = r.query.find("after"); it != r.query.end()) {
                start = static_cast<std::uint64_t>(*text::parse_integer(it->second));
            } else if (const auto h = r.headers.find("last-event-id"); h != r.headers.end()) {
                start = static_cast<std::uint64_t>(*text::parse_integer(h->second));
            }
            auto cursor = std::make_shared<std::uint64_t>(start);
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider("text/event-stream", [log, cursor](std::size_t, httplib::DataSink& sink) {
                const auto batch = log->wait_after(*cursor, std::chrono::milliseconds(500));
                for (const auto& e : batch) {
                    const auto frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size())) {
                        return false;
                    }
                    *cursor = e.seq;
                }
                if (batch.empty()) {
                    if (log->closed()) {
                        sink.done();
                        return true;
                    }
                    static const std::string ping = ": keepalive\n\n";
                    return sink.write(ping.data(), ping.size());
                }
                return true;
            });
            return;
        }
        const auto out = svc.handle(r);
        res.status = out.status;
        for (const auto& [k, v] : out.headers) {
            res.set_header(k, v);
        }
        res.set_content(out.body, out.content_type);
    };
    auto& s = impl_->server;
    s.Get(".*", handler);
    s.Post(".*", handler);
    s.Put(".*", handler);
    s.Delete(".*", handler);
    s.Patch(".*", handler);
    s.set_payload_max_length(32 * 1024 * 1024);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int p = impl_->server.bind_to_any_port(host);
        if (p <= 0) {
            throw std::runtime_error("cannot bind " + host);
        }
        return p;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) {
        impl_->server.stop();
    }
}

}  // namespace codesign::gateway

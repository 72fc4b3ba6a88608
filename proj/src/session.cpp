#include "codesign/session.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "codesign/text.hpp"

namespace codesign::session {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, 6> kStageNames = {"selection", "constraints", "score_terms",
                                                          "optimizing", "done",       "failed"};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out << content;
}

Json score_json(const scoring::Energy& e) { return Json{{"loss", e.loss}, {"violation", e.violation}, {"total", e.total}}; }

Json metrics_to_json(const scene::SceneMetrics& m) {
    return Json{{"final_loss", m.loss},
                {"final_violation", m.violation},
                {"final_total", m.total},
                {"iterations", m.iterations},
                {"seed", m.seed}};
}

scene::SceneMetrics metrics_from_json(const Json& j) {
    return {j.at("final_loss").get<double>(), j.at("final_violation").get<double>(), j.at("final_total").get<double>(),
            j.at("iterations").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
}

Stage next_stage(Stage s) {
    switch (s) {
    case Stage::Selection:
        return Stage::Constraints;
    case Stage::Constraints:
        return Stage::ScoreTerms;
    case Stage::ScoreTerms:
        return Stage::Optimizing;
    default:
        return s;
    }
}

}  // namespace

std::string_view to_string(Mode m) { return m == Mode::Auto ? "auto" : "manual"; }
std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

Mode mode_from_string(std::string_view s) {
    if (s == "auto") {
        return Mode::Auto;
    }
    if (s == "manual") {
        return Mode::Manual;
    }
    throw std::invalid_argument("mode must be manual or auto");
}

Stage stage_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kStageNames.size(); ++i) {
        if (kStageNames[i] == s) {
            return static_cast<Stage>(i);
        }
    }
    throw std::invalid_argument("unknown session stage '" + std::string(s) + "'");
}

std::optional<agents::Stage> rule_stage(Stage s) {
    switch (s) {
    case Stage::Selection:
        return agents::Stage::Selection;
    case Stage::Constraints:
        return agents::Stage::Constraints;
    case Stage::ScoreTerms:
        return agents::Stage::ScoreTerms;
    default:
        return std::nullopt;
    }
}

Json to_json(const SessionOptions& o) {
    const auto& a = o.anneal;
    return Json{{"threshold", o.threshold},
                {"max_rounds", o.max_rounds},
                {"seed", o.seed},
                {"rag_k", o.rag_k},
                {"expert", o.expert},
                {"anneal",
                 {{"iters_large", a.iters_large},
                  {"iters_medium", a.iters_medium},
                  {"iters_small", a.iters_small},
                  {"t0", a.t0},
                  {"t_final", a.t_final},
                  {"moves",
                   {{"translate", a.moves.translate},
                    {"rotate", a.moves.rotate},
                    {"wall_snap", a.moves.wall_snap},
                    {"variant_swap", a.moves.variant_swap}}},
                  {"polish_pass", a.polish_pass},
                  {"snapshot_stride", a.snapshot_stride},
                  {"lambda", a.scoring.lambda},
                  {"hard_weight", a.scoring.hard_weight}}}};
}

SessionOptions options_from_json(const Json& j) {
    SessionOptions o;
    if (j.is_null()) {
        return o;
    }
    if (!j.is_object()) {
        throw std::invalid_argument("options must be an object");
    }
    try {
        o.threshold = j.value("threshold", o.threshold);
        o.max_rounds = j.value("max_rounds", o.max_rounds);
        o.seed = j.value("seed", o.seed);
        o.rag_k = j.value("rag_k", o.rag_k);
        o.expert = j.value("expert", o.expert);
        if (j.contains("anneal")) {
            const auto& a = j.at("anneal");
            auto& c = o.anneal;
            c.iters_large = a.value("iters_large", c.iters_large);
            c.iters_medium = a.value("iters_medium", c.iters_medium);
            c.iters_small = a.value("iters_small", c.iters_small);
            c.t0 = a.value("t0", c.t0);
            c.t_final = a.value("t_final", c.t_final);
            if (a.contains("moves")) {
                const auto& m = a.at("moves");
                c.moves.translate = m.value("translate", c.moves.translate);
                c.moves.rotate = m.value("rotate", c.moves.rotate);
                c.moves.wall_snap = m.value("wall_snap", c.moves.wall_snap);
                c.moves.variant_swap = m.value("variant_swap", c.moves.variant_swap);
            }
            c.polish_pass = a.value("polish_pass", c.polish_pass);
            c.snapshot_stride = a.value("snapshot_stride", c.snapshot_stride);
            c.scoring.lambda = a.value("lambda", c.scoring.lambda);
            c.scoring.hard_weight = a.value("hard_weight", c.scoring.hard_weight);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed options: ") + e.what());
    }
    if (!(o.threshold >= 0 && o.threshold <= 100)) {
        throw std::invalid_argument("threshold must lie in [0, 100]");
    }
    if (o.max_rounds < 1) {
        throw std::invalid_argument("max_rounds must be at least 1");
    }
    o.anneal.validate();
    return o;
}

// ---- events -------------------------------------------------------------------

Json to_json(const Event& e) { return Json{{"seq", e.seq}, {"ts", e.ts}, {"kind", e.kind}, {"payload", e.payload}}; }

Event event_from_json(const Json& j) {
    try {
        return {j.at("seq").get<std::uint64_t>(), j.at("ts").get<std::uint64_t>(), j.at("kind").get<std::string>(),
                j.at("payload")};
    } catch (const nlohmann::json::exception& e) {
        throw SessionError("bad_log", std::string("malformed event record: ") + e.what());
    }
}

std::string event_line(const Event& e) { return to_json(e).dump() + "\n"; }

EventLog::EventLog(fs::path file) : file_(std::move(file)) {}

const Event& EventLog::append(std::string kind, Json payload) {
    std::lock_guard lock(mu_);
    const std::uint64_t seq = events_.empty() ? 1 : events_.back().seq + 1;
    events_.push_back({seq, seq, std::move(kind), std::move(payload)});
    if (file_) {
        std::ofstream out(*file_, std::ios::binary | std::ios::app);
        out << event_line(events_.back());
    }
    cv_.notify_all();
    return events_.back();
}

void EventLog::restore(Event e) {
    std::lock_guard lock(mu_);
    if (!events_.empty() && (e.seq <= events_.back().seq || e.ts < events_.back().ts)) {
        throw SessionError("bad_log", "event sequence numbers must increase");
    }
    events_.push_back(std::move(e));
    cv_.notify_all();
}

std::vector<Event> EventLog::after(std::uint64_t seq) const {
    std::lock_guard lock(mu_);
    std::vector<Event> out;
    for (const auto& e : events_) {
        if (e.seq > seq) {
            out.push_back(e);
        }
    }
    return out;
}

std::vector<Event> EventLog::wait_after(std::uint64_t seq, std::chrono::milliseconds timeout) const {
    {
        std::unique_lock lock(mu_);
        cv_.wait_for(lock, timeout, [&] { return closed_ || (!events_.empty() && events_.back().seq > seq); });
    }
    return after(seq);
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mu_);
    return events_.size();
}

std::uint64_t EventLog::last_seq() const {
    std::lock_guard lock(mu_);
    return events_.empty() ? 0 : events_.back().seq;
}

void EventLog::close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
}

bool EventLog::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

std::string EventLog::jsonl() const {
    std::lock_guard lock(mu_);
    std::string out;
    for (const auto& e : events_) {
        out += event_line(e);
    }
    return out;
}

std::vector<Event> read_event_log(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw SessionError("not_found", "no event log at " + file.string());
    }
    std::vector<Event> out;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) {
            continue;
        }
        try {
            out.push_back(event_from_json(Json::parse(line)));
        } catch (const nlohmann::json::parse_error& e) {
            throw SessionError("bad_log", std::string("unreadable event record: ") + e.what());
        }
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// ---- session ------------------------------------------------------------------

std::unique_ptr<Session> Session::create(std::string id, RoomSpec room, Mode mode, SessionOptions options,
                                         Services services, std::optional<fs::path> dir) {
    room.validate();
    options.anneal.validate();
    if (id.empty()) {
        throw std::invalid_argument("session id must not be empty");
    }
    std::unique_ptr<Session> s(new Session());
    s->services_ = services;
    s->dir_ = dir;
    if (dir) {
        if (fs::exists(*dir / kEventsFile)) {
            throw SessionError("session_exists", "a session already lives in " + dir->string());
        }
        fs::create_directories(*dir / "exports");
        write_file(*dir / kSpecFile, Json{{"id", id},
                                          {"room", codesign::to_json(room)},
                                          {"mode", to_string(mode)},
                                          {"options", to_json(options)}}
                                         .dump(2) +
                                         "\n");
        s->log_ = std::make_shared<EventLog>(*dir / kEventsFile);
    } else {
        s->log_ = std::make_shared<EventLog>();
    }
    s->emit(event::kCreate, Json{{"id", id},
                                 {"room", codesign::to_json(room)},
                                 {"mode", to_string(mode)},
                                 {"options", to_json(options)}});
    return s;
}

std::unique_ptr<Session> Session::replay(const std::vector<Event>& events, Services services,
                                         std::optional<fs::path> dir) {
    if (events.empty() || events.front().kind != event::kCreate) {
        throw SessionError("bad_log", "an event log must start with a create record");
    }
    std::unique_ptr<Session> s(new Session());
    s->services_ = services;
    s->dir_ = dir;
    s->log_ = dir ? std::make_shared<EventLog>(*dir / kEventsFile) : std::make_shared<EventLog>();
    for (const auto& e : events) {
        s->log_->restore(e);
        try {
            s->apply(e);
        } catch (const SessionError&) {
            throw;
        } catch (const std::exception& ex) {
            throw SessionError("bad_log", "event " + std::to_string(e.seq) + " cannot be replayed: " + ex.what());
        }
    }
    return s;
}

std::unique_ptr<Session> Session::load(const fs::path& dir, Services services) {
    return replay(read_event_log(dir / kEventsFile), services, dir);
}

const Event& Session::emit(const char* kind, Json payload) {
    const Event& e = log_->append(kind, std::move(payload));
    apply(e);
    return e;
}

void Session::apply(const Event& e) {
    const auto& p = e.payload;
    const auto& cat = *services_.catalog;
    if (e.kind == event::kCreate) {
        id_ = p.at("id").get<std::string>();
        room_ = room_spec_from_json(p.at("room"));
        mode_ = mode_from_string(p.at("mode").get<std::string>());
        options_ = options_from_json(p.at("options"));
        stage_ = Stage::Selection;
        created_ts_ = e.ts;
    } else if (e.kind == event::kReference) {
        notes_.push_back({p.at("image").get<std::string>(), "reference_guide", p.at("description").get<std::string>()});
    } else if (e.kind == event::kProposal) {
        const auto st = agents::stage_from_key(p.at("stage").get<std::string>());
        const auto raw = p.at("raw").get<std::string>();
        pending_ = Pending{st, raw, "", agents::parse_stage(st, raw, accepted_, cat), std::nullopt,
                           p.value("source", std::string("spatial"))};
        feedback_.reset();
    } else if (e.kind == event::kTranslation) {
        if (pending_) {
            pending_->translated = p.at("text").get<std::string>();
        }
    } else if (e.kind == event::kGrade) {
        const int score = p.at("score").get<int>();
        if (pending_) {
            pending_->score = score;
            candidates_.push_back({pending_->raw, score, p.at("round").get<int>()});
        }
    } else if (e.kind == event::kReject) {
        pending_.reset();
    } else if (e.kind == event::kFeedback) {
        feedback_ = p.at("text").get<std::string>();
    } else if (e.kind == event::kAccept) {
        const auto st = agents::stage_from_key(p.at("stage").get<std::string>());
        const auto raw = p.at("raw").get<std::string>();
        accepted_ = agents::parse_stage(st, raw, accepted_, cat);
        accepted_raw_.push_back(raw);
        pending_.reset();
        feedback_.reset();
        candidates_.clear();
        stage_ = next_stage(stage_);
    } else if (e.kind == event::kModeChange) {
        mode_ = mode_from_string(p.at("to").get<std::string>());
    } else if (e.kind == event::kWarning) {
        if (p.value("key", std::string()) == "text_only_grading") {
            text_only_warned_ = true;
        }
    } else if (e.kind == event::kExport) {
        result_ = Result{scene::objects_from_json(p.at("objects")), metrics_from_json(p.at("metrics")),
                         p.at("files").get<std::vector<std::string>>()};
        stage_ = Stage::Done;
        log_->close();
    } else if (e.kind == event::kError) {
        failure_ = p.at("message").get<std::string>();
        stage_ = Stage::Failed;
        log_->close();
    } else if (e.kind != event::kOptimize && e.kind != event::kSnapshot) {
        throw SessionError("bad_log", "unknown event kind '" + e.kind + "'");
    }
}

void Session::require_open() const {
    if (stage_ == Stage::Done || stage_ == Stage::Failed) {
        throw SessionClosed();
    }
}

void Session::fail(const std::string& code, const std::string& message, Json extra) {
    Json payload{{"code", code}, {"message", message}, {"stage", to_string(stage_)}};
    for (auto it = extra.begin(); it != extra.end(); ++it) {
        payload[it.key()] = it.value();
    }
    emit(event::kError, std::move(payload));
}

void Session::describe_references() {
    for (const auto& img : room_.reference_images) {
        add_reference(img);
    }
}

void Session::add_reference(const std::string& image) {
    require_open();
    if (services_.client == nullptr) {
        throw std::logic_error("no completion client configured");
    }
    try {
        const auto note = agents::describe_reference(image, *services_.client);
        emit(event::kReference, Json{{"image", note.image}, {"description", note.description}});
    } catch (const agents::CapabilityError& e) {
        emit(event::kWarning, Json{{"message", std::string("reference image skipped: ") + e.what()}});
    } catch (const agents::ClientError& e) {
        fail("client_error", e.what());
        throw;
    }
}

void Session::propose(agents::Stage stage) {
    if (services_.client == nullptr) {
        throw std::logic_error("no completion client configured");
    }
    std::vector<std::string> context;
    if (services_.rag != nullptr && options_.rag_k > 0) {
        std::string query = room_.room_type + " " + room_.requirement;
        for (const auto& s : accepted_.selections) {
            query += " " + s.object_name;
        }
        for (auto& hit : agents::retrieve_context(*services_.rag, query, options_.rag_k)) {
            context.push_back(std::move(hit.text));
        }
    }
    std::vector<std::string> notes;
    for (const auto& n : notes_) {
        notes.push_back(n.description);
    }
    const std::string key(agents::stage_key(stage));
    try {
        const auto prop = agents::spatial_propose({stage, &room_, accepted_, feedback_, context, notes},
                                                  *services_.client, *services_.catalog);
        Json warnings = Json::array();
        for (const auto& w : prop.warnings) {
            warnings.push_back(w.message);
        }
        emit(event::kProposal, Json{{"stage", key},
                                    {"raw", prop.raw},
                                    {"attempts", prop.attempts},
                                    {"errors", prop.errors},
                                    {"warnings", warnings},
                                    {"source", "spatial"},
                                    {"prompt", prop.prompt}});
        const auto text = agents::translate(stage, prop.raw, *services_.client);
        emit(event::kTranslation, Json{{"stage", key}, {"text", text}});
    } catch (const agents::StageFailed& e) {
        fail("stage_failed", e.what(), Json{{"attempts", e.attempts()}});
        throw;
    } catch (const agents::ClientError& e) {
        fail("client_error", e.what());
        throw;
    }
}

void Session::advance() {
    require_open();
    const auto stage = rule_stage(stage_);
    if (!stage) {
        throw InvalidTransition("all rule stages are accepted; start the optimization");
    }
    if (mode_ == Mode::Manual) {
        if (pending_) {
            throw InvalidTransition("a proposal is awaiting a decision");
        }
        propose(*stage);
        return;
    }
    auto_round(*stage);
}

void Session::auto_round(agents::Stage stage) {
    const std::string key(agents::stage_key(stage));
    const int first = static_cast<int>(candidates_.size()) + 1;
    for (int round = first; round <= options_.max_rounds; ++round) {
        if (!pending_) {
            propose(stage);
        }
        std::vector<std::string> images = room_.reference_images;
        if (!images.empty() && !services_.client->supports_images()) {
            images.clear();
        }
        if (images.empty() && !text_only_warned_) {
            emit(event::kWarning, Json{{"key", "text_only_grading"},
                                       {"message", "no usable reference images; grading from the rules alone"}});
        }
        int score = 0;
        std::string reply;
        try {
            const auto g = agents::grade(stage, pending_->bundle, room_, images, *services_.client);
            score = g.score;
            reply = g.reply;
        } catch (const agents::UngradableReply& e) {
            emit(event::kWarning, Json{{"message", std::string(e.what()) + "; counted as 0"}});
        } catch (const agents::ClientError& e) {
            fail("client_error", e.what());
            throw;
        }
        emit(event::kGrade, Json{{"stage", key}, {"round", round}, {"score", score}, {"reply", reply}});
        if (score >= options_.threshold) {
            emit(event::kAccept, Json{{"stage", key}, {"raw", pending_->raw}, {"auto", true}, {"round", round}, {"score", score}});
            return;
        }
        if (round < options_.max_rounds) {
            const std::string fb = "grader score " + std::to_string(score) + " below threshold";
            emit(event::kReject, Json{{"stage", key}, {"source", "grader"}});
            emit(event::kFeedback, Json{{"stage", key}, {"text", fb}, {"source", "grader"}});
        }
    }
    const auto best = std::max_element(candidates_.begin(), candidates_.end(),
                                       [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    const Candidate chosen = *best;
    emit(event::kWarning, Json{{"message", "no proposal reached the threshold after " +
                                               std::to_string(options_.max_rounds) + " rounds; accepting round " +
                                               std::to_string(chosen.round) + " with score " +
                                               std::to_string(chosen.score)}});
    emit(event::kAccept,
         Json{{"stage", key}, {"raw", chosen.raw}, {"auto", true}, {"round", chosen.round}, {"score", chosen.score}});
}

void Session::decide(const Decision& d) {
    require_open();
    if (mode_ == Mode::Auto) {
        throw WrongMode("decisions are made by the grader in auto mode");
    }
    if (!pending_) {
        throw NoPendingProposal();
    }
    const std::string key(agents::stage_key(pending_->stage));
    if (d.accept) {
        emit(event::kAccept, Json{{"stage", key}, {"raw", pending_->raw}, {"auto", false}});
        return;
    }
    emit(event::kReject, Json{{"stage", key}, {"source", "user"}});
    if (!text::trim(d.feedback).empty()) {
        emit(event::kFeedback, Json{{"stage", key}, {"text", d.feedback}, {"source", "user"}});
    }
}

void Session::set_mode(Mode m) {
    require_open();
    emit(event::kModeChange, Json{{"from", to_string(mode_)}, {"to", to_string(m)}});
}

void Session::edit(agents::Stage stage, const std::string& raw) {
    require_open();
    if (!options_.expert) {
        throw SessionError("forbidden", "raw rule editing needs the expert option");
    }
    if (mode_ == Mode::Auto) {
        throw WrongMode("edits are only accepted in manual mode");
    }
    if (rule_stage(stage_) != stage) {
        throw InvalidTransition("the session is not at the " + std::string(agents::stage_key(stage)) + " stage");
    }
    agents::parse_stage(stage, raw, accepted_, *services_.catalog);
    const std::string key(agents::stage_key(stage));
    emit(event::kProposal, Json{{"stage", key},
                                {"raw", raw},
                                {"attempts", Json::array({raw})},
                                {"errors", Json::array()},
                                {"warnings", Json::array()},
                                {"source", "edit"},
                                {"prompt", ""}});
    if (services_.client != nullptr) {
        emit(event::kTranslation, Json{{"stage", key}, {"text", agents::translate(stage, raw, *services_.client)}});
    }
}

Outcome Session::run_optimization(const std::function<void(const annealer::Snapshot&)>& on_snapshot) {
    require_open();
    if (stage_ != Stage::Optimizing) {
        throw InvalidTransition("optimization starts only after the score terms are accepted");
    }
    auto cfg = options_.anneal;
    cfg.seed = options_.seed;
    emit(event::kOptimize, Json{{"seed", cfg.seed},
                                {"iters_large", cfg.iters_large},
                                {"iters_medium", cfg.iters_medium},
                                {"iters_small", cfg.iters_small}});
    scoring::Layout layout;
    try {
        layout = annealer::initial_layout(accepted_, room_.polygon, *services_.catalog, cfg.seed);
    } catch (const annealer::Unplaceable& e) {
        fail("unplaceable", e.what(), Json{{"instance", e.instance_id()}});
        throw;
    }
    const auto run = annealer::optimize(accepted_, layout, cfg, *services_.catalog, [&](const annealer::Snapshot& s) {
        emit(event::kSnapshot, Json{{"sequence", s.sequence},
                                    {"final", s.final},
                                    {"energy", score_json(s.energy)},
                                    {"objects", scene::objects_to_json(scene::objects_of(s.layout))}});
        if (on_snapshot) {
            on_snapshot(s);
        }
    });

    Outcome out;
    out.trace = run.trace;
    auto& doc = out.scene;
    doc.name = room_.output_name.empty() ? id_ : room_.output_name;
    doc.room = room_;
    doc.objects = scene::objects_of(run.layout);
    doc.metrics = {run.energy.loss, run.energy.violation, run.energy.total, run.trace.size(), cfg.seed};
    doc.bundle = accepted_;
    doc.created_ts = created_ts_;
    doc.finished_ts = log_->last_seq() + 1;

    std::vector<std::string> files;
    if (dir_) {
        const auto ex = *dir_ / "exports";
        fs::create_directories(ex);
        write_file(ex / kSceneFile, scene::to_json(doc).dump(2) + "\n");
        write_file(ex / kLossFile, annealer::trace_csv(run.trace));
        files = {kSceneFile, kLossFile, kLogFile};
    }
    emit(event::kExport, Json{{"files", files},
                              {"metrics", metrics_to_json(doc.metrics)},
                              {"objects", scene::objects_to_json(doc.objects)}});
    if (dir_) {
        write_file(*dir_ / "exports" / kLogFile, log_->jsonl());
    }
    return out;
}

Json Session::state_json() const {
    const auto texts = ruledsl::serialize(accepted_);
    Json pending = nullptr;
    if (pending_) {
        pending = Json{{"stage", agents::stage_key(pending_->stage)},
                       {"raw", pending_->raw},
                       {"translated", pending_->translated},
                       {"score", pending_->score ? Json(*pending_->score) : Json(nullptr)},
                       {"source", pending_->source}};
    }
    Json notes = Json::array();
    for (const auto& n : notes_) {
        notes.push_back({{"image", n.image}, {"description", n.description}});
    }
    Json cands = Json::array();
    for (const auto& c : candidates_) {
        cands.push_back({{"round", c.round}, {"score", c.score}, {"raw", c.raw}});
    }
    Json result = nullptr;
    if (result_) {
        result = Json{{"objects", scene::objects_to_json(result_->objects)},
                      {"metrics", metrics_to_json(result_->metrics)},
                      {"files", result_->files}};
    }
    return Json{{"id", id_},
                {"mode", to_string(mode_)},
                {"stage", to_string(stage_)},
                {"accepted",
                 {{"selection", texts.selection}, {"constraints", texts.constraints}, {"score_terms", texts.score_terms}}},
                {"accepted_raw", accepted_raw_},
                {"pending", pending},
                {"feedback", feedback_ ? Json(*feedback_) : Json(nullptr)},
                {"notes", notes},
                {"candidates", cands},
                {"result", result},
                {"failure", failure_},
                {"events", log_->size()}};
}

std::uint64_t Session::state_hash() const { return fnv1a64(state_json().dump()); }

}  // namespace codesign::session

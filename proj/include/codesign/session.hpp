#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "codesign/agents.hpp"
#include "codesign/annealer.hpp"
#include "codesign/room_spec.hpp"
#include "codesign/scene.hpp"

// The three-stage decision loop, its event log and the optimization hand-off.
namespace codesign::session {

enum class Mode { Manual, Auto };
enum class Stage { Selection, Constraints, ScoreTerms, Optimizing, Done, Failed };

std::string_view to_string(Mode m);
std::string_view to_string(Stage s);
Mode mode_from_string(std::string_view s);
Stage stage_from_string(std::string_view s);
/// The rule stage a decision stage works on; nullopt past ScoreTerms.
std::optional<agents::Stage> rule_stage(Stage s);

struct SessionOptions {
    double threshold = 75.0;
    int max_rounds = 3;
    std::uint64_t seed = 0;
    annealer::AnnealConfig anneal;
    std::size_t rag_k = 3;
    /// Allows direct edits of the raw rule text.
    bool expert = false;
};

Json to_json(const SessionOptions& o);
SessionOptions options_from_json(const Json& j);

namespace event {
inline constexpr const char* kCreate = "create";
inline constexpr const char* kReference = "reference";
inline constexpr const char* kProposal = "proposal";
inline constexpr const char* kTranslation = "translation";
inline constexpr const char* kGrade = "grade";
inline constexpr const char* kAccept = "accept";
inline constexpr const char* kReject = "reject";
inline constexpr const char* kFeedback = "feedback";
inline constexpr const char* kModeChange = "mode_change";
inline constexpr const char* kWarning = "warning";
inline constexpr const char* kOptimize = "optimize";
inline constexpr const char* kSnapshot = "snapshot";
inline constexpr const char* kExport = "export";
inline constexpr const char* kError = "error";
}  // namespace event

struct Event {
    std::uint64_t seq = 0;
    /// Logical clock: strictly increasing, independent of wall time.
    std::uint64_t ts = 0;
    std::string kind;
    Json payload;

    friend bool operator==(const Event&, const Event&) = default;
};

Json to_json(const Event& e);
Event event_from_json(const Json& j);
std::string event_line(const Event& e);

/// Append-only, thread-safe event list with an optional line-delimited file mirror.
class EventLog {
public:
    EventLog() = default;
    explicit EventLog(std::filesystem::path file);

    const Event& append(std::string kind, Json payload);
    /// Re-inserts an already numbered event (replay).
    void restore(Event e);
    std::vector<Event> after(std::uint64_t seq) const;
    /// Blocks until an event newer than `seq` exists, the log is closed, or the timeout passes.
    std::vector<Event> wait_after(std::uint64_t seq, std::chrono::milliseconds timeout) const;
    std::size_t size() const;
    std::uint64_t last_seq() const;
    /// Marks the log finished so waiters return immediately.
    void close();
    bool closed() const;
    std::string jsonl() const;

private:
    mutable std::mutex mu_;
    mutable std::condition_variable cv_;
    std::vector<Event> events_;
    std::optional<std::filesystem::path> file_;
    bool closed_ = false;
};

std::vector<Event> read_event_log(const std::filesystem::path& file);

class SessionError : public std::runtime_error {
public:
    SessionError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct NoPendingProposal : SessionError {
    NoPendingProposal() : SessionError("no_pending_proposal", "there is no proposal awaiting a decision") {}
};
struct WrongMode : SessionError {
    explicit WrongMode(const std::string& m) : SessionError("wrong_mode", m) {}
};
struct SessionClosed : SessionError {
    SessionClosed() : SessionError("session_closed", "the session has finished") {}
};
struct InvalidTransition : SessionError {
    explicit InvalidTransition(const std::string& m) : SessionError("invalid_transition", m) {}
};

struct Pending {
    agents::Stage stage = agents::Stage::Selection;
    std::string raw;
    std::string translated;
    ruledsl::RuleBundle bundle;
    std::optional<int> score;
    std::string source;

    friend bool operator==(const Pending&, const Pending&) = default;
};

struct Candidate {
    std::string raw;
    int score = 0;
    int round = 0;
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct Decision {
    bool accept = true;
    std::string feedback;

    static Decision accepted() { return {true, {}}; }
    static Decision rejected(std::string feedback) { return {false, std::move(feedback)}; }
};

struct Services {
    agents::CompletionClient* client = nullptr;
    const catalog::Catalog* catalog = &catalog::Catalog::builtin();
    const agents::RagStore* rag = nullptr;
};

struct Result {
    std::vector<scene::SceneObject> objects;
    scene::SceneMetrics metrics;
    std::vector<std::string> files;

    friend bool operator==(const Result&, const Result&) = default;
};

struct Outcome {
    scene::SceneDocument scene;
    annealer::LossTrace trace;
};

/// Export file names inside <session dir>/exports.
inline constexpr const char* kSceneFile = "scene.json";
inline constexpr const char* kLossFile = "loss.csv";
inline constexpr const char* kLogFile = "log.jsonl";
inline constexpr const char* kEventsFile = "events.jsonl";
inline constexpr const char* kSpecFile = "spec.json";

class Session {
public:
    /// Validates the room and records the creation event; `dir`, when set, receives
    /// spec.json and events.jsonl and must not already hold a session.
    static std::unique_ptr<Session> create(std::string id, RoomSpec room, Mode mode, SessionOptions options,
                                           Services services, std::optional<std::filesystem::path> dir = {});
    /// Rebuilds a session from its event records without calling any agent.
    static std::unique_ptr<Session> replay(const std::vector<Event>& events, Services services,
                                           std::optional<std::filesystem::path> dir = {});
    static std::unique_ptr<Session> load(const std::filesystem::path& dir, Services services);

    const std::string& id() const { return id_; }
    const RoomSpec& room() const { return room_; }
    const SessionOptions& options() const { return options_; }
    Mode mode() const { return mode_; }
    Stage stage() const { return stage_; }
    const ruledsl::RuleBundle& accepted() const { return accepted_; }
    const std::vector<std::string>& accepted_raw() const { return accepted_raw_; }
    const std::optional<Pending>& pending() const { return pending_; }
    const std::optional<std::string>& feedback() const { return feedback_; }
    const std::vector<agents::ReferenceNote>& notes() const { return notes_; }
    const std::vector<Candidate>& candidates() const { return candidates_; }
    const std::optional<Result>& result() const { return result_; }
    const std::string& failure() const { return failure_; }
    const std::optional<std::filesystem::path>& dir() const { return dir_; }
    std::shared_ptr<EventLog> log() const { return log_; }

    /// Runs the reference agent over the room's reference images.
    void describe_references();
    /// Describes one uploaded image and keeps its note for later prompts.
    void add_reference(const std::string& image);
    void advance();
    void decide(const Decision& d);
    void set_mode(Mode m);
    /// Replaces the current stage's proposal with hand-written rules (expert option only).
    void edit(agents::Stage stage, const std::string& raw);
    Outcome run_optimization(const std::function<void(const annealer::Snapshot&)>& on_snapshot = {});

    Json state_json() const;
    std::uint64_t state_hash() const;

private:
    Session() = default;
    const Event& emit(const char* kind, Json payload);
    void apply(const Event& e);
    void require_open() const;
    void propose(agents::Stage stage);
    void auto_round(agents::Stage stage);
    void fail(const std::string& code, const std::string& message, Json extra = Json::object());

    std::string id_;
    RoomSpec room_;
    SessionOptions options_;
    Mode mode_ = Mode::Manual;
    Stage stage_ = Stage::Selection;
    ruledsl::RuleBundle accepted_;
    std::vector<std::string> accepted_raw_;
    std::optional<Pending> pending_;
    std::optional<std::string> feedback_;
    std::vector<agents::ReferenceNote> notes_;
    std::vector<Candidate> candidates_;
    std::optional<Result> result_;
    std::string failure_;
    bool text_only_warned_ = false;
    std::uint64_t created_ts_ = 0;
    Services services_;
    std::optional<std::filesystem::path> dir_;
    std::shared_ptr<EventLog> log_;
};

std::uint64_t fnv1a64(std::string_view data);

}  // namespace codesign::session

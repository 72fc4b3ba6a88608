#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "codesign/catalog.hpp"
#include "codesign/room_spec.hpp"
#include "codesign/ruledsl.hpp"

// The four rule-writing agents, the batch evaluator and the completion clients behind them.
namespace codesign::agents {

enum class Stage { Selection, Constraints, ScoreTerms };
inline constexpr std::array kStages = {Stage::Selection, Stage::Constraints, Stage::ScoreTerms};
std::string_view stage_key(Stage s);
/// Throws std::invalid_argument for anything but selection|constraints|score_terms.
Stage stage_from_key(std::string_view key);

enum class Role { Reference, Spatial, Interactive, Grader, Evaluator };
std::string_view role_key(Role r);

// ---- completion clients ----------------------------------------------------

struct CompletionRequest {
    Role agent = Role::Spatial;
    std::string stage;
    std::string prompt;
    std::vector<std::string> images;
};

class ClientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised before any call when a request needs images the client cannot take.
class CapabilityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    virtual std::string complete(const CompletionRequest& request) = 0;
    virtual bool supports_images() const = 0;
};

/// Replays canned responses keyed by (agent, stage, attempt). The attempt is the
/// 1-based count of calls made so far for that (agent, stage) pair; when no record
/// exists for it, the record with the highest smaller attempt is reused.
/// Fixture format:
///   {"supports_images": true,
///    "responses": [{"agent": "spatial", "stage": "selection", "attempt": 1, "text": "..."},
///                  {"agent": "grader", "stage": "selection", "attempt": 1, "error": "timeout"}]}
class MockClient : public CompletionClient {
public:
    struct Record {
        std::string agent;
        std::string stage;
        int attempt = 1;
        std::string text;
        /// When set, the call fails with ClientError carrying this message.
        std::optional<std::string> error;
    };

    explicit MockClient(std::vector<Record> records = {}, bool supports_images = true);
    static std::unique_ptr<MockClient> from_json(const Json& fixture);
    static std::unique_ptr<MockClient> load(const std::filesystem::path& path);

    void add(Role agent, std::string_view stage, int attempt, std::string text);
    std::string complete(const CompletionRequest& request) override;
    bool supports_images() const override { return images_; }

    /// Every request received, in order.
    std::vector<CompletionRequest> captured() const;
    std::size_t calls(Role agent, std::string_view stage) const;

private:
    mutable std::mutex mu_;
    std::vector<Record> records_;
    bool images_;
    std::map<std::pair<std::string, std::string>, int> counts_;
    std::vector<CompletionRequest> captured_;
};

struct ProviderConfig {
    /// "mock" or "live".
    std::string kind = "mock";
    std::filesystem::path fixtures;
    /// Live provider: base URL such as http://localhost:8000 and a chat-completions path.
    std::string endpoint;
    std::string path = "/v1/chat/completions";
    std::string model;
    /// Name of the environment variable holding the bearer credential.
    std::string api_key_env;
    double timeout_s = 60.0;
    int max_retries = 2;
    bool supports_images = false;
};

ProviderConfig provider_config_from_json(const Json& j);

/// OpenAI-style chat-completions client over HTTP(S).
class LiveClient : public CompletionClient {
public:
    explicit LiveClient(ProviderConfig config);
    std::string complete(const CompletionRequest& request) override;
    bool supports_images() const override { return config_.supports_images; }

    /// Request body sent for `request`; exposed for tests.
    Json request_body(const CompletionRequest& request) const;
    /// Extracts choices[0].message.content; throws ClientError otherwise.
    static std::string parse_reply(const std::string& body);

private:
    ProviderConfig config_;
};

std::unique_ptr<CompletionClient> make_client(const ProviderConfig& config);

// ---- prompt templates --------------------------------------------------------

enum class TemplateId {
    SpatialSelection,
    SpatialConstraints,
    SpatialScoreTerms,
    InteractiveSelection,
    InteractiveConstraints,
    InteractiveScoreTerms,
    ReferenceGuide,
    Grader,
    Evaluator,
};

inline constexpr std::array kAllTemplates = {
    TemplateId::SpatialSelection,       TemplateId::SpatialConstraints,    TemplateId::SpatialScoreTerms,
    TemplateId::InteractiveSelection,   TemplateId::InteractiveConstraints, TemplateId::InteractiveScoreTerms,
    TemplateId::ReferenceGuide,         TemplateId::Grader,                 TemplateId::Evaluator,
};

/// Resource path of the template body, e.g. "prompts/spatial_selection.txt".
std::string_view template_resource(TemplateId id);
std::string_view template_body(TemplateId id);
TemplateId spatial_template(Stage s);
TemplateId interactive_template(Stage s);
/// Placeholder names in order of first appearance.
std::vector<std::string> placeholders(std::string_view body);

class MissingPlaceholder : public std::invalid_argument {
public:
    explicit MissingPlaceholder(std::string name)
        : std::invalid_argument("prompt placeholder {" + name + "} has no binding"), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

std::string render_template(std::string_view body, const Bindings& bindings);
std::string render_prompt(TemplateId id, const Bindings& bindings);

inline constexpr std::string_view kFeedbackHeader = "USER FEEDBACK";
inline constexpr std::string_view kGuidelinesHeader = "DESIGN GUIDELINES";
inline constexpr std::string_view kRepairHeader = "PARSE ERROR";

// ---- retrieval ------------------------------------------------------------------

struct RagDocument {
    std::string id;
    std::vector<std::string> tags;
    std::string text;
};

struct RagHit {
    std::string id;
    double score = 0.0;
    std::string text;
};

/// Lower-cased alphanumeric runs.
std::vector<std::string> tokenize(std::string_view s);

class RagStore {
public:
    RagStore() = default;
    explicit RagStore(std::vector<RagDocument> docs);
    /// Every *.txt file; a first line "tags: a, b" sets the tags. The file stem is the id.
    static RagStore from_directory(const std::filesystem::path& dir);
    /// Snippets compiled in from data/rag.
    static RagStore builtin();
    static RagDocument parse_document(std::string id, std::string_view content);

    const std::vector<RagDocument>& documents() const { return docs_; }
    /// Sum over distinct query tokens of their count in the text, plus 2 per matching tag.
    static double score(const RagDocument& doc, std::string_view query);

private:
    std::vector<RagDocument> docs_;
};

/// Top-k documents with a positive score; ties broken by ascending id.
std::vector<RagHit> retrieve_context(const RagStore& store, std::string_view query, std::size_t k);

// ---- spatial agent ----------------------------------------------------------------

inline constexpr int kMaxAttempts = 3;

class StageOrderError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class StageFailed : public std::runtime_error {
public:
    StageFailed(Stage stage, std::vector<std::string> attempts, const std::string& last_error);
    Stage stage() const { return stage_; }
    const std::vector<std::string>& attempts() const { return attempts_; }

private:
    Stage stage_;
    std::vector<std::string> attempts_;
};

struct Proposal {
    Stage stage = Stage::Selection;
    /// Text of the accepted attempt.
    std::string raw;
    /// Every raw reply in order, including failed parses.
    std::vector<std::string> attempts;
    /// Parse errors of the failed attempts.
    std::vector<std::string> errors;
    /// Last prompt sent.
    std::string prompt;
    /// `prior` with this stage's rules filled in.
    ruledsl::RuleBundle bundle;
    std::vector<ruledsl::Warning> warnings;
};

struct ProposeInput {
    Stage stage = Stage::Selection;
    const RoomSpec* room = nullptr;
    ruledsl::RuleBundle prior;
    std::optional<std::string> feedback;
    std::vector<std::string> context;
    std::vector<std::string> reference_notes;
};

/// Template bindings for one spatial stage.
Bindings spatial_bindings(Stage stage, const RoomSpec& room, const ruledsl::RuleBundle& prior,
                          const std::vector<std::string>& reference_notes = {});
/// Rendered template with feedback and guidelines appended under fixed headers.
std::string spatial_prompt(const ProposeInput& in);

/// Parses and validates one stage's raw text on top of `prior`; throws ruledsl::ParseError.
ruledsl::RuleBundle parse_stage(Stage stage, std::string_view raw, const ruledsl::RuleBundle& prior,
                                const catalog::Catalog& cat, std::vector<ruledsl::Warning>* warnings = nullptr);
/// Throws StageOrderError when an earlier stage's rules are missing from `prior`.
void check_stage_order(Stage stage, const ruledsl::RuleBundle& prior);

Proposal spatial_propose(const ProposeInput& in, CompletionClient& client,
                         const catalog::Catalog& cat = catalog::Catalog::builtin());

// ---- interactive, grader, reference, evaluator ---------------------------------------

/// Plain-language paraphrase; the reply is returned verbatim.
std::string translate(Stage stage, std::string_view raw_text, CompletionClient& client);

class UngradableReply : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GradeResult {
    int score = 0;
    std::string reply;
    std::string prompt;
};

/// First integer in [0, 100], ignoring signed and out-of-range numbers.
int parse_grade(std::string_view reply);
Bindings grader_bindings(Stage stage, const ruledsl::RuleBundle& bundle, const RoomSpec& room);
GradeResult grade(Stage stage, const ruledsl::RuleBundle& bundle, const RoomSpec& room,
                  const std::vector<std::string>& reference_images, CompletionClient& client);

struct ReferenceNote {
    std::string image;
    std::string guide_id = "reference_guide";
    std::string description;
};

ReferenceNote describe_reference(const std::string& image, CompletionClient& client);
std::vector<ReferenceNote> describe_references(const std::vector<std::string>& images, CompletionClient& client);

struct Evaluation {
    int user_intent = 0;
    int aesthetic = 0;
    int functionality = 0;
    int circulation = 0;
    std::string rationale;

    double average() const { return (user_intent + aesthetic + functionality + circulation) / 4.0; }
    std::array<int, 4> scores() const { return {user_intent, aesthetic, functionality, circulation}; }
};

inline constexpr std::array<std::string_view, 4> kCriteria = {"user_intent", "aesthetic", "functionality",
                                                              "circulation"};

/// Needs every criterion label followed by an integer in [0, 10].
Evaluation parse_evaluation(std::string_view reply);
std::string evaluator_prompt(const RoomSpec& room, std::string_view rubric);
/// The shipped rubric document.
std::string_view builtin_rubric();
Evaluation evaluate_design(const std::string& top_view_image, const RoomSpec& room, std::string_view rubric,
                           CompletionClient& client);

}  // namespace codesign::agents

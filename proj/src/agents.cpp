#include "codesign/agents.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "codesign/resources.hpp"
#include "codesign/text.hpp"
#include "httplib.h"

namespace codesign::agents {

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string names_of(const std::vector<ruledsl::SelectionItem>& items) {
    std::vector<std::string> names;
    for (const auto& s : items) {
        names.push_back(s.object_name);
    }
    return text::join(names, ", ");
}

std::string or_none(const std::string& s) { return s.empty() ? "none" : s; }

void require_images(const CompletionClient& client, const std::vector<std::string>& images) {
    if (!images.empty() && !client.supports_images()) {
        throw CapabilityError("the configured completion client cannot take images");
    }
}

}  // namespace

std::string_view stage_key(Stage s) {
    switch (s) {
    case Stage::Selection:
        return "selection";
    case Stage::Constraints:
        return "constraints";
    case Stage::ScoreTerms:
        return "score_terms";
    }
    return "selection";
}

Stage stage_from_key(std::string_view key) {
    for (const auto s : kStages) {
        if (stage_key(s) == key) {
            return s;
        }
    }
    throw std::invalid_argument("unknown stage '" + std::string(key) + "'");
}

std::string_view role_key(Role r) {
    switch (r) {
    case Role::Reference:
        return "reference";
    case Role::Spatial:
        return "spatial";
    case Role::Interactive:
        return "interactive";
    case Role::Grader:
        return "grader";
    case Role::Evaluator:
        return "evaluator";
    }
    return "spatial";
}

// ---- mock client ---------------------------------------------------------------

MockClient::MockClient(std::vector<Record> records, bool supports_images)
    : records_(std::move(records)), images_(supports_images) {}

std::unique_ptr<MockClient> MockClient::from_json(const Json& fixture) {
    if (!fixture.is_object() || !fixture.contains("responses") || !fixture.at("responses").is_array()) {
        throw std::invalid_argument("mock fixture needs a 'responses' list");
    }
    std::vector<Record> records;
    for (const auto& r : fixture.at("responses")) {
        Record rec;
        try {
            rec.agent = r.at("agent").get<std::string>();
            rec.stage = r.value("stage", std::string());
            rec.attempt = r.value("attempt", 1);
            rec.text = r.value("text", std::string());
            if (r.contains("error")) {
                rec.error = r.at("error").get<std::string>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument(std::string("malformed mock record: ") + e.what());
        }
        if (rec.attempt < 1) {
            throw std::invalid_argument("mock record attempt must be >= 1");
        }
        records.push_back(std::move(rec));
    }
    return std::make_unique<MockClient>(std::move(records), fixture.value("supports_images", true));
}

std::unique_ptr<MockClient> MockClient::load(const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("mock fixture " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void MockClient::add(Role agent, std::string_view stage, int attempt, std::string text) {
    std::lock_guard lock(mu_);
    records_.push_back({std::string(role_key(agent)), std::string(stage), attempt, std::move(text), std::nullopt});
}

std::string MockClient::complete(const CompletionRequest& request) {
    std::lock_guard lock(mu_);
    captured_.push_back(request);
    const std::string agent(role_key(request.agent));
    const int n = ++counts_[{agent, request.stage}];
    const Record* best = nullptr;
    for (const auto& r : records_) {
        if (r.agent == agent && r.stage == request.stage && r.attempt <= n &&
            (best == nullptr || r.attempt > best->attempt)) {
            best = &r;
        }
    }
    if (best == nullptr) {
        throw ClientError("no scripted response for " + agent + "/" + request.stage + " attempt " + std::to_string(n));
    }
    if (best->error) {
        throw ClientError(*best->error);
    }
    return best->text;
}

std::vector<CompletionRequest> MockClient::captured() const {
    std::lock_guard lock(mu_);
    return captured_;
}

std::size_t MockClient::calls(Role agent, std::string_view stage) const {
    std::lock_guard lock(mu_);
    const auto it = counts_.find({std::string(role_key(agent)), std::string(stage)});
    return it == counts_.end() ? 0 : static_cast<std::size_t>(it->second);
}

// ---- live client -----------------------------------------------------------------

ProviderConfig provider_config_from_json(const Json& j) {
    ProviderConfig c;
    c.kind = j.value("kind", c.kind);
    if (c.kind != "mock" && c.kind != "live") {
        throw std::invalid_argument("provider kind must be mock or live");
    }
    c.fixtures = j.value("fixtures", std::string());
    c.endpoint = j.value("endpoint", std::string());
    c.path = j.value("path", c.path);
    c.model = j.value("model", std::string());
    c.api_key_env = j.value("api_key_env", std::string());
    c.timeout_s = j.value("timeout_s", c.timeout_s);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.supports_images = j.value("supports_images", c.supports_images);
    return c;
}

LiveClient::LiveClient(ProviderConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty() || config_.model.empty()) {
        throw std::invalid_argument("live provider needs an endpoint and a model");
    }
}

Json LiveClient::request_body(const CompletionRequest& request) const {
    Json content = Json::array();
    content.push_back({{"type", "text"}, {"text", request.prompt}});
    for (const auto& img : request.images) {
        const std::string data = httplib::detail::base64_encode(read_file(img));
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + data}}}});
    }
    return Json{{"model", config_.model}, {"messages", Json::array({{{"role", "user"}, {"content", content}}})}};
}

std::string LiveClient::parse_reply(const std::string& body) {
    try {
        const auto j = Json::parse(body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ClientError(std::string("unexpected provider reply: ") + e.what());
    }
}

std::string LiveClient::complete(const CompletionRequest& request) {
    require_images(*this, request.images);
    httplib::Client cli(config_.endpoint);
    const auto secs = static_cast<time_t>(config_.timeout_s);
    cli.set_read_timeout(secs, 0);
    cli.set_write_timeout(secs, 0);
    cli.set_connection_timeout(secs, 0);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    const std::string body = request_body(request).dump();
    std::string last = "no attempt made";
    for (int i = 0; i <= config_.max_retries; ++i) {
        auto res = cli.Post(config_.path, headers, body, "application/json");
        if (!res) {
            last = "transport error: " + httplib::to_string(res.error());
        } else if (res->status >= 500 || res->status == 429) {
            last = "provider returned HTTP " + std::to_string(res->status);
        } else if (res->status != 200) {
            throw ClientError("provider returned HTTP " + std::to_string(res->status));
        } else {
            return parse_reply(res->body);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(200 * (i + 1)));
    }
    throw ClientError(last);
}

std::unique_ptr<CompletionClient> make_client(const ProviderConfig& config) {
    if (config.kind == "live") {
        return std::make_unique<LiveClient>(config);
    }
    return MockClient::load(config.fixtures);
}

// ---- templates ---------------------------------------------------------------

std::string_view template_resource(TemplateId id) {
    switch (id) {
    case TemplateId::SpatialSelection:
        return "prompts/spatial_selection.txt";
    case TemplateId::SpatialConstraints:
        return "prompts/spatial_constraints.txt";
    case TemplateId::SpatialScoreTerms:
        return "prompts/spatial_score_terms.txt";
    case TemplateId::InteractiveSelection:
        return "prompts/interactive_selection.txt";
    case TemplateId::InteractiveConstraints:
        return "prompts/interactive_constraints.txt";
    case TemplateId::InteractiveScoreTerms:
        return "prompts/interactive_score_terms.txt";
    case TemplateId::ReferenceGuide:
        return "prompts/reference_guide.txt";
    case TemplateId::Grader:
        return "prompts/grader.txt";
    case TemplateId::Evaluator:
        return "prompts/evaluator.txt";
    }
    return "";
}

std::string_view template_body(TemplateId id) {
    const auto body = embedded_resource(template_resource(id));
    if (!body) {
        throw std::logic_error("prompt template " + std::string(template_resource(id)) + " is not compiled in");
    }
    return *body;
}

TemplateId spatial_template(Stage s) {
    switch (s) {
    case Stage::Selection:
        return TemplateId::SpatialSelection;
    case Stage::Constraints:
        return TemplateId::SpatialConstraints;
    case Stage::ScoreTerms:
        return TemplateId::SpatialScoreTerms;
    }
    return TemplateId::SpatialSelection;
}

TemplateId interactive_template(Stage s) {
    switch (s) {
    case Stage::Selection:
        return TemplateId::InteractiveSelection;
    case Stage::Constraints:
        return TemplateId::InteractiveConstraints;
    case Stage::ScoreTerms:
        return TemplateId::InteractiveScoreTerms;
    }
    return TemplateId::InteractiveSelection;
}

namespace {

// Length of a placeholder "{name}" starting at body[i], or 0.
std::size_t placeholder_at(std::string_view body, std::size_t i) {
    if (body[i] != '{') {
        return 0;
    }
    std::size_t j = i + 1;
    while (j < body.size() && (std::islower(static_cast<unsigned char>(body[j])) || body[j] == '_')) {
        ++j;
    }
    if (j == i + 1 || j >= body.size() || body[j] != '}') {
        return 0;
    }
    return j - i + 1;
}

}  // namespace

std::vector<std::string> placeholders(std::string_view body) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (const auto len = placeholder_at(body, i)) {
            std::string name(body.substr(i + 1, len - 2));
            if (std::find(out.begin(), out.end(), name) == out.end()) {
                out.push_back(std::move(name));
            }
            i += len - 1;
        }
    }
    return out;
}

std::string render_template(std::string_view body, const Bindings& bindings) {
    for (const auto& name : placeholders(body)) {
        if (!bindings.contains(name)) {
            throw MissingPlaceholder(name);
        }
    }
    std::string out;
    out.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (const auto len = placeholder_at(body, i)) {
            out += bindings.find(body.substr(i + 1, len - 2))->second;
            i += len - 1;
        } else {
            out += body[i];
        }
    }
    return out;
}

std::string render_prompt(TemplateId id, const Bindings& bindings) { return render_template(template_body(id), bindings); }

// ---- retrieval ----------------------------------------------------------------

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(std::move(cur));
    }
    return out;
}

RagStore::RagStore(std::vector<RagDocument> docs) : docs_(std::move(docs)) {
    std::sort(docs_.begin(), docs_.end(), [](const RagDocument& a, const RagDocument& b) { return a.id < b.id; });
}

RagDocument RagStore::parse_document(std::string id, std::string_view content) {
    RagDocument doc;
    doc.id = std::move(id);
    const auto nl = content.find('\n');
    const auto first = text::trim(content.substr(0, nl));
    if (text::starts_with_ci(first, "tags:")) {
        for (const auto t : text::split(first.substr(5), ',')) {
            const auto tag = text::trim(t);
            if (!tag.empty()) {
                doc.tags.push_back(text::to_lower(tag));
            }
        }
        content = nl == std::string_view::npos ? std::string_view() : content.substr(nl + 1);
    }
    doc.text = std::string(text::trim(content));
    return doc;
}

RagStore RagStore::from_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw std::invalid_argument("design-rule directory " + dir.string() + " does not exist");
    }
    std::vector<RagDocument> docs;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            docs.push_back(parse_document(entry.path().stem().string(), read_file(entry.path())));
        }
    }
    return RagStore(std::move(docs));
}

RagStore RagStore::builtin() {
    std::vector<RagDocument> docs;
    for (const auto name : embedded_resource_names()) {
        if (name.starts_with("rag/") && name.ends_with(".txt")) {
            const std::string id(name.substr(4, name.size() - 8));
            docs.push_back(parse_document(id, *embedded_resource(name)));
        }
    }
    return RagStore(std::move(docs));
}

double RagStore::score(const RagDocument& doc, std::string_view query) {
    const auto q = tokenize(query);
    const std::set<std::string> uniq(q.begin(), q.end());
    std::map<std::string, int> tf;
    for (auto& t : tokenize(doc.text)) {
        ++tf[t];
    }
    double s = 0.0;
    for (const auto& t : uniq) {
        if (const auto it = tf.find(t); it != tf.end()) {
            s += it->second;
        }
        if (std::find(doc.tags.begin(), doc.tags.end(), t) != doc.tags.end()) {
            s += 2.0;
        }
    }
    return s;
}

std::vector<RagHit> retrieve_context(const RagStore& store, std::string_view query, std::size_t k) {
    std::vector<RagHit> hits;
    for (const auto& d : store.documents()) {
        const double s = RagStore::score(d, query);
        if (s > 0.0) {
            hits.push_back({d.id, s, d.text});
        }
    }
    std::stable_sort(hits.begin(), hits.end(), [](const RagHit& a, const RagHit& b) {
        return a.score != b.score ? a.score > b.score : a.id < b.id;
    });
    if (hits.size() > k) {
        hits.resize(k);
    }
    return hits;
}

// ---- spatial ---------------------------------------------------------------------

StageFailed::StageFailed(Stage stage, std::vector<std::string> attempts, const std::string& last_error)
    : std::runtime_error(std::string(stage_key(stage)) + " stage failed after " + std::to_string(attempts.size()) +
                         " attempts: " + last_error),
      stage_(stage), attempts_(std::move(attempts)) {}

Bindings spatial_bindings(Stage stage, const RoomSpec& room, const ruledsl::RuleBundle& prior,
                          const std::vector<std::string>& reference_notes) {
    std::string spec = room.requirement;
    if (!reference_notes.empty()) {
        spec += "\nReference notes: " + text::join(reference_notes, " ");
    }
    Bindings b{{"room_type", room.room_type},
               {"room_size", text::format_number(room.room_size)},
               {"room_polygon", polygon_text(room.polygon)},
               {"room_spec", spec}};
    if (stage != Stage::Selection) {
        b["selected_objects"] = names_of(prior.selections);
    }
    return b;
}

std::string spatial_prompt(const ProposeInput& in) {
    if (in.room == nullptr) {
        throw std::invalid_argument("spatial_propose needs a room");
    }
    std::string prompt = render_prompt(spatial_template(in.stage),
                                       spatial_bindings(in.stage, *in.room, in.prior, in.reference_notes));
    if (in.feedback && !in.feedback->empty()) {
        prompt += "\n\n" + std::string(kFeedbackHeader) + "\n\n" + *in.feedback + "\n";
    }
    if (!in.context.empty()) {
        prompt += "\n\n" + std::string(kGuidelinesHeader) + "\n\n";
        for (const auto& c : in.context) {
            prompt += "- " + c + "\n";
        }
    }
    return prompt;
}

void check_stage_order(Stage stage, const ruledsl::RuleBundle& prior) {
    if (stage != Stage::Selection && prior.selections.empty()) {
        throw StageOrderError("constraints and score terms need an accepted object selection");
    }
    if (stage == Stage::ScoreTerms && prior.constraints.empty()) {
        throw StageOrderError("score terms need accepted constraints");
    }
}

ruledsl::RuleBundle parse_stage(Stage stage, std::string_view raw, const ruledsl::RuleBundle& prior,
                                const catalog::Catalog& cat, std::vector<ruledsl::Warning>* warnings) {
    ruledsl::RuleBundle out = prior;
    std::vector<ruledsl::Warning> w;
    const auto empty = [&](std::size_t n) {
        if (n == 0) {
            throw ruledsl::ParseError(ruledsl::ErrorCode::FieldCount, 0, "the reply contains no rule lines");
        }
    };
    switch (stage) {
    case Stage::Selection: {
        auto p = ruledsl::parse_selection(raw, cat);
        empty(p.value.size());
        out.selections = std::move(p.value);
        out.constraints.clear();
        out.score_terms.clear();
        w = std::move(p.warnings);
        break;
    }
    case Stage::Constraints: {
        auto p = ruledsl::parse_constraints(raw, prior.selections);
        empty(p.value.size());
        out.constraints = std::move(p.value);
        out.score_terms.clear();
        w = std::move(p.warnings);
        break;
    }
    case Stage::ScoreTerms: {
        auto p = ruledsl::parse_score_terms(raw, prior.selections, &prior.constraints);
        empty(p.value.size());
        out.score_terms = std::move(p.value);
        w = std::move(p.warnings);
        break;
    }
    }
    for (auto& extra : ruledsl::validate_bundle(out, cat)) {
        if (std::find(w.begin(), w.end(), extra) == w.end()) {
            w.push_back(std::move(extra));
        }
    }
    if (warnings != nullptr) {
        *warnings = std::move(w);
    }
    return out;
}

Proposal spatial_propose(const ProposeInput& in, CompletionClient& client, const catalog::Catalog& cat) {
    check_stage_order(in.stage, in.prior);
    const std::string base = spatial_prompt(in);
    Proposal out;
    out.stage = in.stage;
    std::string prompt = base;
    for (int attempt = 1; attempt <= kMaxAttempts; ++attempt) {
        out.prompt = prompt;
        std::string raw = client.complete({Role::Spatial, std::string(stage_key(in.stage)), prompt, {}});
        out.attempts.push_back(raw);
        try {
            out.bundle = parse_stage(in.stage, raw, in.prior, cat, &out.warnings);
            out.raw = std::move(raw);
            return out;
        } catch (const ruledsl::ParseError& e) {
            const std::string err = std::string(ruledsl::error_code_name(e.code())) + " at line " +
                                    std::to_string(e.line()) + ": " + e.reason();
            out.errors.push_back(err);
            prompt = base + "\n\n" + std::string(kRepairHeader) + "\n\nYour previous reply could not be used (" + err +
                     ").\nPrevious reply:\n" + raw + "\n\nReply again with corrected rules only.\n";
        }
    }
    throw StageFailed(in.stage, out.attempts, out.errors.back());
}

// ---- interactive --------------------------------------------------------------------

std::string translate(Stage stage, std::string_view raw_text, CompletionClient& client) {
    if (text::trim(raw_text).empty()) {
        throw std::invalid_argument("nothing to translate: raw rule text is empty");
    }
    static constexpr std::array<const char*, 3> keys = {"raw_object_selection_text", "raw_constraints_text",
                                                        "raw_scoreterms_text"};
    const Bindings b{{keys[static_cast<std::size_t>(stage)], std::string(raw_text)}};
    const std::string prompt = render_prompt(interactive_template(stage), b);
    return client.complete({Role::Interactive, std::string(stage_key(stage)), prompt, {}});
}

// ---- grader --------------------------------------------------------------------------

int parse_grade(std::string_view reply) {
    for (std::size_t i = 0; i < reply.size();) {
        if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) {
            ++j;
        }
        const bool negative = i > 0 && reply[i - 1] == '-';
        const auto digits = reply.substr(i, j - i);
        if (!negative && digits.size() <= 3) {
            const int v = std::stoi(std::string(digits));
            if (v >= 0 && v <= 100) {
                return v;
            }
        }
        i = j;
    }
    throw UngradableReply("grader reply has no score between 0 and 100");
}

Bindings grader_bindings(Stage stage, const ruledsl::RuleBundle& bundle, const RoomSpec& room) {
    static constexpr std::array<const char*, 3> names = {"object selection", "object constraints",
                                                         "object score terms"};
    const auto s = ruledsl::serialize(bundle);
    return {{"room_type", room.room_type},
            {"room_spec", room.requirement},
            {"stage", names[static_cast<std::size_t>(stage)]},
            {"raw_object_selection_text", or_none(s.selection)},
            {"raw_constraints_text", or_none(s.constraints)},
            {"raw_scoreterms_text", or_none(s.score_terms)}};
}

GradeResult grade(Stage stage, const ruledsl::RuleBundle& bundle, const RoomSpec& room,
                  const std::vector<std::string>& reference_images, CompletionClient& client) {
    require_images(client, reference_images);
    GradeResult out;
    out.prompt = render_prompt(TemplateId::Grader, grader_bindings(stage, bundle, room));
    out.reply = client.complete({Role::Grader, std::string(stage_key(stage)), out.prompt, reference_images});
    out.score = parse_grade(out.reply);
    return out;
}

// ---- reference -------------------------------------------------------------------------

ReferenceNote describe_reference(const std::string& image, CompletionClient& client) {
    if (!client.supports_images()) {
        throw CapabilityError("describing a reference image needs an image-capable client");
    }
    ReferenceNote note;
    note.image = image;
    note.description = std::string(text::trim(
        client.complete({Role::Reference, "reference", std::string(template_body(TemplateId::ReferenceGuide)), {image}})));
    if (note.description.empty()) {
        throw ClientError("reference agent returned an empty description");
    }
    return note;
}

std::vector<ReferenceNote> describe_references(const std::vector<std::string>& images, CompletionClient& client) {
    std::vector<ReferenceNote> out;
    for (const auto& img : images) {
        out.push_back(describe_reference(img, client));
    }
    return out;
}

// ---- evaluator ---------------------------------------------------------------------------

namespace {

std::string normalize_label(std::string_view line) {
    std::string s;
    for (const char ch : line) {
        const auto c = static_cast<unsigned char>(ch);
        s += (ch == '-' || ch == '_') ? ' ' : static_cast<char>(std::tolower(c));
    }
    return s;
}

}  // namespace

Evaluation parse_evaluation(std::string_view reply) {
    static const std::array<std::vector<std::string>, 4> labels = {{
        {"user intent alignment", "user intent"},
        {"aesthetic coherence", "aesthetic"},
        {"functionality"},
        {"circulation design", "circulation"},
    }};
    std::array<std::optional<int>, 4> found;
    for (const auto raw : text::split_lines(reply)) {
        const std::string line = normalize_label(raw);
        // skip list markers and emphasis before the label
        std::size_t start = 0;
        while (start < line.size() && !std::isalpha(static_cast<unsigned char>(line[start]))) {
            ++start;
        }
        for (std::size_t c = 0; c < labels.size(); ++c) {
            if (found[c]) {
                continue;
            }
            for (const auto& label : labels[c]) {
                if (line.compare(start, label.size(), label) != 0) {
                    continue;
                }
                std::size_t i = start + label.size();
                while (i < line.size() && !std::isdigit(static_cast<unsigned char>(line[i]))) {
                    ++i;
                }
                std::size_t j = i;
                while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
                    ++j;
                }
                if (j == i || j - i > 2) {
                    throw UngradableReply("criterion '" + label + "' has no score");
                }
                const int v = std::stoi(line.substr(i, j - i));
                if (v > 10) {
                    throw UngradableReply("criterion '" + label + "' scored outside 0..10");
                }
                found[c] = v;
                break;
            }
        }
    }
    for (std::size_t c = 0; c < found.size(); ++c) {
        if (!found[c]) {
            throw UngradableReply("evaluator reply is missing the " + std::string(kCriteria[c]) + " score");
        }
    }
    Evaluation e;
    e.user_intent = *found[0];
    e.aesthetic = *found[1];
    e.functionality = *found[2];
    e.circulation = *found[3];
    e.rationale = std::string(reply);
    return e;
}

std::string evaluator_prompt(const RoomSpec& room, std::string_view rubric) {
    return render_prompt(TemplateId::Evaluator, {{"design_criteria_rubric", std::string(rubric)},
                                                 {"room_type", room.room_type},
                                                 {"room_spec", room.requirement},
                                                 {"room_size", text::format_number(room.room_size) + " square meters"}});
}

std::string_view builtin_rubric() {
    const auto r = embedded_resource("rubric.md");
    if (!r) {
        throw std::logic_error("rubric resource is not compiled in");
    }
    return *r;
}

Evaluation evaluate_design(const std::string& top_view_image, const RoomSpec& room, std::string_view rubric,
                           CompletionClient& client) {
    if (text::trim(rubric).empty()) {
        throw std::invalid_argument("evaluation needs a rubric document");
    }
    const std::vector<std::string> images = top_view_image.empty() ? std::vector<std::string>{}
                                                                   : std::vector<std::string>{top_view_image};
    require_images(client, images);
    return parse_evaluation(client.complete({Role::Evaluator, "evaluate", evaluator_prompt(room, rubric), images}));
}

}  // namespace codesign::agents

#include "codesign/compare.hpp"

#include <cstdio>
#include <fstream>

namespace codesign::compare {

namespace {

Json side_json(const Side& s) {
    Json scores = Json::object();
    const auto v = s.evaluation.scores();
    for (std::size_t i = 0; i < v.size(); ++i) {
        scores[std::string(agents::kCriteria[i])] = v[i];
    }
    return Json{{"label", s.label},
                {"scene", s.scene_name},
                {"image", s.image},
                {"scores", scores},
                {"average", s.evaluation.average()},
                {"rationale", s.evaluation.rationale}};
}

std::string cell(double v, bool integer) {
    char buf[32];
    std::snprintf(buf, sizeof buf, integer ? "%.0f" : "%.2f", v);
    return buf;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) {
        s.append(w - s.size(), ' ');
    }
    return s;
}

Side evaluate(const std::string& label, const scene::SceneDocument& doc, agents::CompletionClient& client,
              const CompareOptions& options, std::string_view rubric) {
    Side s;
    s.label = label;
    s.scene_name = doc.name;
    if (client.supports_images()) {
        std::filesystem::create_directories(options.image_dir);
        const auto path = options.image_dir / (label + "_top_view.png");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << render::encode_png(render::render_top_view(doc, options.render));
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        s.image = path.string();
    }
    s.evaluation = agents::evaluate_design(s.image, doc.room, rubric, client);
    return s;
}

}  // namespace

std::array<int, 4> CompareReport::deltas() const {
    const auto x = a.evaluation.scores();
    const auto y = b.evaluation.scores();
    return {y[0] - x[0], y[1] - x[1], y[2] - x[2], y[3] - x[3]};
}

Json CompareReport::to_json() const {
    Json d = Json::object();
    const auto v = deltas();
    for (std::size_t i = 0; i < v.size(); ++i) {
        d[std::string(agents::kCriteria[i])] = v[i];
    }
    return Json{{"schema", kCompareSchema},
                {"a", side_json(a)},
                {"b", side_json(b)},
                {"deltas", d},
                {"averages", {{"a", a.evaluation.average()}, {"b", b.evaluation.average()}}}};
}

std::string CompareReport::table() const {
    const std::size_t w = 16;
    std::string out = pad("criterion", w) + pad(a.label, 10) + pad(b.label, 10) + "delta\n";
    const auto x = a.evaluation.scores();
    const auto y = b.evaluation.scores();
    const auto d = deltas();
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += pad(std::string(agents::kCriteria[i]), w) + pad(cell(x[i], true), 10) + pad(cell(y[i], true), 10) +
               (d[i] > 0 ? "+" : "") + std::to_string(d[i]) + "\n";
    }
    const double da = b.evaluation.average() - a.evaluation.average();
    out += pad("average", w) + pad(cell(a.evaluation.average(), false), 10) +
           pad(cell(b.evaluation.average(), false), 10) + (da > 0 ? "+" : "") + cell(da, false) + "\n";
    return out;
}

CompareReport compare_report(const scene::SceneDocument& a, const scene::SceneDocument& b,
                             agents::CompletionClient& client, const CompareOptions& options) {
    const std::string rubric = options.rubric.empty() ? std::string(agents::builtin_rubric()) : options.rubric;
    CompareReport r;
    r.a = evaluate(options.label_a, a, client, options, rubric);
    r.b = evaluate(options.label_b, b, client, options, rubric);
    return r;
}

}  // namespace codesign::compare

#pragma once

// Loading helpers for the sample data shipped under data/samples.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "codesign/agents.hpp"
#include "codesign/annealer.hpp"
#include "codesign/room_spec.hpp"
#include "codesign/ruledsl.hpp"
#include "codesign/scene.hpp"

namespace fixtures {

inline std::filesystem::path source_dir() { return CODESIGN_SOURCE_DIR; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("missing fixture " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string sample(const std::string& rel) { return read_file(source_dir() / "data" / "samples" / rel); }

inline codesign::ruledsl::RuleBundle case_study_bundle() {
    return codesign::ruledsl::parse_bundle({sample("case_study/selection.txt"), sample("case_study/constraints.txt"),
                                            sample("case_study/score_terms.txt")});
}

// 22 m2 living room matching data/samples/livingroom_22.json.
inline codesign::geometry::RoomPolygon case_study_room() {
    using codesign::geometry::FeatureKind;
    return codesign::geometry::RoomPolygon::rectangle(
        5.0, 4.4, {{FeatureKind::Door, 0, 0.3, 1.2, 0.9}, {FeatureKind::Window, 2, 1.5, 3.5, 0.0}});
}

inline codesign::RoomSpec case_study_spec() {
    return codesign::room_spec_from_json(codesign::Json::parse(sample("livingroom_22.json")));
}

inline codesign::Json fixture_json(const std::string& name) {
    return codesign::Json::parse(read_file(source_dir() / "data" / "fixtures" / name));
}

inline std::unique_ptr<codesign::agents::MockClient> mock(const std::string& name) {
    return codesign::agents::MockClient::from_json(fixture_json(name));
}

// Case-study scene at its initial (unoptimized) layout.
inline codesign::scene::SceneDocument case_study_scene(std::uint64_t seed, const std::string& name = "case_study") {
    codesign::scene::SceneDocument doc;
    doc.name = name;
    doc.room = case_study_spec();
    doc.bundle = case_study_bundle();
    const auto layout =
        codesign::annealer::initial_layout(doc.bundle, doc.room.polygon, codesign::catalog::Catalog::builtin(), seed);
    doc.objects = codesign::scene::objects_of(layout);
    const auto e = codesign::scoring::total_energy(doc.bundle, layout);
    doc.metrics = {e.loss, e.violation, e.total, 0, seed};
    return doc;
}

}  // namespace fixtures

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codesign/catalog.hpp"
#include "codesign/room_spec.hpp"
#include "codesign/ruledsl.hpp"
#include "codesign/scoring.hpp"

// The exported layout record that stands in for a 3D scene file.
namespace codesign::scene {

inline constexpr const char* kSceneSchema = "codesign.scene/1";

struct SceneObject {
    std::string id;
    std::string object_name;
    std::string factory;
    catalog::Dimensions variant;
    std::size_t variant_index = 0;
    geometry::Vec2 position;
    double rotation = 0.0;
    catalog::Tier tier = catalog::Tier::Medium;
    std::optional<std::string> parent;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct SceneMetrics {
    double loss = 0.0;
    double violation = 0.0;
    double total = 0.0;
    std::size_t iterations = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const SceneMetrics&, const SceneMetrics&) = default;
};

struct SceneDocument {
    std::string name;
    RoomSpec room;
    std::vector<SceneObject> objects;
    SceneMetrics metrics;
    ruledsl::RuleBundle bundle;
    std::uint64_t created_ts = 0;
    std::uint64_t finished_ts = 0;

    friend bool operator==(const SceneDocument&, const SceneDocument&) = default;
};

class SceneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<SceneObject> objects_of(const scoring::Layout& layout);
scoring::Layout to_layout(const SceneDocument& doc);
scoring::Layout to_layout(const geometry::RoomPolygon& room, const std::vector<SceneObject>& objects);

Json object_to_json(const SceneObject& o);
SceneObject object_from_json(const Json& j);
Json objects_to_json(const std::vector<SceneObject>& objects);
std::vector<SceneObject> objects_from_json(const Json& j);

Json to_json(const SceneDocument& doc);
/// Throws SceneError for malformed documents and dangling parent ids.
SceneDocument scene_from_json(const Json& j);
SceneDocument load_scene(const std::string& path);

/// Energy of the stored layout under the stored bundle.
scoring::Energy reevaluate(const SceneDocument& doc, const scoring::ScoringConfig& config = {});

}  // namespace codesign::scene

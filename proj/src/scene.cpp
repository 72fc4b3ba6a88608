#include "codesign/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace codesign::scene {

std::vector<SceneObject> objects_of(const scoring::Layout& layout) {
    std::vector<SceneObject> out;
    for (const auto& p : layout.placements) {
        SceneObject o;
        o.id = p.instance_id;
        o.object_name = p.object_name;
        o.factory = p.factory;
        o.variant = {p.footprint.width(), p.footprint.depth(), p.height};
        o.variant_index = p.variant_index;
        o.position = p.footprint.center();
        o.rotation = p.footprint.rotation_deg();
        o.tier = p.tier;
        o.parent = p.parent_instance;
        out.push_back(std::move(o));
    }
    return out;
}

scoring::Layout to_layout(const geometry::RoomPolygon& room, const std::vector<SceneObject>& objects) {
    scoring::Layout layout{room, {}};
    for (const auto& o : objects) {
        scoring::Placement p;
        p.instance_id = o.id;
        p.object_name = o.object_name;
        p.factory = o.factory;
        p.variant_index = o.variant_index;
        p.footprint = geometry::Footprint(o.position, o.variant.width / 2, o.variant.depth / 2, o.rotation);
        p.tier = o.tier;
        p.parent_instance = o.parent;
        p.height = o.variant.height;
        layout.placements.push_back(std::move(p));
    }
    return layout;
}

scoring::Layout to_layout(const SceneDocument& doc) { return to_layout(doc.room.polygon, doc.objects); }

Json object_to_json(const SceneObject& o) {
    return Json{{"id", o.id},
                {"object_name", o.object_name},
                {"factory", o.factory},
                {"variant", {{"width", o.variant.width}, {"depth", o.variant.depth}, {"height", o.variant.height}}},
                {"variant_index", o.variant_index},
                {"position", {o.position.x, o.position.y}},
                {"rotation", o.rotation},
                {"tier", catalog::to_string(o.tier)},
                {"parent", o.parent ? Json(*o.parent) : Json(nullptr)}};
}

SceneObject object_from_json(const Json& j) {
    try {
        SceneObject o;
        o.id = j.at("id").get<std::string>();
        o.object_name = j.at("object_name").get<std::string>();
        o.factory = j.at("factory").get<std::string>();
        const auto& v = j.at("variant");
        o.variant = {v.at("width").get<double>(), v.at("depth").get<double>(), v.at("height").get<double>()};
        o.variant_index = j.at("variant_index").get<std::size_t>();
        o.position = {j.at("position").at(0).get<double>(), j.at("position").at(1).get<double>()};
        o.rotation = j.at("rotation").get<double>();
        o.tier = catalog::tier_from_string(j.at("tier").get<std::string>());
        if (!j.at("parent").is_null()) {
            o.parent = j.at("parent").get<std::string>();
        }
        return o;
    } catch (const nlohmann::json::exception& e) {
        throw SceneError(std::string("malformed scene object: ") + e.what());
    } catch (const catalog::CatalogError& e) {
        throw SceneError(e.what());
    }
}

Json objects_to_json(const std::vector<SceneObject>& objects) {
    Json arr = Json::array();
    for (const auto& o : objects) {
        arr.push_back(object_to_json(o));
    }
    return arr;
}

std::vector<SceneObject> objects_from_json(const Json& j) {
    if (!j.is_array()) {
        throw SceneError("scene objects must be a list");
    }
    std::vector<SceneObject> out;
    for (const auto& o : j) {
        out.push_back(object_from_json(o));
    }
    return out;
}

Json to_json(const SceneDocument& doc) {
    const auto texts = ruledsl::serialize(doc.bundle);
    return Json{
        {"schema", kSceneSchema},
        {"name", doc.name},
        {"room", codesign::to_json(doc.room)},
        {"objects", objects_to_json(doc.objects)},
        {"metrics",
         {{"final_loss", doc.metrics.loss},
          {"final_violation", doc.metrics.violation},
          {"final_total", doc.metrics.total},
          {"iterations", doc.metrics.iterations},
          {"seed", doc.metrics.seed}}},
        {"provenance",
         {{"bundle",
           {{"selection", texts.selection}, {"constraints", texts.constraints}, {"score_terms", texts.score_terms}}},
          {"timestamps", {{"created", doc.created_ts}, {"finished", doc.finished_ts}}}}},
    };
}

SceneDocument scene_from_json(const Json& j) {
    SceneDocument doc;
    try {
        if (j.at("schema").get<std::string>() != kSceneSchema) {
            throw SceneError("unsupported scene schema");
        }
        doc.name = j.at("name").get<std::string>();
        doc.room = room_spec_from_json(j.at("room"));
        doc.objects = objects_from_json(j.at("objects"));
        const auto& m = j.at("metrics");
        doc.metrics = {m.at("final_loss").get<double>(), m.at("final_violation").get<double>(),
                       m.at("final_total").get<double>(), m.at("iterations").get<std::size_t>(),
                       m.at("seed").get<std::uint64_t>()};
        const auto& b = j.at("provenance").at("bundle");
        doc.bundle = ruledsl::parse_bundle({b.at("selection").get<std::string>(), b.at("constraints").get<std::string>(),
                                            b.at("score_terms").get<std::string>()});
        const auto& ts = j.at("provenance").at("timestamps");
        doc.created_ts = ts.at("created").get<std::uint64_t>();
        doc.finished_ts = ts.at("finished").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw SceneError(std::string("malformed scene document: ") + e.what());
    } catch (const ruledsl::ParseError& e) {
        throw SceneError(std::string("scene bundle does not parse: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw SceneError(e.what());
    }
    std::set<std::string> ids;
    for (const auto& o : doc.objects) {
        if (!ids.insert(o.id).second) {
            throw SceneError("duplicate object id " + o.id);
        }
    }
    for (const auto& o : doc.objects) {
        if (o.parent && !ids.contains(*o.parent)) {
            throw SceneError("object " + o.id + " has unknown parent " + *o.parent);
        }
    }
    return doc;
}

SceneDocument load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SceneError("cannot open scene " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return scene_from_json(Json::parse(ss.str()));
    } catch (const nlohmann::json::parse_error& e) {
        throw SceneError(std::string("scene is not valid JSON: ") + e.what());
    }
}

scoring::Energy reevaluate(const SceneDocument& doc, const scoring::ScoringConfig& config) {
    return scoring::total_energy(doc.bundle, to_layout(doc), config);
}

}  // namespace codesign::scene

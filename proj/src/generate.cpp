#include "codesign/generate.hpp"

#include <fstream>
#include <ostream>

#include "codesign/gateway.hpp"
#include "codesign/render.hpp"

namespace codesign::gateway {

namespace fs = std::filesystem;

std::vector<session::Decision> decisions_from_json(const Json& j) {
    if (!j.is_array()) {
        throw ConfigError("decisions", "must be an array");
    }
    std::vector<session::Decision> out;
    for (const auto& d : j) {
        if (!d.is_object() || !d.contains("accept") || !d.at("accept").is_boolean()) {
            throw ConfigError("decisions", "every decision needs a boolean accept field");
        }
        out.push_back({d.at("accept").get<bool>(), d.value("feedback", std::string())});
    }
    return out;
}

GenerateResult generate(const GenerateArgs& args, session::Services services, std::ostream& log) {
    const std::string name = args.room.output_name.empty() ? "session" : args.room.output_name;
    GenerateResult result;
    result.session_dir = args.out_dir / name;
    if (args.force) {
        fs::remove_all(result.session_dir);
    }
    auto s = session::Session::create(name, args.room, args.mode, args.options, services, result.session_dir);
    if (!args.room.reference_images.empty()) {
        s->describe_references();
    }
    std::size_t next = 0;
    while (session::rule_stage(s->stage())) {
        const auto stage = std::string(session::to_string(s->stage()));
        s->advance();
        if (s->mode() == session::Mode::Auto) {
            log << "[" << stage << "] accepted by the grader\n";
            continue;
        }
        log << "[" << stage << "] " << s->pending()->translated << "\n";
        if (next >= args.decisions.size()) {
            throw ConfigError("decisions", "manual mode ran out of scripted decisions at " + stage);
        }
        const auto& d = args.decisions[next++];
        log << "[" << stage << "] " << (d.accept ? "accept" : "reject: " + d.feedback) << "\n";
        s->decide(d);
    }
    log << "[optimizing] seed " << args.options.seed << "\n";
    const auto out = s->run_optimization();
    const auto ex = result.session_dir / "exports";
    render::RenderOptions ro;
    ro.px_per_m = args.px_per_m;
    {
        std::ofstream png(ex / "top_view.png", std::ios::binary | std::ios::trunc);
        png << render::encode_png(render::render_top_view(out.scene, ro));
    }
    for (const char* f : {session::kSceneFile, session::kLossFile, session::kLogFile}) {
        result.exports.push_back(ex / f);
    }
    result.exports.push_back(ex / "top_view.png");
    result.stage = s->stage();
    log << "[done] total " << out.scene.metrics.total << " over " << out.scene.objects.size() << " objects\n";
    return result;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const annealer::Unplaceable*>(&e)) {
        return kExitUnplaceable;
    }
    if (dynamic_cast<const agents::StageFailed*>(&e) || dynamic_cast<const agents::ClientError*>(&e) ||
        dynamic_cast<const agents::UngradableReply*>(&e)) {
        return kExitStageFailure;
    }
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
        dynamic_cast<const nlohmann::json::exception*>(&e) || dynamic_cast<const catalog::CatalogError*>(&e)) {
        return kExitConfig;
    }
    if (const auto* se = dynamic_cast<const session::SessionError*>(&e)) {
        return se->code() == "session_exists" ? kExitConfig : kExitOther;
    }
    return kExitOther;
}

}  // namespace codesign::gateway

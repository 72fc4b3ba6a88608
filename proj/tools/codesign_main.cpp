// codesign command line: headless generation, the HTTP service and offline tools.
#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "codesign/compare.hpp"
#include "codesign/gateway.hpp"
#include "codesign/generate.hpp"
#include "codesign/render.hpp"
#include "codesign/text.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p, const char* field) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw gateway::ConfigError(field, "cannot open " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json slurp_json(const fs::path& p, const char* field) {
    try {
        return Json::parse(slurp(p, field));
    } catch (const nlohmann::json::parse_error& e) {
        throw gateway::ConfigError(field, p.string() + " is not valid JSON: " + e.what());
    }
}

struct ProviderArgs {
    std::string kind = "mock";
    std::string fixtures;
    std::string config;
};

void add_provider_flags(CLI::App* cmd, ProviderArgs& p) {
    cmd->add_option("--provider", p.kind, "mock or live")->check(CLI::IsMember({"mock", "live"}));
    cmd->add_option("--fixtures", p.fixtures, "mock dialogue fixture (JSON)");
    cmd->add_option("--provider-config", p.config, "live provider settings (JSON)");
}

std::unique_ptr<agents::CompletionClient> make_provider(const ProviderArgs& p) {
    if (p.kind == "mock") {
        if (p.fixtures.empty()) {
            throw gateway::ConfigError("fixtures", "the mock provider needs --fixtures");
        }
        return agents::MockClient::from_json(slurp_json(p.fixtures, "fixtures"));
    }
    if (p.config.empty()) {
        throw gateway::ConfigError("provider-config", "the live provider needs --provider-config");
    }
    auto cfg = agents::provider_config_from_json(slurp_json(p.config, "provider-config"));
    cfg.kind = "live";
    return agents::make_client(cfg);
}

gateway::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) {
        g_server->stop();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codesign: participatory room layout from rule proposals"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "run the whole pipeline headless");
    std::string room_file, polygon_file, room_type, requirement, name, mode = "auto", out_dir = "out", decisions_file;
    double room_size = 0;
    std::uint64_t seed = 0;
    double threshold = -1;
    int max_rounds = 0;
    bool force = false, polish = false;
    ProviderArgs gen_provider;
    gen->add_option("--room", room_file, "room spec JSON (type, size, polygon, requirement, output name)");
    gen->add_option("--polygon", polygon_file, "polygon and features JSON; overrides the room spec's");
    gen->add_option("--room-type", room_type, "room type, e.g. livingroom");
    gen->add_option("--room-size", room_size, "floor area in square meters");
    gen->add_option("--requirement", requirement, "what the room is for");
    gen->add_option("--name", name, "output folder name");
    gen->add_option("--mode", mode, "auto or manual")->check(CLI::IsMember({"auto", "manual"}));
    gen->add_option("--seed", seed, "optimizer seed");
    gen->add_option("--out", out_dir, "export root directory");
    gen->add_option("--decisions", decisions_file, "scripted manual decisions (JSON array)");
    gen->add_option("--threshold", threshold, "auto-mode acceptance score");
    gen->add_option("--max-rounds", max_rounds, "auto-mode grading rounds per stage");
    gen->add_flag("--force", force, "replace an existing session folder");
    gen->add_flag("--polish", polish, "second optimizer sweep over every object");
    add_provider_flags(gen, gen_provider);

    // serve
    auto* serve = app.add_subcommand("serve", "run the HTTP and event-stream service");
    std::string config_file, host = "127.0.0.1", data_dir = "sessions";
    int port = 8080;
    ProviderArgs serve_provider;
    serve->add_option("--config", config_file, "service configuration (JSON)");
    serve->add_option("--host", host, "listen address");
    serve->add_option("--port", port, "listen port (0 picks one)");
    serve->add_option("--data-dir", data_dir, "session storage");
    add_provider_flags(serve, serve_provider);

    // compare
    auto* cmp = app.add_subcommand("compare", "evaluate two scenes side by side");
    std::string scene_a, scene_b, report_out, label_a = "a", label_b = "b", image_dir;
    ProviderArgs cmp_provider;
    cmp->add_option("scene_a", scene_a, "first scene.json")->required();
    cmp->add_option("scene_b", scene_b, "second scene.json")->required();
    cmp->add_option("--out", report_out, "write the report JSON here");
    cmp->add_option("--label-a", label_a);
    cmp->add_option("--label-b", label_b);
    cmp->add_option("--image-dir", image_dir, "where the rendered top views go");
    add_provider_flags(cmp, cmp_provider);

    // render
    auto* ren = app.add_subcommand("render", "rasterize a scene's top view");
    std::string render_scene, render_out = "top_view.png";
    double px_per_m = 80;
    ren->add_option("scene", render_scene, "scene.json")->required();
    ren->add_option("--out", render_out, "PNG path");
    ren->add_option("--px-per-m", px_per_m, "pixels per meter");

    // replay
    auto* rep = app.add_subcommand("replay", "rebuild a session from its event log");
    std::string replay_dir;
    rep->add_option("session_dir", replay_dir, "session folder")->required();

    // parse
    auto* par = app.add_subcommand("parse", "validate rule files");
    std::string sel_file, con_file, terms_file;
    par->add_option("--selection", sel_file, "selection rules")->required();
    par->add_option("--constraints", con_file, "constraint rules");
    par->add_option("--score-terms", terms_file, "score-term rules");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : gateway::kExitConfig;
    }

    try {
        if (gen->parsed()) {
            RoomSpec room;
            if (!room_file.empty()) {
                room = room_spec_from_json(slurp_json(room_file, "room"));
            }
            if (!polygon_file.empty()) {
                room.polygon = room_polygon_from_json(slurp_json(polygon_file, "polygon"));
            }
            if (!room_type.empty()) {
                room.room_type = room_type;
            }
            if (room_size > 0) {
                room.room_size = room_size;
            }
            if (!requirement.empty()) {
                room.requirement = requirement;
            }
            if (!name.empty()) {
                room.output_name = name;
            }
            if (room_file.empty() && polygon_file.empty()) {
                throw gateway::ConfigError("polygon", "give --room or --polygon");
            }
            room.validate();

            gateway::GenerateArgs args;
            args.room = room;
            args.mode = session::mode_from_string(mode);
            args.options.seed = seed;
            args.options.anneal.polish_pass = polish;
            if (threshold >= 0) {
                args.options.threshold = threshold;
            }
            if (max_rounds > 0) {
                args.options.max_rounds = max_rounds;
            }
            args.out_dir = out_dir;
            args.force = force;
            if (!decisions_file.empty()) {
                args.decisions = gateway::decisions_from_json(slurp_json(decisions_file, "decisions"));
            } else if (gen_provider.kind == "mock" && !gen_provider.fixtures.empty()) {
                const auto fx = slurp_json(gen_provider.fixtures, "fixtures");
                if (fx.contains("decisions")) {
                    args.decisions = gateway::decisions_from_json(fx.at("decisions"));
                }
            }
            auto client = make_provider(gen_provider);
            const auto rag = agents::RagStore::builtin();
            const auto result = gateway::generate(args, {client.get(), &catalog::Catalog::builtin(), &rag}, std::cerr);
            for (const auto& p : result.exports) {
                std::cout << p.string() << "\n";
            }
            return gateway::kExitDone;
        }
        if (serve->parsed()) {
            gateway::ServiceConfig cfg;
            if (!config_file.empty()) {
                cfg = gateway::load_config(config_file);
            } else {
                cfg.host = host;
                cfg.port = port;
                cfg.data_dir = data_dir;
                cfg.provider.kind = serve_provider.kind;
                cfg.provider.fixtures = serve_provider.fixtures;
                if (serve_provider.kind == "live" && !serve_provider.config.empty()) {
                    cfg.provider = agents::provider_config_from_json(slurp_json(serve_provider.config, "provider-config"));
                    cfg.provider.kind = "live";
                }
            }
            gateway::check_paths(cfg);
            gateway::Service svc(cfg, gateway::client_factory(cfg.provider));
            gateway::HttpServer server(svc);
            const int bound = server.bind(cfg.host, cfg.port);
            std::cout << "listening on http://" << cfg.host << ":" << bound << std::endl;
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            server.listen();
            g_server = nullptr;
            return gateway::kExitDone;
        }
        if (cmp->parsed()) {
            auto client = make_provider(cmp_provider);
            const auto a = scene::load_scene(scene_a);
            const auto b = scene::load_scene(scene_b);
            compare::CompareOptions opts;
            opts.label_a = label_a;
            opts.label_b = label_b;
            if (!image_dir.empty()) {
                opts.image_dir = image_dir;
            }
            const auto report = compare::compare_report(a, b, *client, opts);
            std::cout << report.table();
            if (!report_out.empty()) {
                std::ofstream out(report_out, std::ios::binary | std::ios::trunc);
                out << report.to_json().dump(2) << "\n";
            }
            return gateway::kExitDone;
        }
        if (ren->parsed()) {
            const auto doc = scene::load_scene(render_scene);
            render::RenderOptions ro;
            ro.px_per_m = px_per_m;
            std::ofstream out(render_out, std::ios::binary | std::ios::trunc);
            out << render::encode_png(render::render_top_view(doc, ro));
            std::cout << render_out << "\n";
            return gateway::kExitDone;
        }
        if (rep->parsed()) {
            const auto s = session::Session::replay(session::read_event_log(fs::path(replay_dir) / session::kEventsFile), {});
            std::cout << s->state_json().dump(2) << "\n";
            char hash[17];
            std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(s->state_hash()));
            std::cerr << "state hash " << hash << "\n";
            return gateway::kExitDone;
        }
        if (par->parsed()) {
            const auto& cat = catalog::Catalog::builtin();
            ruledsl::RuleBundle b;
            std::vector<ruledsl::Warning> warnings;
            auto sel = ruledsl::parse_selection(slurp(sel_file, "selection"), cat);
            b.selections = sel.value;
            warnings = sel.warnings;
            if (!con_file.empty()) {
                auto c = ruledsl::parse_constraints(slurp(con_file, "constraints"), b.selections);
                b.constraints = c.value;
                warnings.insert(warnings.end(), c.warnings.begin(), c.warnings.end());
            }
            if (!terms_file.empty()) {
                auto t = ruledsl::parse_score_terms(slurp(terms_file, "score-terms"), b.selections,
                                                    con_file.empty() ? nullptr : &b.constraints);
                b.score_terms = t.value;
                warnings.insert(warnings.end(), t.warnings.begin(), t.warnings.end());
            }
            if (!con_file.empty() && !terms_file.empty()) {
                const auto w = ruledsl::validate_bundle(b, cat);
                warnings.insert(warnings.end(), w.begin(), w.end());
            }
            const auto texts = ruledsl::serialize(b);
            std::cout << texts.selection << texts.constraints << texts.score_terms;
            for (const auto& w : warnings) {
                std::cerr << "warning (line " << w.line << "): " << w.message << "\n";
            }
            return gateway::kExitDone;
        }
    } catch (const ruledsl::ParseError& e) {
        std::cerr << "error [" << ruledsl::error_code_name(e.code()) << "] line " << e.line() << ": " << e.reason()
                  << "\n";
        return gateway::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gateway::exit_code_for(e);
    }
    return gateway::kExitOther;
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include "codesign/compare.hpp"
#include "codesign/gateway.hpp"
#include "codesign/session.hpp"
#include "oracle/constraint_grid.hpp"
#include "oracle/fixtures.hpp"
#include "oracle/grammar_corpus.hpp"
#include "oracle/term_cases.hpp"

using namespace codesign;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_s;  // 0: untimed
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("codesign_acc_" + name);
    fs::remove_all(p);
    return p;
}

std::string sh_quote(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

int run_cli(const std::vector<std::string>& args) {
    std::string cmd = sh_quote(CODESIGN_CLI_PATH);
    for (const auto& a : args) {
        cmd += " " + sh_quote(a);
    }
    cmd += " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string data(const std::string& rel) { return (fixtures::source_dir() / "data" / rel).string(); }

std::size_t count_kind(const session::EventLog& log, std::string_view kind, std::string_view stage = {}) {
    std::size_t n = 0;
    for (const auto& e : log.after(0)) {
        if (e.kind == kind && (stage.empty() || e.payload.value("stage", "") == stage)) {
            ++n;
        }
    }
    return n;
}

ruledsl::RuleBundle sofa_bundle() {
    return ruledsl::parse_bundle({"livingroom | sofas | seating.SofaFactory | 1", "sofas | rooms, against_wall",
                                  "sofas | none | none | none | none | none"});
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

// ---- criteria -------------------------------------------------------------------

Outcome grammar_fidelity() {
    int ok = 0;
    int total = 0;
    for (const auto& c : corpus::cases()) {
        const auto v = corpus::evaluate(c);
        ++total;
        if (!c.expected ? v.parsed : (!v.parsed && v.code == c.expected && !v.reason.empty())) {
            ++ok;
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " example lines get their verdict"};
}

Outcome constraint_kinds() {
    int zero = 0;
    double worst = 2.0;
    std::string worst_kind;
    for (const auto kind : ruledsl::kAllConstraintKinds) {
        scoring::Layout layout{geometry::RoomPolygon::rectangle(4, 5), {}};
        layout.placements.push_back(oracle::make_placement("parent_0", "parents", oracle::grid_parent()));
        auto child = oracle::make_placement("child_0", "children", oracle::satisfying_pose(kind));
        child.parent_instance = "parent_0";
        layout.placements.push_back(child);
        const auto* parent = ruledsl::is_room_kind(kind) ? nullptr : &layout.placements[0];
        zero += scoring::kind_violation(kind, layout.placements[1], parent, layout) == 0.0 ? 1 : 0;
        const auto st = oracle::sweep_kind(kind, 0.05);
        if (st.agreement() < worst) {
            worst = st.agreement();
            worst_kind = std::string(ruledsl::token(kind));
        }
    }
    const int kinds = static_cast<int>(ruledsl::kAllConstraintKinds.size());
    return {zero == kinds && kinds == 14 && worst >= 0.99,
            std::to_string(zero) + "/" + std::to_string(kinds) + " analytic poses at 0; lowest grid agreement " +
                fmt("%.4f", worst) + " (" + worst_kind + ")"};
}

Outcome term_oracle() {
    std::mt19937_64 rng(20240601);
    int cases = 0;
    int within = 0;
    double worst = 0.0;
    while (cases < 1000) {
        const auto c = oracle::random_term_case(rng);
        double got = 0.0;
        try {
            got = scoring::term_loss(c.term, c.layout.placements[c.self], c.layout);
        } catch (const scoring::UnknownRelated&) {
            continue;
        }
        const double err = std::abs(got - c.expected());
        worst = std::max(worst, err);
        within += err <= 1e-9 ? 1 : 0;
        ++cases;
    }
    return {within == cases, std::to_string(within) + "/1000 within 1e-9, max error " + fmt("%.2e", worst)};
}

Outcome schedule() {
    const auto b = ruledsl::parse_bundle({"livingroom | sofas | seating.SofaFactory | 2\n"
                                          "livingroom | chairs | seating.ChairFactory | 3\n"
                                          "livingroom | plants | elements.PlantFactory | 2",
                                          "", ""});
    const auto room = geometry::RoomPolygon::rectangle(5, 6);
    annealer::AnnealConfig cfg;
    cfg.seed = 5;
    const auto r = annealer::optimize(b, annealer::initial_layout(b, room, catalog::Catalog::builtin(), 5), cfg);
    return {r.trace.size() == 400, std::to_string(r.trace.size()) + " trace records (expected 2*80 + 3*60 + 2*30 = 400)"};
}

Outcome efficacy() {
    const auto sofa = sofa_bundle();
    const auto empty = geometry::RoomPolygon::rectangle(4, 5);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        annealer::AnnealConfig cfg;
        cfg.seed = seed;
        const auto r = annealer::optimize(sofa, annealer::initial_layout(sofa, empty, catalog::Catalog::builtin(), seed), cfg);
        good += geometry::nearest_wall_gap(r.layout.placements[0].footprint, geometry::Face::Back, empty).gap <= 0.05;
    }
    const auto b = fixtures::case_study_bundle();
    const auto room = fixtures::case_study_room();
    std::vector<double> before;
    std::vector<double> after;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        annealer::AnnealConfig cfg;
        cfg.seed = seed;
        const auto r = annealer::optimize(b, annealer::initial_layout(b, room, catalog::Catalog::builtin(), seed), cfg);
        before.push_back(r.initial_energy.total);
        after.push_back(r.energy.total);
    }
    const double mb = median(before);
    const double ma = median(after);
    return {good >= 18 && ma <= 0.3 * mb, "sofa at wall in " + std::to_string(good) + "/20 seeds; case-study median " +
                                              fmt("%.1f -> %.1f (%.0f%%)", mb, ma, 100 * ma / mb)};
}

Outcome determinism() {
    std::vector<std::string> bytes[2];
    for (int k = 0; k < 2; ++k) {
        const auto out = scratch("det" + std::to_string(k));
        const int rc = run_cli({"generate", "--room", data("samples/livingroom_22.json"), "--fixtures",
                                data("fixtures/auto_subthreshold.json"), "--seed", "42", "--out", out.string()});
        if (rc != 0) {
            return {false, "generate exited " + std::to_string(rc)};
        }
        for (const char* f : {session::kSceneFile, session::kLossFile, session::kLogFile}) {
            bytes[k].push_back(fixtures::read_file(out / "floorplan_1b1b" / "exports" / f));
        }
        fs::remove_all(out);
    }
    return {bytes[0] == bytes[1], bytes[0] == bytes[1] ? "scene.json, loss.csv and log.jsonl identical across two runs"
                                                       : "exports differ between runs"};
}

Outcome cli_case_study() {
    const auto out = scratch("cli");
    const int rc = run_cli({"generate", "--mode", "manual", "--room", data("samples/livingroom_22.json"), "--fixtures",
                            data("fixtures/case_study.json"), "--seed", "42", "--out", out.string()});
    if (rc != 0) {
        return {false, "generate exited " + std::to_string(rc)};
    }
    const auto exports = out / "floorplan_1b1b" / "exports";
    const auto doc = scene::load_scene((exports / session::kSceneFile).string());
    int plants = 0;
    int banned = 0;
    for (const auto& o : doc.objects) {
        plants += o.object_name == "plants";
        banned += o.object_name == "sidetables" || o.object_name == "armchairs";
    }
    const bool files = fs::exists(exports / session::kLogFile) && fs::exists(exports / session::kLossFile);
    fs::remove_all(out);
    return {plants == 3 && banned == 0 && files, std::to_string(plants) + " plants, " + std::to_string(banned) +
                                                     " side tables or armchairs, log and loss exports " +
                                                     (files ? "present" : "missing")};
}

Outcome auto_bound() {
    auto client = fixtures::mock("auto_subthreshold.json");
    session::SessionOptions o;
    o.anneal.iters_large = 5;
    o.anneal.iters_medium = 5;
    o.anneal.iters_small = 5;
    auto s = session::Session::create("acc", fixtures::case_study_spec(), session::Mode::Auto, o, {client.get()});
    bool ok = true;
    std::string grades;
    for (const auto stage : agents::kStages) {
        s->advance();
        const auto key = agents::stage_key(stage);
        const auto n = count_kind(*s->log(), session::event::kGrade, key);
        grades += (grades.empty() ? "" : "/") + std::to_string(n);
        ok = ok && n == 3;
    }
    // fixture scores 40, 62, 55 in every stage: round 2 must win
    int best = 0;
    for (const auto& e : s->log()->after(0)) {
        if (e.kind == session::event::kAccept) {
            best += e.payload.at("round").get<int>() == 2 && e.payload.at("score").get<int>() == 62;
        }
    }
    ok = ok && best == 3 && s->stage() == session::Stage::Optimizing;
    return {ok, "grading rounds per stage " + grades + "; best proposal accepted in " + std::to_string(best) + "/3 stages"};
}

Outcome compare_averages() {
    auto client = fixtures::mock("evaluator_pair.json");
    compare::CompareOptions opts;
    opts.image_dir = scratch("cmp");
    const auto r = compare::compare_report(fixtures::case_study_scene(1, "a"), fixtures::case_study_scene(2, "b"),
                                           *client, opts);
    fs::remove_all(opts.image_dir);
    const double a = r.a.evaluation.average();
    const double b = r.b.evaluation.average();
    return {a == 6.25 && b == 7.50, "averages " + fmt("%.2f and %.2f", a, b)};
}

Outcome offline_service() {
    const auto dir = scratch("svc");
    gateway::ServiceConfig cfg;
    cfg.data_dir = dir;
    cfg.provider.kind = "mock";
    cfg.provider.fixtures = data("fixtures/case_study.json");
    gateway::Service svc(cfg, gateway::client_factory(cfg.provider));
    const auto call = [&](const std::string& m, const std::string& p, const std::string& body = "") {
        gateway::Request r;
        r.method = m;
        r.path = p;
        r.body = body;
        return svc.handle(r);
    };
    const Json room = Json::parse(fixtures::sample("livingroom_22.json"));
    const auto created = call("POST", "/api/sessions", Json{{"room", room}, {"mode", "manual"}}.dump());
    if (created.status != 201) {
        return {false, "create returned " + std::to_string(created.status)};
    }
    const auto base = "/api/sessions/" + Json::parse(created.body).at("id").get<std::string>();
    const auto fx = fixtures::fixture_json("case_study.json");
    for (const auto& d : fx.at("decisions")) {
        call("POST", base + "/advance");
        call("POST", base + "/decision", d.dump());
    }
    const int opt = call("POST", base + "/optimize").status;
    svc.drain();
    const auto state = Json::parse(call("GET", base).body);
    const int scene_status = call("GET", base + "/scene").status;
    fs::remove_all(dir);
    const bool ok = opt == 202 && state.at("stage") == "done" && scene_status == 200;
    return {ok, "mock provider, in-process service, no sockets: stage " + state.at("stage").get<std::string>() +
                    ", scene " + std::to_string(scene_status)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "grammar fidelity", 1.0, grammar_fidelity},
        {2, "constraint kinds", 60.0, constraint_kinds},
        {3, "term oracle", 0, term_oracle},
        {4, "annealer schedule", 0, schedule},
        {5, "annealer efficacy", 30.0, efficacy},
        {6, "determinism", 0, determinism},
        {7, "cli case study", 0, cli_case_study},
        {8, "auto bound", 0, auto_bound},
        {9, "compare report", 0, compare_averages},
        {10, "offline suite", 0, offline_service},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << fmt(" (%.2f s): ", secs) << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

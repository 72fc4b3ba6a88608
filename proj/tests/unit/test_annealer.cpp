#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "codesign/annealer.hpp"
#include "oracle/fixtures.hpp"

using namespace codesign;
using namespace codesign::annealer;
using geometry::Face;
using geometry::RoomPolygon;

namespace {

ruledsl::RuleBundle sofa_bundle() {
    return ruledsl::parse_bundle({"livingroom | sofas | seating.SofaFactory | 1", "sofas | rooms, against_wall",
                                  "sofas | none | none | none | none | none"});
}

}  // namespace

TEST(InitialLayout, SingleSofaInside) {
    const auto room = RoomPolygon::rectangle(4, 5);
    const auto layout = initial_layout(sofa_bundle(), room, catalog::Catalog::builtin(), 1);
    ASSERT_EQ(layout.placements.size(), 1u);
    EXPECT_EQ(layout.placements[0].instance_id, "sofas_0");
    EXPECT_TRUE(room.contains(layout.placements[0].footprint));
}

TEST(InitialLayout, ParentLinksAndDeterminism) {
    const auto b = fixtures::case_study_bundle();
    const auto room = fixtures::case_study_room();
    const auto a = initial_layout(b, room, catalog::Catalog::builtin(), 7);
    const auto c = initial_layout(b, room, catalog::Catalog::builtin(), 7);
    EXPECT_EQ(a, c);
    EXPECT_EQ(a.find("coffeetables_0")->parent_instance, "sofas_0");
    for (int i = 0; i < 4; ++i) {
        EXPECT_EQ(a.find("chairs_" + std::to_string(i))->parent_instance, "diningtables_0");
    }
    EXPECT_FALSE(a.find("sofas_0")->parent_instance);
    std::size_t total = 0;
    for (const auto& s : b.selections) {
        total += static_cast<std::size_t>(s.quantity);
    }
    EXPECT_EQ(a.placements.size(), total);
    for (const auto& p : a.placements) {
        EXPECT_TRUE(room.contains(p.footprint)) << p.instance_id;
    }
}

TEST(InitialLayout, OversizedIsUnplaceable) {
    const auto cat = catalog::Catalog::parse("[seating.SofaFactory]\nobject = sofas\ntier = large\nvariants = 10x0.9x0.8\n");
    EXPECT_THROW(initial_layout(sofa_bundle(), RoomPolygon::rectangle(2, 2), cat, 1), Unplaceable);
}

TEST(Anneal, MetropolisRule) {
    EXPECT_EQ(acceptance_probability(0.0, 0.5), 1.0);
    EXPECT_EQ(acceptance_probability(-3.0, 0.5), 1.0);
    EXPECT_NEAR(acceptance_probability(1.0, 0.5), std::exp(-2.0), 1e-15);
}

TEST(Anneal, ConfigValidation) {
    AnnealConfig c;
    EXPECT_NO_THROW(c.validate());
    c.iters_small = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.t0 = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.t_final = 2.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Anneal, TraceAccountingAndMonotoneBest) {
    // 2 large, 3 medium, 2 small
    const auto b = ruledsl::parse_bundle({"livingroom | sofas | seating.SofaFactory | 2\n"
                                          "livingroom | chairs | seating.ChairFactory | 3\n"
                                          "livingroom | plants | elements.PlantFactory | 2",
                                          "chairs | sofas, front_to_front", ""});
    const auto room = RoomPolygon::rectangle(5, 6);
    const auto layout = initial_layout(b, room, catalog::Catalog::builtin(), 3);
    AnnealConfig cfg;
    cfg.seed = 3;
    const auto r = optimize(b, layout, cfg);
    EXPECT_EQ(r.trace.size(), 400u);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_LE(r.trace[i].best_total, r.trace[i - 1].best_total);
    }
    EXPECT_LE(r.energy.total, r.initial_energy.total);
    EXPECT_EQ(r.energy, scoring::total_energy(b, r.layout));
    // per object: contiguous block of its tier's budget, parents first
    EXPECT_EQ(r.trace.front().object_id, "sofas_0");
    EXPECT_EQ(r.trace[160].object_id, "chairs_0");
    EXPECT_EQ(r.trace[340].object_id, "plants_0");
    for (const auto& p : r.layout.placements) {
        EXPECT_TRUE(room.contains(p.footprint));
    }
}

TEST(Anneal, Deterministic) {
    const auto b = fixtures::case_study_bundle();
    const auto layout = initial_layout(b, fixtures::case_study_room(), catalog::Catalog::builtin(), 11);
    AnnealConfig cfg;
    cfg.seed = 11;
    const auto r1 = optimize(b, layout, cfg);
    const auto r2 = optimize(b, layout, cfg);
    EXPECT_EQ(r1.layout, r2.layout);
    EXPECT_EQ(trace_csv(r1.trace), trace_csv(r2.trace));
    EXPECT_EQ(trace_csv(r1.trace).substr(0, std::string(kTraceHeader).size()), kTraceHeader);
}

TEST(Anneal, AcceptedLayoutsStayInRoom) {
    const auto b = fixtures::case_study_bundle();
    const auto room = fixtures::case_study_room();
    const auto layout = initial_layout(b, room, catalog::Catalog::builtin(), 5);
    AnnealConfig cfg;
    cfg.seed = 5;
    cfg.snapshot_stride = 1;
    std::size_t count = 0;
    double prev = std::numeric_limits<double>::infinity();
    const auto r = optimize(b, layout, cfg, catalog::Catalog::builtin(), [&](const Snapshot& s) {
        EXPECT_EQ(s.sequence, count);
        ++count;
        EXPECT_LE(s.energy.total, prev);
        prev = s.energy.total;
        for (const auto& p : s.layout.placements) {
            EXPECT_TRUE(room.contains(p.footprint));
        }
    });
    EXPECT_EQ(count, r.accepted_moves + 1);
    EXPECT_EQ(r.snapshot_count, count);
}

TEST(Anneal, NoAcceptedMovesGivesOneSnapshot) {
    // a sofa spanning the whole room width cannot move anywhere else
    const auto cat = catalog::Catalog::parse("[seating.SofaFactory]\nobject = sofas\ntier = large\nvariants = 2x2x0.8\n");
    const auto room = RoomPolygon::rectangle(2, 2);
    const auto layout = initial_layout(sofa_bundle(), room, cat, 1);
    AnnealConfig cfg;
    cfg.moves = {0.0, 0.0, 0.0, 1.0};
    const auto snaps = snapshot_stream(sofa_bundle(), layout, cfg, cat);
    ASSERT_EQ(snaps.size(), 1u);
    EXPECT_TRUE(snaps[0].final);
}

TEST(Anneal, SofaFindsTheWall) {
    const auto b = sofa_bundle();
    const auto room = RoomPolygon::rectangle(4, 5);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        AnnealConfig cfg;
        cfg.seed = seed;
        const auto r = optimize(b, initial_layout(b, room, catalog::Catalog::builtin(), seed), cfg);
        const auto g = geometry::nearest_wall_gap(r.layout.placements[0].footprint, Face::Back, room);
        good += g.gap <= 0.05 ? 1 : 0;
    }
    EXPECT_GE(good, 18);
}

TEST(Anneal, CaseStudyEnergyDrops) {
    const auto b = fixtures::case_study_bundle();
    const auto room = fixtures::case_study_room();
    std::vector<double> before;
    std::vector<double> after;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        AnnealConfig cfg;
        cfg.seed = seed;
        const auto r = optimize(b, initial_layout(b, room, catalog::Catalog::builtin(), seed), cfg);
        before.push_back(r.initial_energy.total);
        after.push_back(r.energy.total);
    }
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    const double med_before = (before[9] + before[10]) / 2;
    const double med_after = (after[9] + after[10]) / 2;
    std::cout << "median initial " << med_before << " final " << med_after << "\n";
    EXPECT_LE(med_after, 0.3 * med_before);
}

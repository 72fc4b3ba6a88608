#include <gtest/gtest.h>

#include <random>

#include "codesign/geometry.hpp"
#include "oracle/geometry_oracle.hpp"

using namespace codesign::geometry;

namespace {

oracle::Rect to_rect(const Footprint& f) {
    return {f.center().x, f.center().y, f.half_width(), f.half_depth(), f.rotation_deg()};
}

Footprint random_footprint(std::mt19937_64& rng, double span) {
    std::uniform_real_distribution<double> pos(-span, span);
    std::uniform_real_distribution<double> ext(0.1, 1.2);
    std::uniform_real_distribution<double> rot(0.0, 360.0);
    return Footprint({pos(rng), pos(rng)}, ext(rng), ext(rng), rot(rng));
}

}  // namespace

TEST(Geometry, RotationConvention) {
    const Footprint f({0, 0}, 1.0, 0.5, 90.0);
    EXPECT_NEAR(f.front_dir().x, -1.0, 1e-12);
    EXPECT_NEAR(f.front_dir().y, 0.0, 1e-12);
    EXPECT_NEAR(f.right_dir().y, 1.0, 1e-12);
    EXPECT_NEAR(rotation_facing({1.0, 0.0}), 270.0, 1e-12);
    EXPECT_DOUBLE_EQ(Footprint({0, 0}, 1, 1, -90).rotation_deg(), 270.0);
    EXPECT_DOUBLE_EQ(Footprint({0, 0}, 1, 1, 720).rotation_deg(), 0.0);
}

TEST(Geometry, CornersMatchRotationMatrix) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Footprint f = random_footprint(rng, 3.0);
        const auto mine = f.corners();
        const auto ref = oracle::corners(to_rect(f));
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(mine[k].x, ref[k].x, 1e-9);
            EXPECT_NEAR(mine[k].y, ref[k].y, 1e-9);
        }
        EXPECT_GT(polygon_signed_area(f.polygon()), 0.0);
    }
}

TEST(Room, NormalizesWindingAndRemapsFeatures) {
    // clockwise input; the door sits on input wall 0, from (0,0) to (0,4)
    std::vector<Vec2> cw = {{0, 0}, {0, 4}, {4, 4}, {4, 0}};
    RoomPolygon room(cw, {{FeatureKind::Door, 0, 1.0, 2.0, 0.8}});
    EXPECT_GT(polygon_signed_area(room.vertices()), 0.0);
    EXPECT_DOUBLE_EQ(room.area(), 16.0);
    const Segment door = room.feature_segment(room.features()[0]);
    // same physical span after the wall is reversed
    EXPECT_NEAR(door.a.x, 0.0, 1e-12);
    EXPECT_NEAR(door.b.x, 0.0, 1e-12);
    EXPECT_NEAR(std::min(door.a.y, door.b.y), 1.0, 1e-12);
    EXPECT_NEAR(std::max(door.a.y, door.b.y), 2.0, 1e-12);
}

TEST(Room, RejectsInvalidPolygons) {
    EXPECT_THROW(RoomPolygon({{0, 0}, {1, 0}}), InvalidRoom);
    EXPECT_THROW(RoomPolygon({{0, 0}, {1, 0}, {2, 0}}), InvalidRoom);
    EXPECT_THROW(RoomPolygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}), InvalidRoom);
    EXPECT_THROW(RoomPolygon::rectangle(4, 4, {{FeatureKind::Door, 0, 3.0, 5.0, 0.8}}), InvalidRoom);
    EXPECT_THROW(RoomPolygon::rectangle(4, 4, {{FeatureKind::Door, 7, 1.0, 2.0, 0.8}}), InvalidRoom);
    EXPECT_THROW(RoomPolygon::rectangle(4, 4, {{FeatureKind::Door, 0, 1.0, 2.0, -1.0}}), InvalidRoom);
}

TEST(Room, LShapedContainment) {
    RoomPolygon room({{0, 0}, {4, 0}, {4, 2}, {2, 2}, {2, 4}, {0, 4}});
    EXPECT_DOUBLE_EQ(room.area(), 12.0);
    EXPECT_TRUE(room.contains(Footprint({1, 1}, 0.5, 0.5, 0)));
    EXPECT_FALSE(room.contains(Footprint({3, 3}, 0.5, 0.5, 0)));
    // corners inside, but the notch cuts through the middle
    EXPECT_FALSE(room.contains(Footprint({2.2, 2.2}, 0.3, 2.5, 45)));
    EXPECT_NEAR(room.outside_area(Footprint({2, 2}, 1, 1, 0)), 1.0, 1e-9);
}

TEST(WallGap, WorkedExamples) {
    const auto room = RoomPolygon::rectangle(4, 4);
    // back toward x = 0 means front points along +x
    const double rot = rotation_facing({1, 0});
    const auto g0 = nearest_wall_gap(Footprint({0.5, 0.5}, 0.5, 0.5, rot), Face::Back, room);
    EXPECT_NEAR(g0.gap, 0.0, 1e-12);
    EXPECT_NEAR(g0.angle_dev, 0.0, 1e-9);
    const auto g1 = face_wall_gap(Footprint({2, 2}, 0.5, 0.5, rot), Face::Back, room, 3);
    EXPECT_NEAR(g1.gap, 1.5, 1e-12);
    EXPECT_NEAR(g1.angle_dev, 0.0, 1e-9);
}

TEST(WallGap, RotatedFaceMatchesDenseSampling) {
    const auto room = RoomPolygon::rectangle(4, 4);
    const Footprint f({0.9, 2.0}, 0.5, 0.3, rotation_facing({1, 0}) + 30.0);
    const auto g = nearest_wall_gap(f, Face::Back, room);
    const Segment s = f.face(Face::Back);
    double best = 1e300;
    std::size_t best_wall = 0;
    for (int i = 0; i <= 10000; ++i) {
        const double t = i / 10000.0;
        const Vec2 p = s.a + (s.b - s.a) * t;
        const oracle::P op{p.x, p.y};
        const auto& v = room.vertices();
        for (std::size_t w = 0; w < v.size(); ++w) {
            const auto a = v[w];
            const auto b = v[(w + 1) % v.size()];
            const double d = oracle::seg_dist(op, {a.x, a.y}, {b.x, b.y});
            if (d < best) {
                best = d;
                best_wall = w;
            }
        }
    }
    EXPECT_NEAR(g.gap, best, 1e-6);
    EXPECT_EQ(g.wall_index, best_wall);
    EXPECT_NEAR(g.angle_dev, 30.0, 1e-6);
}

TEST(WallGap, OutsideThrows) {
    const auto room = RoomPolygon::rectangle(4, 4);
    EXPECT_THROW(nearest_wall_gap(Footprint({0.2, 2}, 0.5, 0.5, 0), Face::Back, room), FootprintOutsideRoom);
}

TEST(WallGap, CoincidentFaceIsZeroOnEveryWall) {
    RoomPolygon room({{0, 0}, {5, 0}, {6, 3}, {2, 5}, {-1, 3}});
    for (std::size_t w = 0; w < room.wall_count(); ++w) {
        const Segment s = room.wall(w);
        const Vec2 n = room.inward_normal(w);
        const Vec2 mid = s.midpoint();
        const Footprint f(mid + n * 0.3, 0.3, 0.3, rotation_facing(n));
        const auto g = nearest_wall_gap(f, Face::Back, room);
        EXPECT_NEAR(g.gap, 0.0, 1e-9);
        EXPECT_NEAR(g.angle_dev, 0.0, 1e-7);
    }
}

TEST(Overlap, TrivialCases) {
    const Footprint a({0, 0}, 0.5, 0.5, 0);
    EXPECT_NEAR(footprint_overlap_area(a, a), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(footprint_overlap_area(a, Footprint({5, 0}, 0.5, 0.5, 0)), 0.0);
    EXPECT_NEAR(footprint_overlap_area(a, Footprint({0.5, 0}, 0.5, 0.5, 0)), 0.5, 1e-12);
}

TEST(Overlap, MatchesMonteCarlo) {
    const Footprint a({0, 0}, 0.5, 0.5, 0);
    const Footprint b({0.5, 0}, 0.5, 0.5, 45);
    const double mc = oracle::mc_overlap(to_rect(a), to_rect(b), 1000, 11);
    EXPECT_NEAR(footprint_overlap_area(a, b), mc, 1e-3);
}

TEST(Overlap, RandomPairsMatchMonteCarlo) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 25; ++i) {
        const Footprint a = random_footprint(rng, 0.8);
        const Footprint b = random_footprint(rng, 0.8);
        const double mc = oracle::mc_overlap(to_rect(a), to_rect(b), 400, 100 + i);
        EXPECT_NEAR(footprint_overlap_area(a, b), mc, 1e-2) << i;
    }
}

TEST(Overlap, Properties) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Footprint a = random_footprint(rng, 1.5);
        const Footprint b = random_footprint(rng, 1.5);
        const double ab = footprint_overlap_area(a, b);
        EXPECT_EQ(ab, footprint_overlap_area(b, a));
        EXPECT_LE(ab, std::min(a.area(), b.area()) + 1e-12);
        EXPECT_GE(ab, 0.0);
        const Vec2 d{3.7, -1.25};
        EXPECT_NEAR(ab, footprint_overlap_area(a.translated(d), b.translated(d)), 1e-9);
    }
}

TEST(PairDistance, TrivialCases) {
    const Footprint a({0, 0}, 0.5, 0.5, 0);
    EXPECT_DOUBLE_EQ(pair_distance(a, Footprint({0.3, 0.2}, 0.5, 0.5, 20)), 0.0);
    EXPECT_NEAR(pair_distance(a, Footprint({3, 0}, 0.5, 0.5, 0)), 2.0, 1e-12);
    // crossing rectangles with no corner inside the other
    EXPECT_DOUBLE_EQ(pair_distance(Footprint({0, 0}, 2, 0.1, 0), Footprint({0, 0}, 0.1, 2, 0)), 0.0);
}

TEST(PairDistance, MatchesDenseSampling) {
    std::mt19937_64 rng(9);
    int checked = 0;
    while (checked < 40) {
        const Footprint a = random_footprint(rng, 3.0);
        const Footprint b = random_footprint(rng, 3.0);
        if (footprint_overlap_area(a, b) > 0.0) {
            continue;
        }
        const double ref = oracle::sampled_distance(to_rect(a), to_rect(b), 4000);
        EXPECT_NEAR(pair_distance(a, b), ref, 1e-4);
        ++checked;
    }
}

TEST(PairDistance, Properties) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 2000; ++i) {
        const Footprint a = random_footprint(rng, 3.0);
        const Footprint b = random_footprint(rng, 3.0);
        const double ab = pair_distance(a, b);
        EXPECT_EQ(ab, pair_distance(b, a));
        EXPECT_GE(ab, 0.0);
        const Vec2 d{-2.5, 8.0};
        EXPECT_NEAR(ab, pair_distance(a.translated(d), b.translated(d)), 1e-9);
    }
}

TEST(ClearanceZone, FrontOfSofa) {
    const Footprint sofa({2, 1}, 1.0, 0.45, 0);
    const Footprint z = clearance_zone(sofa, ZoneDir::Front, 0.3);
    EXPECT_NEAR(z.width(), 2.0, 1e-12);
    EXPECT_NEAR(z.depth(), 0.3, 1e-12);
    const Segment front = sofa.face(Face::Front);
    const Segment zback = z.face(Face::Back);
    EXPECT_NEAR(segment_distance(front, zback), 0.0, 1e-12);
    EXPECT_NEAR(z.center().y, 1.0 + 0.45 + 0.15, 1e-12);
    EXPECT_DOUBLE_EQ(clearance_zone(sofa, ZoneDir::Back, 0.0).area(), 0.0);
    EXPECT_EQ(clearance_zone(sofa, ZoneDir::Down, 0.7), sofa);
    EXPECT_THROW(clearance_zone(sofa, ZoneDir::Front, -0.1), std::invalid_argument);
}

TEST(ClearanceZone, RotatedCornersMatchHandComputation) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const Footprint f = random_footprint(rng, 2.0);
        const double depth = 0.05 + 0.01 * i;
        for (const auto dir : {ZoneDir::Front, ZoneDir::Back}) {
            const Footprint z = clearance_zone(f, dir, depth);
            const double v0 = dir == ZoneDir::Front ? f.half_depth() : -f.half_depth() - depth;
            const double v1 = dir == ZoneDir::Front ? f.half_depth() + depth : -f.half_depth();
            const auto r = to_rect(f);
            std::vector<oracle::P> expected = {oracle::to_world(r, -f.half_width(), v0), oracle::to_world(r, f.half_width(), v0),
                                               oracle::to_world(r, f.half_width(), v1), oracle::to_world(r, -f.half_width(), v1)};
            const auto got = z.corners();
            for (int k = 0; k < 4; ++k) {
                EXPECT_NEAR(got[k].x, expected[k].x, 1e-9);
                EXPECT_NEAR(got[k].y, expected[k].y, 1e-9);
            }
        }
    }
}

TEST(DoorSwing, SquareExtrudedInward) {
    const auto room = RoomPolygon::rectangle(4, 5, {{FeatureKind::Door, 0, 1.0, 2.0, 0.9}, {FeatureKind::Window, 1, 1, 2, 0}});
    const auto z = room.swing_zone(room.features()[0]);
    ASSERT_TRUE(z.has_value());
    EXPECT_NEAR(z->area(), 0.81, 1e-12);
    EXPECT_NEAR(z->center().x, 1.5, 1e-12);
    EXPECT_NEAR(z->center().y, 0.45, 1e-12);
    EXPECT_TRUE(room.contains(*z));
    EXPECT_FALSE(room.swing_zone(room.features()[1]).has_value());
}

#pragma once

// Satisfaction predicates for every constraint kind, restated from their definitions.
// Each returns a signed margin: > 0 satisfied, < 0 violated, ~0 on the tolerance boundary.

#include <algorithm>
#include <array>
#include <cmath>

#include "codesign/ruledsl.hpp"
#include "oracle/term_oracle.hpp"

namespace oracle {

enum class Side { Back, Right, Front, Left };

// Endpoints follow the corner order (back-left, back-right, front-right, front-left).
inline std::pair<P, P> face_of(const Rect& r, Side s) {
    const auto c = corners(r);
    switch (s) {
    case Side::Back:
        return {c[0], c[1]};
    case Side::Right:
        return {c[1], c[2]};
    case Side::Front:
        return {c[2], c[3]};
    case Side::Left:
        return {c[3], c[0]};
    }
    return {c[0], c[1]};
}

inline P outward(const Rect& r, Side s) {
    const P f = front_of(r);
    const P rt = right_of(r);
    switch (s) {
    case Side::Back:
        return {-f.x, -f.y};
    case Side::Right:
        return rt;
    case Side::Front:
        return f;
    case Side::Left:
        return {-rt.x, -rt.y};
    }
    return f;
}

inline P neg(P p) { return {-p.x, -p.y}; }

inline double face_gap(const Rect& a, Side sa, P w0, P w1) {
    const auto [p, q] = face_of(a, sa);
    return seg_seg(p, q, w0, w1);
}

inline double face_face_gap(const Rect& a, Side sa, const Rect& b, Side sb) {
    const auto [p, q] = face_of(a, sa);
    const auto [r, s] = face_of(b, sb);
    return seg_seg(p, q, r, s);
}

struct ConstraintOracle {
    RectRoom room;

    // Margin of "face s is within [lo, hi] of wall w and misaligned by at most max_deg".
    double wall_margin(const Rect& r, Side s, std::size_t w, double lo, double hi, double max_deg) const {
        const auto v = room.verts();
        const double gap = face_gap(r, s, v[w], v[(w + 1) % 4]);
        const double ang = angle_deg(outward(r, s), neg(room.inward(w)));
        return std::min({gap - lo, hi - gap, (max_deg - ang) / 180.0});
    }

    double any_wall(const Rect& r, std::initializer_list<Side> sides, double lo, double hi, double max_deg) const {
        double best = -1e300;
        for (std::size_t w = 0; w < 4; ++w) {
            for (const Side s : sides) {
                best = std::max(best, wall_margin(r, s, w, lo, hi, max_deg));
            }
        }
        return best;
    }

    double corner(const Rect& r) const {
        const auto v = room.verts();
        double best = -1e300;
        for (std::size_t w = 0; w < 4; ++w) {
            const double back = wall_margin(r, Side::Back, w, -1e9, 0.05, 5.0);
            double side = -1e300;
            for (const std::size_t adj : {(w + 1) % 4, (w + 3) % 4}) {
                for (const Side s : {Side::Left, Side::Right}) {
                    side = std::max(side, 0.05 - face_gap(r, s, v[adj], v[(adj + 1) % 4]));
                }
            }
            best = std::max(best, std::min(back, side));
        }
        return best;
    }

    static double facing(const Rect& c, Side cs, const Rect& p, Side ps, double max_gap) {
        const double gap = face_face_gap(c, cs, p, ps);
        const double ang = angle_deg(outward(c, cs), neg(outward(p, ps)));
        return std::min(max_gap - gap, (10.0 - ang) / 180.0);
    }

    static double front_to_front(const Rect& c, const Rect& p) {
        const P pf = front_of(p);
        const P pr = right_of(p);
        const double ang = angle_deg(front_of(c), neg(pf));
        double lo = 1e300, hi = -1e300, near = 1e300;
        for (const auto& q : corners(c)) {
            const double u = (q.x - p.cx) * pr.x + (q.y - p.cy) * pr.y;
            const double v = (q.x - p.cx) * pf.x + (q.y - p.cy) * pf.y;
            lo = std::min(lo, u);
            hi = std::max(hi, u);
            near = std::min(near, v);
        }
        const double overlap = std::max(0.0, std::min(hi, p.hw) - std::max(lo, -p.hw));
        const double min_width = std::min(hi - lo, 2 * p.hw);
        const double sep = near - p.hd;
        return std::min({(10.0 - ang) / 180.0, overlap - 0.5 * min_width, sep - 0.05, 1.0 - sep});
    }

    // right_flank: the instance's expected side of the parent.
    static double flank(const Rect& c, const Rect& p, bool right_flank) {
        const P pf = front_of(p);
        P axis = right_of(p);
        if (!right_flank) {
            axis = neg(axis);
        }
        double near = 1e300;
        for (const auto& q : corners(c)) {
            near = std::min(near, (q.x - p.cx) * axis.x + (q.y - p.cy) * axis.y);
        }
        const double gap = near - p.hw;
        const double along = std::abs((c.cx - p.cx) * pf.x + (c.cy - p.cy) * pf.y);
        return std::min({gap, 0.15 - gap, p.hd - along});
    }

    double margin(codesign::ruledsl::ConstraintKind kind, const Rect& c, const Rect* parent, bool right_flank) const {
        using K = codesign::ruledsl::ConstraintKind;
        switch (kind) {
        case K::RoomNone:
        case K::ObjectNone:
            return 1.0;
        case K::AgainstWall:
            return any_wall(c, {Side::Back}, -1e9, 0.05, 5.0);
        case K::FlushWall:
            return any_wall(c, {Side::Back}, -1e9, 0.01, 5.0);
        case K::SpacedWall:
            return any_wall(c, {Side::Back}, 0.10, 0.50, 5.0);
        case K::SideAgainstWall:
            return any_wall(c, {Side::Left, Side::Right}, -1e9, 0.05, 5.0);
        case K::BackNearWall:
            return any_wall(c, {Side::Back}, -1e9, 0.30, 15.0);
        case K::SideNearWall:
            return any_wall(c, {Side::Left, Side::Right}, -1e9, 0.30, 15.0);
        case K::CornerAgainstWall:
            return corner(c);
        case K::FrontAgainst:
            return std::max({facing(c, Side::Front, *parent, Side::Front, 0.05),
                             facing(c, Side::Front, *parent, Side::Left, 0.05),
                             facing(c, Side::Front, *parent, Side::Right, 0.05)});
        case K::FrontToFront:
            return front_to_front(c, *parent);
        case K::LeftrightLeftright:
            return flank(c, *parent, right_flank);
        case K::SideBySide: {
            double best = -1e300;
            for (const Side a : {Side::Left, Side::Right}) {
                for (const Side b : {Side::Left, Side::Right}) {
                    best = std::max(best, facing(c, a, *parent, b, 0.20));
                }
            }
            return best;
        }
        case K::BackToBack:
            return facing(c, Side::Back, *parent, Side::Back, 0.20);
        }
        return 1.0;
    }
};

}  // namespace oracle

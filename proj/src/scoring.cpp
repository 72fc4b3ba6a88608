#include "codesign/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace codesign::scoring {

namespace {

using geometry::Face;
using geometry::FeatureKind;
using geometry::Footprint;
using geometry::Segment;
using geometry::Vec2;
using ruledsl::ConstraintKind;
using ruledsl::Extremum;

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
double excess(double v, double limit) { return std::max(0.0, v - limit); }
double excess_range(double v, double lo, double hi) { return std::max(0.0, lo - v) + std::max(0.0, v - hi); }
double angle_excess(double deg, double limit) { return excess(deg, limit) / 180.0; }

double apply_mode(Extremum mode, double raw, double weight) {
    return mode == Extremum::Min ? weight * raw : weight * (1.0 - raw);
}

// Instance-id order so that every sum and tie-break ignores placement list order.
std::vector<const Placement*> ordered(const Layout& layout) {
    std::vector<const Placement*> out;
    out.reserve(layout.placements.size());
    for (const auto& p : layout.placements) {
        out.push_back(&p);
    }
    std::sort(out.begin(), out.end(), [](const Placement* a, const Placement* b) { return a->instance_id < b->instance_id; });
    return out;
}

enum class Source { Instances, Features, Walls };

struct Related {
    Source source = Source::Instances;
    std::vector<const Placement*> instances;
    std::vector<geometry::WallFeature> features;

    bool empty() const { return source != Source::Walls && instances.empty() && features.empty(); }
};

// `obstacles` drops rugs from the furniture class, since they lie flat on the floor.
Related resolve(const std::string& name, const Placement& self, const Layout& layout, bool obstacles = false) {
    Related r;
    if (name == "walls" || name == "rooms") {
        r.source = Source::Walls;
        return r;
    }
    const auto feature_class = [&](FeatureKind kind) {
        r.source = Source::Features;
        for (const auto& f : layout.room.features()) {
            if (f.kind == kind) {
                r.features.push_back(f);
            }
        }
        return r;
    };
    if (name == "doors") {
        return feature_class(FeatureKind::Door);
    }
    if (name == "windows") {
        return feature_class(FeatureKind::Window);
    }
    if (name == "opens") {
        return feature_class(FeatureKind::Open);
    }
    r.source = Source::Instances;
    if (name == "furniture") {
        for (const auto* p : ordered(layout)) {
            const bool child = p->parent_instance && *p->parent_instance == self.instance_id;
            if (p->instance_id != self.instance_id && !child && !(obstacles && p->is_rug())) {
                r.instances.push_back(p);
            }
        }
        return r;
    }
    bool known = false;
    for (const auto* p : ordered(layout)) {
        if (p->object_name == name) {
            known = true;
            if (p->instance_id != self.instance_id) {
                r.instances.push_back(p);
            }
        }
    }
    if (!known) {
        throw UnknownRelated(name);
    }
    return r;
}

// Rectangle in front of a window or opening, or the swing square of a door.
Footprint feature_zone(const geometry::RoomPolygon& room, const geometry::WallFeature& f) {
    if (const auto swing = room.swing_zone(f)) {
        return *swing;
    }
    const Segment s = room.feature_segment(f);
    const Vec2 n = room.inward_normal(f.wall);
    const double h = 0.5 * tol::kFeatureStrip;
    return Footprint(s.midpoint() + n * h, 0.5 * s.length(), h, geometry::rotation_facing(n));
}

// Nearest anchor point and its facing direction.
struct Anchor {
    Vec2 point;
    Vec2 front;
};

std::optional<Anchor> nearest_anchor(const Related& r, const Placement& p, const Layout& layout) {
    const Vec2 c = p.footprint.center();
    switch (r.source) {
    case Source::Instances: {
        const Placement* best = nullptr;
        double best_d = kInf;
        for (const auto* q : r.instances) {
            const double d = geometry::norm(q->footprint.center() - c);
            if (d < best_d) {
                best_d = d;
                best = q;
            }
        }
        if (best == nullptr) {
            return std::nullopt;
        }
        return Anchor{best->footprint.center(), best->footprint.front_dir()};
    }
    case Source::Features: {
        std::optional<Anchor> best;
        double best_d = kInf;
        for (const auto& f : r.features) {
            const Vec2 mid = layout.room.feature_segment(f).midpoint();
            const double d = geometry::norm(mid - c);
            if (d < best_d) {
                best_d = d;
                best = Anchor{mid, layout.room.inward_normal(f.wall)};
            }
        }
        return best;
    }
    case Source::Walls: {
        std::size_t wall = 0;
        const Vec2 q = layout.room.closest_boundary_point(c, &wall);
        return Anchor{q, layout.room.inward_normal(wall)};
    }
    }
    return std::nullopt;
}

double projected_half(const Footprint& f, Vec2 axis) {
    return std::abs(f.half_width() * geometry::dot(f.right_dir(), axis)) +
           std::abs(f.half_depth() * geometry::dot(f.front_dir(), axis));
}

double wall_kind(const Footprint& fp, const geometry::RoomPolygon& room, std::initializer_list<Face> faces, double lo,
                 double hi, double max_angle) {
    double best = kInf;
    for (std::size_t w = 0; w < room.wall_count(); ++w) {
        for (const Face face : faces) {
            const auto g = geometry::face_wall_gap(fp, face, room, w);
            best = std::min(best, excess_range(g.gap, lo, hi) + angle_excess(g.angle_dev, max_angle));
        }
    }
    return best;
}

double corner_kind(const Footprint& fp, const geometry::RoomPolygon& room) {
    const std::size_t n = room.wall_count();
    double best = kInf;
    for (std::size_t w = 0; w < n; ++w) {
        const auto back = geometry::face_wall_gap(fp, Face::Back, room, w);
        const double base = excess(back.gap, tol::kAgainstGap) + angle_excess(back.angle_dev, tol::kWallAngle);
        double side = kInf;
        for (const std::size_t adj : {(w + 1) % n, (w + n - 1) % n}) {
            for (const Face face : {Face::Left, Face::Right}) {
                side = std::min(side, excess(geometry::face_wall_gap(fp, face, room, adj).gap, tol::kAgainstGap));
            }
        }
        best = std::min(best, base + side);
    }
    return best;
}

double face_pair(const Footprint& c, Face cf, const Footprint& p, Face pf, double max_gap) {
    const double gap = geometry::segment_distance(c.face(cf), p.face(pf));
    const double ang = geometry::angle_between_deg(c.face_normal(cf), -p.face_normal(pf));
    return excess(gap, max_gap) + angle_excess(ang, tol::kObjectAngle);
}

double flank_kind(const Placement& child, const Placement& parent, const Layout& layout) {
    // siblings share object name and parent; even positions go right, odd go left
    std::vector<const Placement*> siblings;
    for (const auto* q : ordered(layout)) {
        if (q->object_name == child.object_name && q->parent_instance == child.parent_instance) {
            siblings.push_back(q);
        }
    }
    std::size_t index = 0;
    for (std::size_t i = 0; i < siblings.size(); ++i) {
        if (siblings[i]->instance_id == child.instance_id) {
            index = i;
        }
    }
    const Footprint& c = child.footprint;
    const Footprint& p = parent.footprint;
    const Vec2 axis = p.right_dir() * (index % 2 == 0 ? 1.0 : -1.0);
    const Vec2 d = c.center() - p.center();
    const double gap = geometry::dot(d, axis) - projected_half(c, p.right_dir()) - p.half_width();
    const double along = std::abs(geometry::dot(d, p.front_dir()));
    return excess_range(gap, 0.0, tol::kFlankGap) + excess(along, p.half_depth());
}

double front_to_front_kind(const Footprint& c, const Footprint& p) {
    const double ang = geometry::angle_between_deg(c.front_dir(), -p.front_dir());
    const Vec2 r = p.right_dir();
    const double pc = geometry::dot(p.center(), r);
    const double cc = geometry::dot(c.center(), r);
    const double ce = projected_half(c, r);
    const double overlap = std::max(0.0, std::min(pc + p.half_width(), cc + ce) - std::max(pc - p.half_width(), cc - ce));
    const double min_width = std::min(2.0 * p.half_width(), 2.0 * ce);
    const double separation =
        geometry::dot(c.center() - p.center(), p.front_dir()) - projected_half(c, p.front_dir()) - p.half_depth();
    return angle_excess(ang, tol::kObjectAngle) + excess(tol::kFrontToFrontOverlap * min_width, overlap) +
           excess_range(separation, tol::kFrontToFrontMin, tol::kFrontToFrontMax);
}

}  // namespace

bool Placement::is_rug() const { return factory == "elements.RugFactory"; }

const Placement* Layout::find(std::string_view instance_id) const {
    for (const auto& p : placements) {
        if (p.instance_id == instance_id) {
            return &p;
        }
    }
    return nullptr;
}

Placement* Layout::find(std::string_view instance_id) {
    return const_cast<Placement*>(static_cast<const Layout*>(this)->find(instance_id));
}

std::optional<double> distance_raw(const ruledsl::DistanceTerm& t, const Placement& p, const Layout& layout) {
    const Related r = resolve(t.related, p, layout);
    if (r.empty()) {
        return std::nullopt;
    }
    double d = kInf;
    switch (r.source) {
    case Source::Instances:
        for (const auto* q : r.instances) {
            d = std::min(d, geometry::pair_distance(p.footprint, q->footprint));
        }
        break;
    case Source::Features:
        for (const auto& f : r.features) {
            d = std::min(d, geometry::footprint_segment_distance(p.footprint, layout.room.feature_segment(f)));
        }
        break;
    case Source::Walls:
        for (const auto& w : layout.room.walls()) {
            d = std::min(d, geometry::footprint_segment_distance(p.footprint, w));
        }
        break;
    }
    if (!t.range) {
        return clamp01(d / layout.room.diagonal());
    }
    const auto [lo, hi] = *t.range;
    if (hi <= lo) {
        return d >= lo ? 1.0 : 0.0;
    }
    return clamp01((d - lo) / (hi - lo));
}

std::optional<double> access_raw(const ruledsl::AccessTerm& t, const Placement& p, const Layout& layout) {
    const Related r = resolve(t.related, p, layout, true);
    if (r.empty()) {
        return std::nullopt;
    }
    const geometry::ZoneDir dir = t.direction == ruledsl::AccessDirection::Front  ? geometry::ZoneDir::Front
                                  : t.direction == ruledsl::AccessDirection::Back ? geometry::ZoneDir::Back
                                                                                  : geometry::ZoneDir::Down;
    const Footprint zone = geometry::clearance_zone(p.footprint, dir, t.distance);
    if (zone.area() <= 0.0) {
        return 0.0;
    }
    double blocked = 0.0;
    switch (r.source) {
    case Source::Instances:
        for (const auto* q : r.instances) {
            blocked += geometry::footprint_overlap_area(zone, q->footprint);
        }
        break;
    case Source::Features:
        for (const auto& f : r.features) {
            blocked += geometry::footprint_overlap_area(zone, feature_zone(layout.room, f));
        }
        break;
    case Source::Walls:
        blocked = layout.room.outside_area(zone);
        break;
    }
    return clamp01(blocked / zone.area());
}

std::optional<double> angle_raw(const ruledsl::AngleTerm& t, const Placement& p, const Layout& layout) {
    using ruledsl::Orientation;
    if (t.orientation == Orientation::Top || t.orientation == Orientation::Bottom) {
        return std::nullopt;
    }
    const Related r = resolve(t.related, p, layout);
    const auto anchor = nearest_anchor(r, p, layout);
    if (!anchor) {
        return std::nullopt;
    }
    const Vec2 v = anchor->point - p.footprint.center();
    if (geometry::norm(v) < 1e-12) {
        return 0.0;
    }
    const Footprint& f = p.footprint;
    double theta = 0.0;
    switch (t.orientation) {
    case Orientation::Front:
        theta = geometry::angle_between_deg(f.front_dir(), v);
        break;
    case Orientation::Back:
        theta = geometry::angle_between_deg(-f.front_dir(), v);
        break;
    default:
        theta = std::min(geometry::angle_between_deg(f.right_dir(), v), geometry::angle_between_deg(-f.right_dir(), v));
        break;
    }
    return clamp01(theta / 180.0);
}

std::optional<double> focus_raw(const ruledsl::FocusTerm& t, const Placement& p, const Layout& layout) {
    const Related r = resolve(t.related, p, layout);
    const auto anchor = nearest_anchor(r, p, layout);
    if (!anchor) {
        return std::nullopt;
    }
    const Vec2 v = p.footprint.center() - anchor->point;
    if (geometry::norm(v) < 1e-12) {
        return 0.0;
    }
    return clamp01(geometry::angle_between_deg(anchor->front, v) / 180.0);
}

double volume_raw(const Placement& p, const Layout& layout) { return clamp01(p.footprint.area() / layout.room.area()); }

double term_loss(const ruledsl::DistanceTerm& t, const Placement& p, const Layout& layout) {
    const auto raw = distance_raw(t, p, layout);
    return raw ? apply_mode(t.mode, *raw, t.weight) : 0.0;
}

double term_loss(const ruledsl::AccessTerm& t, const Placement& p, const Layout& layout) {
    // max asks for the zone to stay clear, so obstruction is what costs
    const auto raw = access_raw(t, p, layout);
    if (!raw) {
        return 0.0;
    }
    return t.mode == Extremum::Max ? t.weight * *raw : t.weight * (1.0 - *raw);
}

double term_loss(const ruledsl::AngleTerm& t, const Placement& p, const Layout& layout) {
    const auto raw = angle_raw(t, p, layout);
    return raw ? apply_mode(t.mode, *raw, t.weight) : 0.0;
}

double term_loss(const ruledsl::FocusTerm& t, const Placement& p, const Layout& layout) {
    const auto raw = focus_raw(t, p, layout);
    return raw ? apply_mode(t.mode, *raw, t.weight) : 0.0;
}

double term_loss(const ruledsl::VolumeTerm& t, const Placement& p, const Layout& layout) {
    return apply_mode(t.mode, volume_raw(p, layout), t.weight);
}

double term_loss(const ruledsl::TermCell& t, const Placement& p, const Layout& layout) {
    return std::visit(
        [&](const auto& term) -> double {
            if constexpr (std::is_same_v<std::decay_t<decltype(term)>, std::monostate>) {
                return 0.0;
            } else {
                return term_loss(term, p, layout);
            }
        },
        t);
}

double term_set_loss(const ruledsl::ScoreTermSet& set, const Placement& p, const Layout& layout) {
    double acc = 0.0;
    if (set.distance) {
        acc += term_loss(*set.distance, p, layout);
    }
    if (set.accessibility) {
        acc += term_loss(*set.accessibility, p, layout);
    }
    if (set.angle) {
        acc += term_loss(*set.angle, p, layout);
    }
    if (set.focus) {
        acc += term_loss(*set.focus, p, layout);
    }
    if (set.volume) {
        acc += term_loss(*set.volume, p, layout);
    }
    return acc;
}

double kind_violation(ConstraintKind kind, const Placement& p, const Placement* parent, const Layout& layout) {
    const Footprint& fp = p.footprint;
    const auto& room = layout.room;
    switch (kind) {
    case ConstraintKind::RoomNone:
    case ConstraintKind::ObjectNone:
        return 0.0;
    case ConstraintKind::AgainstWall:
        return wall_kind(fp, room, {Face::Back}, 0.0, tol::kAgainstGap, tol::kWallAngle);
    case ConstraintKind::FlushWall:
        return wall_kind(fp, room, {Face::Back}, 0.0, tol::kFlushGap, tol::kWallAngle);
    case ConstraintKind::SpacedWall:
        return wall_kind(fp, room, {Face::Back}, tol::kSpacedMin, tol::kSpacedMax, tol::kWallAngle);
    case ConstraintKind::SideAgainstWall:
        return wall_kind(fp, room, {Face::Left, Face::Right}, 0.0, tol::kAgainstGap, tol::kWallAngle);
    case ConstraintKind::BackNearWall:
        return wall_kind(fp, room, {Face::Back}, 0.0, tol::kNearGap, tol::kNearAngle);
    case ConstraintKind::SideNearWall:
        return wall_kind(fp, room, {Face::Left, Face::Right}, 0.0, tol::kNearGap, tol::kNearAngle);
    case ConstraintKind::CornerAgainstWall:
        return corner_kind(fp, room);
    default:
        break;
    }
    if (parent == nullptr) {
        throw std::invalid_argument("object-relative constraint evaluated without a parent");
    }
    const Footprint& pp = parent->footprint;
    switch (kind) {
    case ConstraintKind::FrontAgainst:
        return std::min({face_pair(fp, Face::Front, pp, Face::Front, tol::kFrontAgainstGap),
                         face_pair(fp, Face::Front, pp, Face::Left, tol::kFrontAgainstGap),
                         face_pair(fp, Face::Front, pp, Face::Right, tol::kFrontAgainstGap)});
    case ConstraintKind::FrontToFront:
        return front_to_front_kind(fp, pp);
    case ConstraintKind::LeftrightLeftright:
        return flank_kind(p, *parent, layout);
    case ConstraintKind::SideBySide:
        return std::min({face_pair(fp, Face::Left, pp, Face::Right, tol::kSideBySideGap),
                         face_pair(fp, Face::Left, pp, Face::Left, tol::kSideBySideGap),
                         face_pair(fp, Face::Right, pp, Face::Right, tol::kSideBySideGap),
                         face_pair(fp, Face::Right, pp, Face::Left, tol::kSideBySideGap)});
    case ConstraintKind::BackToBack:
        return face_pair(fp, Face::Back, pp, Face::Back, tol::kBackToBackGap);
    default:
        return 0.0;
    }
}

double constraint_violation(const ruledsl::ConstraintRule& rule, const Placement& p, const Layout& layout) {
    const auto sum_kinds = [&](const Placement* parent) {
        double acc = 0.0;
        for (const auto k : rule.kinds) {
            acc += kind_violation(k, p, parent, layout);
        }
        return acc;
    };
    if (rule.relative_to_room()) {
        return sum_kinds(nullptr);
    }
    if (p.parent_instance) {
        if (const auto* parent = layout.find(*p.parent_instance)) {
            return sum_kinds(parent);
        }
    }
    double best = kInf;
    for (const auto* q : ordered(layout)) {
        if (q->object_name == rule.parent && q->instance_id != p.instance_id) {
            best = std::min(best, sum_kinds(q));
        }
    }
    return best == kInf ? 0.0 : best;
}

double hard_penalty(const Layout& layout) {
    const auto ps = ordered(layout);
    std::vector<Footprint> swings;
    for (const auto& f : layout.room.features()) {
        if (const auto z = layout.room.swing_zone(f)) {
            swings.push_back(*z);
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const Footprint& a = ps[i]->footprint;
        acc += layout.room.outside_corner_depth(a) + layout.room.outside_area(a);
        if (ps[i]->is_rug()) {
            continue;
        }
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (!ps[j]->is_rug()) {
                acc += geometry::footprint_overlap_area(a, ps[j]->footprint);
            }
        }
        for (const auto& z : swings) {
            acc += geometry::footprint_overlap_area(a, z);
        }
    }
    return acc;
}

Energy total_energy(const ruledsl::RuleBundle& bundle, const Layout& layout, const ScoringConfig& config) {
    Energy e;
    for (const auto* p : ordered(layout)) {
        if (const auto* set = ruledsl::find_score_terms(bundle.score_terms, p->object_name)) {
            e.loss += term_set_loss(*set, *p, layout);
        }
        if (const auto* rule = ruledsl::find_constraint(bundle.constraints, p->object_name)) {
            e.violation += constraint_violation(*rule, *p, layout);
        }
    }
    e.violation += config.hard_weight * hard_penalty(layout);
    e.total = e.loss + config.lambda * e.violation;
    return e;
}

bool is_feasible(const Layout& layout) {
    constexpr double kOverlapTol = 1e-6;
    const auto ps = ordered(layout);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!layout.room.contains(ps[i]->footprint)) {
            return false;
        }
        if (ps[i]->is_rug()) {
            continue;
        }
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            if (!ps[j]->is_rug() && geometry::footprint_overlap_area(ps[i]->footprint, ps[j]->footprint) > kOverlapTol) {
                return false;
            }
        }
        for (const auto& f : layout.room.features()) {
            if (const auto z = layout.room.swing_zone(f);
                z && geometry::footprint_overlap_area(ps[i]->footprint, *z) > kOverlapTol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace codesign::scoring

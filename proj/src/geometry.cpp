#include "codesign/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace codesign::geometry {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kAreaTol = 1e-9;

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool on_segment(Vec2 p, const Segment& s, double tol) { return point_segment_distance(p, s) <= tol; }

// Lexicographic order on footprint parameters, used to make pairwise queries symmetric bit-for-bit.
bool footprint_less(const Footprint& a, const Footprint& b) {
    const auto key = [](const Footprint& f) {
        return std::array<double, 5>{f.center().x, f.center().y, f.half_width(), f.half_depth(), f.rotation_deg()};
    };
    return key(a) < key(b);
}

}  // namespace

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 normalized(Vec2 a) {
    const double n = norm(a);
    if (n == 0.0) {
        return {0.0, 0.0};
    }
    return {a.x / n, a.y / n};
}

Vec2 rotated(Vec2 a, double deg) {
    const double r = deg * kDegToRad;
    const double c = std::cos(r);
    const double s = std::sin(r);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}

double angle_between_deg(Vec2 a, Vec2 b) {
    if (norm(a) == 0.0 || norm(b) == 0.0) {
        return 0.0;
    }
    const double ang = std::atan2(std::abs(cross(a, b)), dot(a, b)) / kDegToRad;
    return std::clamp(ang, 0.0, 180.0);
}

double normalize_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) {
        r += 360.0;
    }
    if (r >= 360.0) {
        r = 0.0;
    }
    return r;
}

double Segment::length() const { return norm(b - a); }

Vec2 closest_point_on_segment(Vec2 p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) {
        return s.a;
    }
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return s.a + d * t;
}

double point_segment_distance(Vec2 p, const Segment& s) { return norm(p - closest_point_on_segment(p, s)); }

bool segments_intersect(const Segment& s, const Segment& t) {
    const double d1 = orient(t.a, t.b, s.a);
    const double d2 = orient(t.a, t.b, s.b);
    const double d3 = orient(s.a, s.b, t.a);
    const double d4 = orient(s.a, s.b, t.b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    constexpr double tol = 1e-12;
    return on_segment(s.a, t, tol) || on_segment(s.b, t, tol) || on_segment(t.a, s, tol) || on_segment(t.b, s, tol);
}

double segment_distance(const Segment& s, const Segment& t) {
    if (segments_intersect(s, t)) {
        return 0.0;
    }
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t), point_segment_distance(t.a, s),
                     point_segment_distance(t.b, s)});
}

double polygon_signed_area(const std::vector<Vec2>& pts) {
    double acc = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        acc += cross(pts[i], pts[(i + 1) % n]);
    }
    return 0.5 * acc;
}

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& subject, const std::vector<Vec2>& convex_clip) {
    std::vector<Vec2> output = subject;
    const std::size_t m = convex_clip.size();
    for (std::size_t e = 0; e < m && !output.empty(); ++e) {
        const Vec2 ca = convex_clip[e];
        const Vec2 cb = convex_clip[(e + 1) % m];
        const std::vector<Vec2> input = std::move(output);
        output.clear();
        const auto inside = [&](Vec2 p) { return orient(ca, cb, p) >= 0.0; };
        const auto intersect = [&](Vec2 p, Vec2 q) {
            const double dp = orient(ca, cb, p);
            const double dq = orient(ca, cb, q);
            const double t = dp / (dp - dq);
            return p + (q - p) * t;
        };
        for (std::size_t i = 0; i < input.size(); ++i) {
            const Vec2 cur = input[i];
            const Vec2 prev = input[(i + input.size() - 1) % input.size()];
            const bool cur_in = inside(cur);
            const bool prev_in = inside(prev);
            if (cur_in) {
                if (!prev_in) {
                    output.push_back(intersect(prev, cur));
                }
                output.push_back(cur);
            } else if (prev_in) {
                output.push_back(intersect(prev, cur));
            }
        }
    }
    return output;
}

std::string to_string(Face face) {
    switch (face) {
    case Face::Front:
        return "front";
    case Face::Back:
        return "back";
    case Face::Left:
        return "left";
    case Face::Right:
        return "right";
    }
    return "front";
}

Footprint::Footprint(Vec2 center, double half_width, double half_depth, double rotation_deg)
    : center_(center), half_width_(half_width), half_depth_(half_depth), rotation_deg_(normalize_deg(rotation_deg)) {
    if (!(half_width >= 0.0) || !(half_depth >= 0.0) || !std::isfinite(half_width) || !std::isfinite(half_depth)) {
        throw std::invalid_argument("footprint half extents must be finite and non-negative");
    }
    if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(rotation_deg)) {
        throw std::invalid_argument("footprint pose must be finite");
    }
}

Footprint Footprint::from_size(Vec2 center, double width, double depth, double rotation_deg) {
    return Footprint(center, 0.5 * width, 0.5 * depth, rotation_deg);
}

Vec2 Footprint::front_dir() const { return rotated({0.0, 1.0}, rotation_deg_); }
Vec2 Footprint::right_dir() const { return rotated({1.0, 0.0}, rotation_deg_); }

Vec2 Footprint::face_normal(Face face) const {
    switch (face) {
    case Face::Front:
        return front_dir();
    case Face::Back:
        return -front_dir();
    case Face::Right:
        return right_dir();
    case Face::Left:
        return -right_dir();
    }
    return front_dir();
}

Segment Footprint::face(Face face) const {
    const Vec2 u = right_dir() * half_width_;
    const Vec2 v = front_dir() * half_depth_;
    switch (face) {
    case Face::Front:
        return {center_ + v - u, center_ + v + u};
    case Face::Back:
        return {center_ - v + u, center_ - v - u};
    case Face::Right:
        return {center_ + u + v, center_ + u - v};
    case Face::Left:
        return {center_ - u - v, center_ - u + v};
    }
    return {center_, center_};
}

std::array<Vec2, 4> Footprint::corners() const {
    const Vec2 u = right_dir() * half_width_;
    const Vec2 v = front_dir() * half_depth_;
    return {center_ - u - v, center_ + u - v, center_ + u + v, center_ - u + v};
}

std::vector<Vec2> Footprint::polygon() const {
    const auto c = corners();
    return {c.begin(), c.end()};
}

bool Footprint::contains(Vec2 p, double tol) const {
    const Vec2 d = p - center_;
    return std::abs(dot(d, right_dir())) <= half_width_ + tol && std::abs(dot(d, front_dir())) <= half_depth_ + tol;
}

Footprint Footprint::moved_to(Vec2 center) const { return Footprint(center, half_width_, half_depth_, rotation_deg_); }
Footprint Footprint::translated(Vec2 delta) const { return moved_to(center_ + delta); }
Footprint Footprint::with_rotation(double rotation_deg) const {
    return Footprint(center_, half_width_, half_depth_, rotation_deg);
}

double rotation_facing(Vec2 dir) {
    // front_dir(theta) = (-sin theta, cos theta)
    return normalize_deg(std::atan2(-dir.x, dir.y) / kDegToRad);
}

std::string to_string(FeatureKind kind) {
    switch (kind) {
    case FeatureKind::Door:
        return "door";
    case FeatureKind::Window:
        return "window";
    case FeatureKind::Open:
        return "open";
    }
    return "door";
}

FeatureKind feature_kind_from_string(const std::string& s) {
    if (s == "door") {
        return FeatureKind::Door;
    }
    if (s == "window") {
        return FeatureKind::Window;
    }
    if (s == "open") {
        return FeatureKind::Open;
    }
    throw std::invalid_argument("unknown wall feature kind: " + s);
}

RoomPolygon::RoomPolygon(std::vector<Vec2> vertices, std::vector<WallFeature> features) {
    const std::size_t n = vertices.size();
    if (n < 3) {
        throw InvalidRoom("room polygon needs at least 3 vertices");
    }
    for (const auto& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw InvalidRoom("room polygon vertex is not finite");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (norm(vertices[(i + 1) % n] - vertices[i]) < 1e-9) {
            throw InvalidRoom("room polygon has a zero-length wall");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Segment si{vertices[i], vertices[(i + 1) % n]};
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                continue;
            }
            const Segment sj{vertices[j], vertices[(j + 1) % n]};
            if (segments_intersect(si, sj)) {
                throw InvalidRoom("room polygon is self-intersecting");
            }
        }
    }
    const double signed_area = polygon_signed_area(vertices);
    if (std::abs(signed_area) < 1e-9) {
        throw InvalidRoom("room polygon has zero area");
    }

    std::vector<double> lengths(n);
    for (std::size_t i = 0; i < n; ++i) {
        lengths[i] = norm(vertices[(i + 1) % n] - vertices[i]);
    }
    for (const auto& f : features) {
        if (f.wall >= n) {
            throw InvalidRoom("wall feature references a missing wall");
        }
        if (!(f.start >= 0.0) || !(f.end > f.start) || f.end > lengths[f.wall] + 1e-9) {
            throw InvalidRoom("wall feature span must lie within its wall");
        }
        if (!(f.swing_depth >= 0.0)) {
            throw InvalidRoom("wall feature swing depth must be non-negative");
        }
    }

    if (signed_area < 0.0) {
        std::vector<Vec2> ccw(n);
        for (std::size_t k = 0; k < n; ++k) {
            ccw[k] = vertices[(n - k) % n];
        }
        for (auto& f : features) {
            const double len = lengths[f.wall];
            const double s = f.start;
            f.start = std::max(0.0, len - f.end);
            f.end = len - s;
            f.wall = n - 1 - f.wall;
        }
        vertices = std::move(ccw);
    }
    for (auto& f : features) {
        if (f.kind != FeatureKind::Door) {
            f.swing_depth = 0.0;
        }
    }
    vertices_ = std::move(vertices);
    features_ = std::move(features);
    area_ = std::abs(signed_area);
}

RoomPolygon RoomPolygon::rectangle(double width, double depth, std::vector<WallFeature> features) {
    return RoomPolygon({{0.0, 0.0}, {width, 0.0}, {width, depth}, {0.0, depth}}, std::move(features));
}

Segment RoomPolygon::wall(std::size_t i) const { return {vertices_[i], vertices_[(i + 1) % vertices_.size()]}; }

std::vector<Segment> RoomPolygon::walls() const {
    std::vector<Segment> out;
    out.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        out.push_back(wall(i));
    }
    return out;
}

Vec2 RoomPolygon::inward_normal(std::size_t i) const {
    const Segment w = wall(i);
    const Vec2 d = normalized(w.b - w.a);
    return {-d.y, d.x};
}

Vec2 RoomPolygon::bbox_min() const {
    Vec2 m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& v : vertices_) {
        m.x = std::min(m.x, v.x);
        m.y = std::min(m.y, v.y);
    }
    return m;
}

Vec2 RoomPolygon::bbox_max() const {
    Vec2 m{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& v : vertices_) {
        m.x = std::max(m.x, v.x);
        m.y = std::max(m.y, v.y);
    }
    return m;
}

double RoomPolygon::diagonal() const { return norm(bbox_max() - bbox_min()); }

Vec2 RoomPolygon::centroid() const {
    double cx = 0.0;
    double cy = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = vertices_[i];
        const Vec2 q = vertices_[(i + 1) % n];
        const double c = cross(p, q);
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    return {cx / (6.0 * area_), cy / (6.0 * area_)};
}

Segment RoomPolygon::feature_segment(const WallFeature& f) const {
    const Segment w = wall(f.wall);
    const Vec2 d = normalized(w.b - w.a);
    return {w.a + d * f.start, w.a + d * f.end};
}

std::optional<Footprint> RoomPolygon::swing_zone(const WallFeature& f) const {
    if (f.kind != FeatureKind::Door || f.swing_depth <= 0.0) {
        return std::nullopt;
    }
    const Vec2 n = inward_normal(f.wall);
    const Vec2 mid = feature_segment(f).midpoint();
    const double h = 0.5 * f.swing_depth;
    return Footprint(mid + n * h, h, h, rotation_facing(n));
}

double RoomPolygon::distance_to_boundary(Vec2 p) const { return norm(p - closest_boundary_point(p)); }

Vec2 RoomPolygon::closest_boundary_point(Vec2 p, std::size_t* wall_index) const {
    double best = std::numeric_limits<double>::infinity();
    Vec2 best_pt{};
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Vec2 q = closest_point_on_segment(p, wall(i));
        const double d = norm(p - q);
        if (d < best) {
            best = d;
            best_pt = q;
            best_i = i;
        }
    }
    if (wall_index != nullptr) {
        *wall_index = best_i;
    }
    return best_pt;
}

bool RoomPolygon::contains(Vec2 p, double tol) const {
    if (distance_to_boundary(p) <= tol) {
        return true;
    }
    bool inside = false;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_cross) {
                inside = !inside;
            }
        }
    }
    return inside;
}

double RoomPolygon::outside_area(const Footprint& fp) const {
    const auto clipped = clip_polygon(vertices_, fp.polygon());
    const double inside = clipped.size() >= 3 ? std::abs(polygon_signed_area(clipped)) : 0.0;
    return std::max(0.0, fp.area() - inside);
}

bool RoomPolygon::contains(const Footprint& fp) const {
    for (const auto& c : fp.corners()) {
        if (!contains(c)) {
            return false;
        }
    }
    return outside_area(fp) <= kAreaTol;
}

double RoomPolygon::outside_corner_depth(const Footprint& fp) const {
    double acc = 0.0;
    for (const auto& c : fp.corners()) {
        if (!contains(c)) {
            acc += distance_to_boundary(c);
        }
    }
    return acc;
}

RoomPolygon RoomPolygon::translated(Vec2 delta) const {
    RoomPolygon out = *this;
    for (auto& v : out.vertices_) {
        v = v + delta;
    }
    return out;
}

WallGap face_wall_gap(const Footprint& fp, Face face, const RoomPolygon& room, std::size_t wall) {
    const Segment s = fp.face(face);
    WallGap g;
    g.wall_index = wall;
    g.gap = segment_distance(s, room.wall(wall));
    g.angle_dev = angle_between_deg(fp.face_normal(face), -room.inward_normal(wall));
    return g;
}

WallGap nearest_wall_gap(const Footprint& fp, Face face, const RoomPolygon& room) {
    if (!room.contains(fp)) {
        throw FootprintOutsideRoom("footprint leaves the room polygon");
    }
    WallGap best;
    best.gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < room.wall_count(); ++i) {
        const WallGap g = face_wall_gap(fp, face, room, i);
        // a face ending in a corner touches two walls; prefer the one it is aligned with
        const bool tie = std::abs(g.gap - best.gap) <= 1e-9;
        if ((g.gap < best.gap && !tie) || (tie && g.angle_dev < best.angle_dev)) {
            best = g;
        }
    }
    return best;
}

double footprint_overlap_area(const Footprint& a, const Footprint& b) {
    if (footprint_less(b, a)) {
        return footprint_overlap_area(b, a);
    }
    if (a.area() == 0.0 || b.area() == 0.0) {
        return 0.0;
    }
    const double reach = a.half_width() + a.half_depth() + b.half_width() + b.half_depth();
    if (norm(a.center() - b.center()) > reach) {
        return 0.0;
    }
    const auto clipped = clip_polygon(a.polygon(), b.polygon());
    if (clipped.size() < 3) {
        return 0.0;
    }
    return std::min({std::abs(polygon_signed_area(clipped)), a.area(), b.area()});
}

double pair_distance(const Footprint& a, const Footprint& b) {
    if (footprint_less(b, a)) {
        return pair_distance(b, a);
    }
    const auto ca = a.corners();
    const auto cb = b.corners();
    for (const auto& p : ca) {
        if (b.contains(p)) {
            return 0.0;
        }
    }
    for (const auto& p : cb) {
        if (a.contains(p)) {
            return 0.0;
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        const Segment ea{ca[i], ca[(i + 1) % 4]};
        for (std::size_t j = 0; j < 4; ++j) {
            const Segment eb{cb[j], cb[(j + 1) % 4]};
            best = std::min(best, segment_distance(ea, eb));
        }
    }
    return best;
}

double footprint_segment_distance(const Footprint& fp, const Segment& s) {
    if (fp.contains(s.a) || fp.contains(s.b)) {
        return 0.0;
    }
    const auto c = fp.corners();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        best = std::min(best, segment_distance({c[i], c[(i + 1) % 4]}, s));
    }
    return best;
}

Footprint clearance_zone(const Footprint& fp, ZoneDir dir, double depth) {
    if (!(depth >= 0.0)) {
        throw std::invalid_argument("clearance depth must be non-negative");
    }
    if (dir == ZoneDir::Down) {
        return fp;
    }
    const double sign = dir == ZoneDir::Front ? 1.0 : -1.0;
    const Vec2 offset = fp.front_dir() * (sign * (fp.half_depth() + 0.5 * depth));
    return Footprint(fp.center() + offset, fp.half_width(), 0.5 * depth, fp.rotation_deg());
}

}  // namespace codesign::geometry

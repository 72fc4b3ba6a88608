#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace codesign::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
    friend bool operator==(Vec2 a, Vec2 b) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
Vec2 normalized(Vec2 a);
/// Counter-clockwise rotation by `deg` degrees.
Vec2 rotated(Vec2 a, double deg);
/// Unsigned angle between two directions, degrees in [0, 180]. Zero vectors give 0.
double angle_between_deg(Vec2 a, Vec2 b);
/// Maps any angle to [0, 360).
double normalize_deg(double deg);

struct Segment {
    Vec2 a;
    Vec2 b;

    double length() const;
    Vec2 midpoint() const { return (a + b) * 0.5; }
};

double point_segment_distance(Vec2 p, const Segment& s);
Vec2 closest_point_on_segment(Vec2 p, const Segment& s);
bool segments_intersect(const Segment& s, const Segment& t);
double segment_distance(const Segment& s, const Segment& t);

double polygon_signed_area(const std::vector<Vec2>& pts);
/// Intersection of an arbitrary simple polygon with a convex clip polygon (CCW).
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& subject, const std::vector<Vec2>& convex_clip);

enum class Face { Front, Back, Left, Right };
std::string to_string(Face face);

/// Oriented rectangle on the floor plane. Local +depth is the front axis;
/// local +width points to the object's right when facing front.
class Footprint {
public:
    Footprint() = default;
    Footprint(Vec2 center, double half_width, double half_depth, double rotation_deg);

    static Footprint from_size(Vec2 center, double width, double depth, double rotation_deg);

    Vec2 center() const { return center_; }
    double half_width() const { return half_width_; }
    double half_depth() const { return half_depth_; }
    double width() const { return 2.0 * half_width_; }
    double depth() const { return 2.0 * half_depth_; }
    double rotation_deg() const { return rotation_deg_; }
    double area() const { return width() * depth(); }

    Vec2 front_dir() const;
    Vec2 right_dir() const;
    Vec2 face_normal(Face face) const;
    Segment face(Face face) const;
    /// Corners in counter-clockwise order.
    std::array<Vec2, 4> corners() const;
    std::vector<Vec2> polygon() const;
    bool contains(Vec2 p, double tol = 1e-12) const;

    Footprint moved_to(Vec2 center) const;
    Footprint translated(Vec2 delta) const;
    Footprint with_rotation(double rotation_deg) const;

    friend bool operator==(const Footprint&, const Footprint&) = default;

private:
    Vec2 center_{};
    double half_width_ = 0.0;
    double half_depth_ = 0.0;
    double rotation_deg_ = 0.0;
};

/// Rotation (degrees) for which a footprint's front axis points along `dir`.
double rotation_facing(Vec2 dir);

enum class FeatureKind { Door, Window, Open };
std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

/// Span [start, end] in meters along wall `wall`, measured from the wall's first vertex.
struct WallFeature {
    FeatureKind kind = FeatureKind::Door;
    std::size_t wall = 0;
    double start = 0.0;
    double end = 0.0;
    double swing_depth = 0.0;

    friend bool operator==(const WallFeature&, const WallFeature&) = default;
};

class InvalidRoom : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FootprintOutsideRoom : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RoomPolygon {
public:
    RoomPolygon() = default;
    /// Validates simplicity and positive area; stores vertices counter-clockwise.
    /// Feature wall indices refer to the input vertex order and are remapped if
    /// the winding is flipped.
    explicit RoomPolygon(std::vector<Vec2> vertices, std::vector<WallFeature> features = {});

    static RoomPolygon rectangle(double width, double depth, std::vector<WallFeature> features = {});

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<WallFeature>& features() const { return features_; }
    std::size_t wall_count() const { return vertices_.size(); }
    Segment wall(std::size_t i) const;
    std::vector<Segment> walls() const;
    Vec2 inward_normal(std::size_t wall) const;
    double area() const { return area_; }
    double diagonal() const;
    Vec2 centroid() const;
    Vec2 bbox_min() const;
    Vec2 bbox_max() const;

    Segment feature_segment(const WallFeature& f) const;
    /// Square of side swing_depth centred on the door span, extruded into the room.
    std::optional<Footprint> swing_zone(const WallFeature& f) const;

    bool contains(Vec2 p, double tol = 1e-9) const;
    bool contains(const Footprint& fp) const;
    double distance_to_boundary(Vec2 p) const;
    Vec2 closest_boundary_point(Vec2 p, std::size_t* wall_index = nullptr) const;
    /// Area of `fp` lying outside the room.
    double outside_area(const Footprint& fp) const;
    /// Sum over footprint corners of their distance outside the polygon (0 for inside corners).
    double outside_corner_depth(const Footprint& fp) const;

    RoomPolygon translated(Vec2 delta) const;

    friend bool operator==(const RoomPolygon&, const RoomPolygon&) = default;

private:
    std::vector<Vec2> vertices_;
    std::vector<WallFeature> features_;
    double area_ = 0.0;
};

struct WallGap {
    double gap = 0.0;
    std::size_t wall_index = 0;
    /// Deviation of the face's outward normal from the direction into the wall, degrees.
    double angle_dev = 0.0;
};

/// Gap between one face of the footprint and one wall, plus their angular misalignment.
WallGap face_wall_gap(const Footprint& fp, Face face, const RoomPolygon& room, std::size_t wall);
/// Throws FootprintOutsideRoom if any part of `fp` leaves the room.
WallGap nearest_wall_gap(const Footprint& fp, Face face, const RoomPolygon& room);

double footprint_overlap_area(const Footprint& a, const Footprint& b);
/// 0 when the rectangles touch or overlap.
double pair_distance(const Footprint& a, const Footprint& b);
double footprint_segment_distance(const Footprint& fp, const Segment& s);

enum class ZoneDir { Front, Back, Down };
/// Front/back: width x depth rectangle abutting that face. Down: the footprint itself.
Footprint clearance_zone(const Footprint& fp, ZoneDir dir, double depth);

}  // namespace codesign::geometry

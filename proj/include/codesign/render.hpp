#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "codesign/scene.hpp"

// Orthographic top-view raster of a room and its objects, encoded as PNG.
namespace codesign::render {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kBackground = {255, 255, 255};
inline constexpr Rgb kFloor = {238, 236, 230};
inline constexpr Rgb kWall = {30, 30, 30};
inline constexpr Rgb kDoor = {196, 64, 44};
inline constexpr Rgb kWindow = {52, 118, 214};
inline constexpr Rgb kOutline = {70, 70, 70};
inline constexpr Rgb kInk = {15, 15, 15};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h, Rgb fill);
    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb c);
    bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

struct RenderOptions {
    double px_per_m = 80.0;
    int margin = 24;
    bool labels = true;
};

/// Maps room meters to pixel coordinates (y grows downward in the image).
struct PixelTransform {
    double scale = 80.0;
    double min_x = 0.0;
    double max_y = 0.0;
    int margin = 24;

    geometry::Vec2 to_pixel(geometry::Vec2 p) const;
    /// World point at the center of pixel (px, py).
    geometry::Vec2 to_world(int px, int py) const;
};

PixelTransform transform_for(const geometry::RoomPolygon& room, const RenderOptions& options = {});

/// Fill color for the i-th distinct object name in a scene.
Rgb object_color(std::size_t name_index);

Image render_layout(const geometry::RoomPolygon& room, const std::vector<scene::SceneObject>& objects,
                    const RenderOptions& options = {});
Image render_top_view(const scene::SceneDocument& scene, const RenderOptions& options = {});

/// Draws `text` with the built-in 5x7 font; lowercase prints as uppercase, unknown glyphs as blanks.
void draw_text(Image& img, int x, int y, std::string_view text, Rgb color);
int text_width(std::string_view text);

class PngError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 8-bit RGB, no interlace.
std::string encode_png(const Image& img);
/// Reads back what encode_png writes (8-bit RGB, any standard row filter).
Image decode_png(std::string_view bytes);

}  // namespace codesign::render

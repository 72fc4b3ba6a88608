#include "codesign/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

namespace codesign::render {

namespace {

using geometry::Vec2;

// Rows top to bottom, 5 bits each, leftmost pixel in bit 4.
struct Glyph {
    char c;
    std::array<std::uint8_t, 7> rows;
};

constexpr Glyph kFont[] = {
    {'A', {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}}, {'B', {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E}},
    {'C', {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E}}, {'D', {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E}},
    {'E', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F}}, {'F', {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10}},
    {'G', {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F}}, {'H', {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11}},
    {'I', {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E}}, {'J', {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C}},
    {'K', {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11}}, {'L', {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F}},
    {'M', {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11}}, {'N', {0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11}},
    {'O', {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'P', {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10}},
    {'Q', {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D}}, {'R', {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11}},
    {'S', {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E}}, {'T', {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04}},
    {'U', {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E}}, {'V', {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04}},
    {'W', {0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0A}}, {'X', {0x11, 0x11, 0x0A, 0x04, 0x0A, 0x11, 0x11}},
    {'Y', {0x11, 0x11, 0x11, 0x0A, 0x04, 0x04, 0x04}}, {'Z', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F}},
    {'0', {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E}}, {'1', {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E}},
    {'2', {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F}}, {'3', {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E}},
    {'4', {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02}}, {'5', {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E}},
    {'6', {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E}}, {'7', {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E}}, {'9', {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1F}}, {'-', {0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C}},
};

const Glyph* glyph(char c) {
    if (c >= 'a' && c <= 'z') {
        c = static_cast<char>(c - 'a' + 'A');
    }
    for (const auto& g : kFont) {
        if (g.c == c) {
            return &g;
        }
    }
    return nullptr;
}

constexpr Rgb kPalette[] = {
    {214, 158, 96},  {120, 170, 110}, {150, 130, 200}, {230, 190, 80},  {110, 170, 190}, {200, 120, 140},
    {160, 160, 100}, {100, 140, 220}, {220, 140, 90},  {140, 200, 160}, {180, 110, 180}, {120, 120, 120},
};

bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto a = poly[i];
        const auto b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            in = !in;
        }
    }
    return in;
}

void fill_polygon(Image& img, const PixelTransform& t, const std::vector<Vec2>& poly, Rgb c) {
    double lo_x = 1e300, lo_y = 1e300, hi_x = -1e300, hi_y = -1e300;
    for (const auto& p : poly) {
        const auto q = t.to_pixel(p);
        lo_x = std::min(lo_x, q.x);
        hi_x = std::max(hi_x, q.x);
        lo_y = std::min(lo_y, q.y);
        hi_y = std::max(hi_y, q.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(lo_x)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(hi_x)));
    const int y0 = std::max(0, static_cast<int>(std::floor(lo_y)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(hi_y)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (point_in_polygon(t.to_world(x, y), poly)) {
                img.set(x, y, c);
            }
        }
    }
}

void draw_line(Image& img, Vec2 a, Vec2 b, Rgb c, int thickness = 1) {
    const double len = std::max(std::abs(b.x - a.x), std::abs(b.y - a.y));
    const int steps = std::max(1, static_cast<int>(std::ceil(len)));
    const int lo = -(thickness - 1) / 2;
    for (int i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) / steps;
        const int x = static_cast<int>(std::floor(a.x + (b.x - a.x) * s));
        const int y = static_cast<int>(std::floor(a.y + (b.y - a.y) * s));
        for (int dy = lo; dy < lo + thickness; ++dy) {
            for (int dx = lo; dx < lo + thickness; ++dx) {
                if (img.inside(x + dx, y + dy)) {
                    img.set(x + dx, y + dy, c);
                }
            }
        }
    }
}

void draw_world_line(Image& img, const PixelTransform& t, Vec2 a, Vec2 b, Rgb c, int thickness = 1) {
    draw_line(img, t.to_pixel(a), t.to_pixel(b), c, thickness);
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) {
        out.push_back(static_cast<char>((v >> s) & 0xFF));
    }
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v = (v << 8) | static_cast<unsigned char>(in[at + i]);
    }
    return v;
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

constexpr std::string_view kSignature("\x89PNG\r\n\x1a\n", 8);

}  // namespace

Image::Image(int w, int h, Rgb fill) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
        std::copy(fill.begin(), fill.end(), rgb.begin() + static_cast<std::ptrdiff_t>(i));
    }
}

Rgb Image::at(int x, int y) const {
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
}

void Image::set(int x, int y, Rgb c) {
    if (!inside(x, y)) {
        return;
    }
    const auto i = (static_cast<std::size_t>(y) * width + x) * 3;
    rgb[i] = c[0];
    rgb[i + 1] = c[1];
    rgb[i + 2] = c[2];
}

Vec2 PixelTransform::to_pixel(Vec2 p) const { return {margin + (p.x - min_x) * scale, margin + (max_y - p.y) * scale}; }

Vec2 PixelTransform::to_world(int px, int py) const {
    return {min_x + (px + 0.5 - margin) / scale, max_y - (py + 0.5 - margin) / scale};
}

PixelTransform transform_for(const geometry::RoomPolygon& room, const RenderOptions& options) {
    if (!(options.px_per_m > 0.0) || options.margin < 0) {
        throw std::invalid_argument("render scale must be positive and the margin non-negative");
    }
    return {options.px_per_m, room.bbox_min().x, room.bbox_max().y, options.margin};
}

Rgb object_color(std::size_t name_index) { return kPalette[name_index % std::size(kPalette)]; }

int text_width(std::string_view text) { return text.empty() ? 0 : static_cast<int>(text.size()) * 6 - 1; }

void draw_text(Image& img, int x, int y, std::string_view text, Rgb color) {
    for (const char c : text) {
        if (const auto* g = glyph(c)) {
            for (int r = 0; r < 7; ++r) {
                for (int col = 0; col < 5; ++col) {
                    if (g->rows[r] & (0x10 >> col)) {
                        img.set(x + col, y + r, color);
                    }
                }
            }
        }
        x += 6;
    }
}

Image render_layout(const geometry::RoomPolygon& room, const std::vector<scene::SceneObject>& objects,
                    const RenderOptions& options) {
    const auto t = transform_for(room, options);
    const auto lo = room.bbox_min();
    const auto hi = room.bbox_max();
    const int w = static_cast<int>(std::ceil((hi.x - lo.x) * t.scale)) + 2 * t.margin;
    const int h = static_cast<int>(std::ceil((hi.y - lo.y) * t.scale)) + 2 * t.margin;
    Image img(w, h, kBackground);
    if (room.vertices().empty()) {
        return img;
    }
    fill_polygon(img, t, room.vertices(), kFloor);

    // colors follow the first appearance of each object name
    std::map<std::string, std::size_t> name_index;
    for (const auto& o : objects) {
        const auto next = name_index.size();
        name_index.emplace(o.object_name, next);
    }
    // rugs first so furniture sits on top of them
    std::vector<const scene::SceneObject*> order;
    for (const auto& o : objects) {
        order.push_back(&o);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        return (a->object_name == "rugs") > (b->object_name == "rugs");
    });
    for (const auto* o : order) {
        const geometry::Footprint fp(o->position, o->variant.width / 2, o->variant.depth / 2, o->rotation);
        const auto poly = fp.polygon();
        const auto idx = name_index.at(o->object_name);
        fill_polygon(img, t, poly, object_color(idx));
        for (std::size_t i = 0; i < poly.size(); ++i) {
            draw_world_line(img, t, poly[i], poly[(i + 1) % poly.size()], kOutline);
        }
        const auto front = fp.face(geometry::Face::Front);
        const Vec2 mid{(front.a.x + front.b.x) / 2, (front.a.y + front.b.y) / 2};
        const auto dir = fp.front_dir();
        draw_world_line(img, t, mid, {mid.x + dir.x * 0.15, mid.y + dir.y * 0.15}, kInk, 2);
    }
    for (std::size_t i = 0; i < room.wall_count(); ++i) {
        const auto s = room.wall(i);
        draw_world_line(img, t, s.a, s.b, kWall, 3);
    }
    for (const auto& f : room.features()) {
        const auto s = room.feature_segment(f);
        draw_world_line(img, t, s.a, s.b, f.kind == geometry::FeatureKind::Window ? kWindow : kDoor, 5);
        if (f.kind == geometry::FeatureKind::Door && f.swing_depth > 0.0) {
            // quarter arc hinged at the span start
            const auto n = room.inward_normal(f.wall);
            const auto along = geometry::normalized({s.b.x - s.a.x, s.b.y - s.a.y});
            const double r = std::min(f.swing_depth, f.end - f.start);
            Vec2 prev{s.a.x + along.x * r, s.a.y + along.y * r};
            for (int k = 1; k <= 24; ++k) {
                const double a = (M_PI / 2) * k / 24;
                const Vec2 p{s.a.x + r * (std::cos(a) * along.x + std::sin(a) * n.x),
                             s.a.y + r * (std::cos(a) * along.y + std::sin(a) * n.y)};
                draw_world_line(img, t, prev, p, kDoor);
                prev = p;
            }
        }
    }
    if (options.labels) {
        for (const auto* o : order) {
            const auto c = t.to_pixel(o->position);
            draw_text(img, static_cast<int>(std::lround(c.x)) - text_width(o->id) / 2,
                      static_cast<int>(std::lround(c.y)) - 3, o->id, kInk);
        }
    }
    return img;
}

Image render_top_view(const scene::SceneDocument& scene, const RenderOptions& options) {
    return render_layout(scene.room.polygon, scene.objects, options);
}

std::string encode_png(const Image& img) {
    if (img.width <= 0 || img.height <= 0 || img.rgb.size() != static_cast<std::size_t>(img.width) * img.height * 3) {
        throw PngError("image buffer does not match its size");
    }
    std::string raw;
    raw.reserve(img.rgb.size() + img.height);
    const auto stride = static_cast<std::size_t>(img.width) * 3;
    for (int y = 0; y < img.height; ++y) {
        raw.push_back('\0');
        raw.append(reinterpret_cast<const char*>(img.rgb.data()) + y * stride, stride);
    }
    uLongf cap = compressBound(static_cast<uLong>(raw.size()));
    std::string z(cap, '\0');
    if (compress2(reinterpret_cast<Bytef*>(z.data()), &cap, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 9) != Z_OK) {
        throw PngError("zlib compression failed");
    }
    z.resize(cap);

    std::string out(kSignature);
    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr += std::string("\x08\x02\x00\x00\x00", 5);
    put_chunk(out, "IHDR", ihdr);
    put_chunk(out, "IDAT", z);
    put_chunk(out, "IEND", "");
    return out;
}

Image decode_png(std::string_view bytes) {
    if (bytes.substr(0, 8) != kSignature) {
        throw PngError("not a PNG stream");
    }
    std::size_t at = 8;
    int w = 0, h = 0;
    std::string z;
    while (at + 12 <= bytes.size()) {
        const auto len = get_u32(bytes, at);
        const auto type = bytes.substr(at + 4, 4);
        if (at + 12 + len > bytes.size()) {
            throw PngError("truncated chunk");
        }
        const auto data = bytes.substr(at + 8, len);
        const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(bytes.data() + at + 4), len + 4);
        if (crc != get_u32(bytes, at + 8 + len)) {
            throw PngError("chunk checksum mismatch");
        }
        if (type == "IHDR") {
            w = static_cast<int>(get_u32(data, 0));
            h = static_cast<int>(get_u32(data, 4));
            if (data.substr(8, 5) != std::string_view("\x08\x02\x00\x00\x00", 5)) {
                throw PngError("only 8-bit RGB without interlace is supported");
            }
        } else if (type == "IDAT") {
            z.append(data);
        } else if (type == "IEND") {
            break;
        }
        at += 12 + len;
    }
    if (w <= 0 || h <= 0) {
        throw PngError("missing header chunk");
    }
    const std::size_t stride = static_cast<std::size_t>(w) * 3;
    uLongf n = static_cast<uLongf>((stride + 1) * h);
    std::string raw(n, '\0');
    if (uncompress(reinterpret_cast<Bytef*>(raw.data()), &n, reinterpret_cast<const Bytef*>(z.data()),
                   static_cast<uLong>(z.size())) != Z_OK ||
        n != raw.size()) {
        throw PngError("corrupt image data");
    }
    Image img(w, h, kBackground);
    std::vector<std::uint8_t> prev(stride, 0), cur(stride);
    for (int y = 0; y < h; ++y) {
        const auto* row = reinterpret_cast<const std::uint8_t*>(raw.data()) + y * (stride + 1);
        const int filter = row[0];
        for (std::size_t i = 0; i < stride; ++i) {
            const int a = i >= 3 ? cur[i - 3] : 0;
            const int b = prev[i];
            const int c = i >= 3 ? prev[i - 3] : 0;
            int pred = 0;
            switch (filter) {
            case 0:
                break;
            case 1:
                pred = a;
                break;
            case 2:
                pred = b;
                break;
            case 3:
                pred = (a + b) / 2;
                break;
            case 4: {
                const int p = a + b - c;
                const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
                pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
                break;
            }
            default:
                throw PngError("unknown row filter");
            }
            cur[i] = static_cast<std::uint8_t>(row[1 + i] + pred);
        }
        std::copy(cur.begin(), cur.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(y * stride));
        std::swap(prev, cur);
    }
    return img;
}

}  // namespace codesign::render

#include "codesign/catalog.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "codesign/resources.hpp"
#include "codesign/text.hpp"

namespace codesign::catalog {

namespace {

Dimensions parse_dimensions(std::string_view cell, const std::string& factory) {
    const auto parts = text::split(text::trim(cell), 'x');
    if (parts.size() != 3) {
        throw CatalogError(factory + ": variant '" + std::string(cell) + "' must be WIDTHxDEPTHxHEIGHT");
    }
    std::array<double, 3> v{};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto n = text::parse_number(parts[i]);
        if (!n || *n <= 0.0) {
            throw CatalogError(factory + ": variant dimensions must be positive numbers");
        }
        v[i] = *n;
    }
    return {v[0], v[1], v[2]};
}

void validate(const FactoryEntry& e) {
    const auto& closed = canonical_factory_names();
    const bool listed = std::find(closed.begin(), closed.end(), e.factory_name) != closed.end();
    if (e.canonical && !listed) {
        throw CatalogError(e.factory_name + " is not in the canonical factory list; mark it canonical = false");
    }
    if (!e.canonical && listed) {
        throw CatalogError(e.factory_name + " is canonical and cannot be flagged as an extension");
    }
    if (!text::is_lower_identifier(e.object_name)) {
        throw CatalogError(e.factory_name + ": object name must be lowercase without spaces");
    }
    if (e.variants.empty()) {
        throw CatalogError(e.factory_name + ": at least one variant is required");
    }
    if (e.default_variant >= e.variants.size()) {
        throw CatalogError(e.factory_name + ": default variant index out of range");
    }
    if (e.front_axis != "+depth") {
        throw CatalogError(e.factory_name + ": only front_axis = +depth is supported");
    }
}

}  // namespace

std::string to_string(Tier tier) {
    switch (tier) {
    case Tier::Large:
        return "large";
    case Tier::Medium:
        return "medium";
    case Tier::Small:
        return "small";
    }
    return "medium";
}

Tier tier_from_string(std::string_view s) {
    if (s == "large") {
        return Tier::Large;
    }
    if (s == "medium") {
        return Tier::Medium;
    }
    if (s == "small") {
        return Tier::Small;
    }
    throw CatalogError("unknown tier: " + std::string(s));
}

std::size_t FactoryEntry::smallest_variant() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < variants.size(); ++i) {
        if (variants[i].area() < variants[best].area()) {
            best = i;
        }
    }
    return best;
}

const std::vector<std::string>& canonical_factory_names() {
    static const std::vector<std::string> names = {
        "seating.BedFactory",
        "seating.SofaFactory",
        "seating.ArmChairFactory",
        "seating.ChairFactory",
        "seating.OfficeChairFactory",
        "seating.BarChairFactory",
        "tables.CoffeeTableFactory",
        "tables.SideTableFactory",
        "tables.TableDiningFactory",
        "lamp.FloorLampFactory",
        "shelves.TVStandFactory",
        "shelves.SimpleBookcaseFactory",
        "shelves.CellShelfFactory",
        "shelves.LargeShelfFactory",
        "shelves.KitchenCabinetFactory",
        "shelves.SingleCabinetFactory",
        "appliances.DishwasherFactory",
        "appliances.OvenFactory",
        "appliances.BeverageFridgeFactory",
        "bathroom.StandingSinkFactory",
        "bathroom.ToiletFactory",
        "bathroom.BathtubFactory",
        "elements.RugFactory",
    };
    return names;
}

Catalog Catalog::parse(std::string_view input) {
    Catalog cat;
    FactoryEntry* current = nullptr;
    std::size_t line_no = 0;
    for (const auto raw : text::split_lines(input)) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw CatalogError("catalog line " + std::to_string(line_no) + ": malformed section header");
            }
            FactoryEntry e;
            e.factory_name = std::string(text::trim(line.substr(1, line.size() - 2)));
            for (const auto& other : cat.entries_) {
                if (other.factory_name == e.factory_name) {
                    throw CatalogError("duplicate catalog entry " + e.factory_name);
                }
            }
            cat.entries_.push_back(std::move(e));
            current = &cat.entries_.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || current == nullptr) {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": expected key = value inside a section");
        }
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        if (key == "object") {
            current->object_name = std::string(value);
        } else if (key == "tier") {
            current->tier = tier_from_string(value);
        } else if (key == "front_axis") {
            current->front_axis = std::string(value);
        } else if (key == "variants") {
            current->variants.clear();
            for (const auto cell : text::split(value, ',')) {
                current->variants.push_back(parse_dimensions(cell, current->factory_name));
            }
        } else if (key == "default") {
            const auto idx = text::parse_integer(value);
            if (!idx || *idx < 0) {
                throw CatalogError(current->factory_name + ": default must be a non-negative index");
            }
            current->default_variant = static_cast<std::size_t>(*idx);
        } else if (key == "canonical") {
            if (value != "true" && value != "false") {
                throw CatalogError(current->factory_name + ": canonical must be true or false");
            }
            current->canonical = value == "true";
        } else {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": unknown key " + std::string(key));
        }
    }
    for (const auto& e : cat.entries_) {
        validate(e);
        for (const auto& other : cat.entries_) {
            if (&other != &e && other.object_name == e.object_name) {
                throw CatalogError("object name " + e.object_name + " is used by two factories");
            }
        }
    }
    return cat;
}

Catalog Catalog::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CatalogError("cannot open catalog file " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

const Catalog& Catalog::builtin() {
    static const Catalog cat = [] {
        const auto text = embedded_resource("catalog.ini");
        if (!text) {
            throw CatalogError("built-in catalog resource is missing");
        }
        return parse(*text);
    }();
    return cat;
}

const FactoryEntry* Catalog::find(std::string_view name_or_factory) const noexcept {
    for (const auto& e : entries_) {
        if (e.factory_name == name_or_factory) {
            return &e;
        }
    }
    const std::string lowered = text::to_lower(name_or_factory);
    for (const auto& e : entries_) {
        if (e.object_name == lowered) {
            return &e;
        }
    }
    return nullptr;
}

const FactoryEntry& Catalog::lookup(std::string_view name_or_factory) const {
    if (const auto* e = find(name_or_factory)) {
        return *e;
    }
    throw UnknownFactory(std::string(name_or_factory));
}

std::vector<std::string> Catalog::extension_factories() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) {
        if (!e.canonical) {
            out.push_back(e.factory_name);
        }
    }
    return out;
}

Tier tier_of(const FactoryEntry& entry) { return entry.tier; }

}  // namespace codesign::catalog

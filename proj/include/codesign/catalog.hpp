#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace codesign::catalog {

enum class Tier { Large, Medium, Small };

std::string to_string(Tier tier);
Tier tier_from_string(std::string_view s);

struct Dimensions {
    double width = 0.0;
    double depth = 0.0;
    double height = 0.0;

    double area() const { return width * depth; }
    friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

struct FactoryEntry {
    std::string factory_name;
    std::string object_name;
    std::vector<Dimensions> variants;
    Tier tier = Tier::Medium;
    std::string front_axis = "+depth";
    std::size_t default_variant = 0;
    /// False for extension factories outside the prompt's closed factory list.
    bool canonical = true;

    std::size_t smallest_variant() const;
    friend bool operator==(const FactoryEntry&, const FactoryEntry&) = default;
};

class UnknownFactory : public std::out_of_range {
public:
    explicit UnknownFactory(const std::string& name) : std::out_of_range("unknown furniture factory: " + name) {}
};

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The closed factory vocabulary offered to the object-selection prompt.
const std::vector<std::string>& canonical_factory_names();

class Catalog {
public:
    Catalog() = default;

    /// Parses the [factory] key/value format documented in data/catalog.ini.
    static Catalog parse(std::string_view text);
    static Catalog load(const std::filesystem::path& path);
    /// The catalog compiled into the library from data/catalog.ini.
    static const Catalog& builtin();

    /// Matches a factory name exactly, or an object name case-insensitively.
    const FactoryEntry& lookup(std::string_view name_or_factory) const;
    const FactoryEntry* find(std::string_view name_or_factory) const noexcept;

    const std::vector<FactoryEntry>& entries() const { return entries_; }
    std::vector<std::string> extension_factories() const;

private:
    std::vector<FactoryEntry> entries_;
};

Tier tier_of(const FactoryEntry& entry);

}  // namespace codesign::catalog

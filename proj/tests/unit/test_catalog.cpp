#include <gtest/gtest.h>

#include <set>

#include "codesign/catalog.hpp"
#include "codesign/resources.hpp"

using namespace codesign::catalog;

TEST(Catalog, LookupByFactoryAndObjectName) {
    const auto& cat = Catalog::builtin();
    EXPECT_EQ(cat.lookup("seating.SofaFactory").object_name, "sofas");
    EXPECT_EQ(cat.lookup("coffeetables").factory_name, "tables.CoffeeTableFactory");
    EXPECT_EQ(cat.lookup("CoffeeTables").factory_name, "tables.CoffeeTableFactory");
    EXPECT_THROW(cat.lookup("seating.NoSuchFactory"), UnknownFactory);
    // factory names are matched exactly
    EXPECT_THROW(cat.lookup("seating.sofafactory"), UnknownFactory);
}

TEST(Catalog, EveryCanonicalFactoryResolves) {
    const auto& cat = Catalog::builtin();
    for (const auto& name : canonical_factory_names()) {
        const auto& e = cat.lookup(name);
        EXPECT_TRUE(e.canonical) << name;
        EXPECT_FALSE(e.variants.empty());
        for (const auto& v : e.variants) {
            EXPECT_GT(v.width, 0.0);
            EXPECT_GT(v.depth, 0.0);
            EXPECT_GT(v.height, 0.0);
        }
    }
    EXPECT_EQ(cat.extension_factories(), std::vector<std::string>{"elements.PlantFactory"});
}

TEST(Catalog, TierPartitionIsTotal) {
    const auto& cat = Catalog::builtin();
    EXPECT_EQ(tier_of(cat.lookup("sofas")), Tier::Large);
    EXPECT_EQ(tier_of(cat.lookup("coffeetables")), Tier::Medium);
    EXPECT_EQ(tier_of(cat.lookup("floorlamps")), Tier::Small);
    std::set<std::string> seen;
    std::size_t counted = 0;
    for (const auto t : {Tier::Large, Tier::Medium, Tier::Small}) {
        for (const auto& e : cat.entries()) {
            if (tier_of(e) == t) {
                EXPECT_TRUE(seen.insert(e.factory_name).second);
                ++counted;
            }
        }
    }
    EXPECT_EQ(counted, cat.entries().size());
    EXPECT_EQ(tier_of(cat.lookup("beds")), Tier::Large);
    EXPECT_EQ(tier_of(cat.lookup("diningtables")), Tier::Large);
    EXPECT_EQ(tier_of(cat.lookup("rugs")), Tier::Small);
    EXPECT_EQ(tier_of(cat.lookup("plants")), Tier::Small);
    EXPECT_EQ(tier_of(cat.lookup("toilets")), Tier::Medium);
}

TEST(Catalog, ParseErrors) {
    EXPECT_THROW(Catalog::parse("[seating.SofaFactory]\nobject = Sofas\nvariants = 1x1x1\n"), CatalogError);
    EXPECT_THROW(Catalog::parse("[x.NotListedFactory]\nobject = things\nvariants = 1x1x1\n"), CatalogError);
    EXPECT_THROW(Catalog::parse("[seating.SofaFactory]\nobject = sofas\nvariants = 1x0x1\n"), CatalogError);
    EXPECT_THROW(Catalog::parse("[seating.SofaFactory]\nobject = sofas\nvariants = 1x1x1\ndefault = 3\n"), CatalogError);
    EXPECT_THROW(Catalog::parse("object = sofas\n"), CatalogError);
    const auto ok = Catalog::parse("# c\n[x.WidgetFactory]\nobject = widgets\nvariants = 1x2x3, 2x2x2\ncanonical = false\n");
    ASSERT_EQ(ok.entries().size(), 1u);
    EXPECT_EQ(ok.entries()[0].variants[1], (Dimensions{2, 2, 2}));
    EXPECT_EQ(ok.entries()[0].smallest_variant(), 0u);
}

TEST(Resources, EmbeddedFilesPresent) {
    for (const char* name : {"catalog.ini", "prompts/spatial_selection.txt", "prompts/spatial_constraints.txt",
                             "prompts/spatial_score_terms.txt", "prompts/interactive_selection.txt",
                             "prompts/interactive_constraints.txt", "prompts/interactive_score_terms.txt",
                             "prompts/evaluator.txt", "prompts/grader.txt", "prompts/reference_guide.txt", "rubric.md"}) {
        EXPECT_TRUE(codesign::embedded_resource(name).has_value()) << name;
    }
    EXPECT_FALSE(codesign::embedded_resource("nope.txt").has_value());
}

#include <gtest/gtest.h>

#include <random>

#include "codesign/ruledsl.hpp"
#include "codesign/text.hpp"
#include "oracle/grammar_corpus.hpp"

using namespace codesign::ruledsl;

namespace {

std::vector<SelectionItem> living_selection() {
    return parse_selection(corpus::context_selection()).value;
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ParseError& e) {
        EXPECT_FALSE(e.reason().empty());
        return e.code();
    }
    ADD_FAILURE() << "expected a ParseError";
    return ErrorCode::FieldCount;
}

}  // namespace

TEST(RuleDsl, ExampleCorpusVerdicts) {
    for (const auto& c : corpus::cases()) {
        const auto v = corpus::evaluate(c);
        if (!c.expected) {
            EXPECT_TRUE(v.parsed) << c.line << " -> " << v.reason;
        } else {
            ASSERT_FALSE(v.parsed) << c.line;
            EXPECT_EQ(v.code, c.expected) << c.line << " -> " << error_code_name(*v.code) << ": " << v.reason;
            EXPECT_FALSE(v.reason.empty());
        }
    }
}

TEST(Selection, ParsesExampleLine) {
    const auto r = parse_selection("livingroom | sofas | seating.SofaFactory | 1");
    ASSERT_EQ(r.value.size(), 1u);
    EXPECT_EQ(r.value[0], (SelectionItem{"livingroom", "sofas", "seating.SofaFactory", 1}));
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_EQ(r.value[0].subset().quantity, 1);
}

TEST(Selection, EmptyAndFencedInput) {
    EXPECT_TRUE(parse_selection("").value.empty());
    const auto r = parse_selection("```\n\n  livingroom|sofas|seating.SofaFactory|2  \r\n```\n");
    ASSERT_EQ(r.value.size(), 1u);
    EXPECT_EQ(r.value[0].quantity, 2);
}

TEST(Selection, Errors) {
    try {
        parse_selection("livingroom | Sofas | seating.SofaFactory | one");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadObjectName);
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(e.reason().find("quantity"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { parse_selection("livingroom | sofas | seating.SofaFactory"); }), ErrorCode::FieldCount);
    EXPECT_EQ(code_of([] { parse_selection("livingroom | sofas | seating.NoFactory | 1"); }), ErrorCode::UnknownFactory);
    EXPECT_EQ(code_of([] { parse_selection("livingroom | sofas | sofas | 1"); }), ErrorCode::UnknownFactory);
    EXPECT_EQ(code_of([] { parse_selection("livingroom | sofas | seating.SofaFactory | 0"); }), ErrorCode::BadQuantity);
    EXPECT_EQ(code_of([] { parse_selection("living room | sofas | seating.SofaFactory | 1"); }), ErrorCode::BadRoomType);
    EXPECT_EQ(code_of([] { parse_selection("livingroom | coffee tables | tables.CoffeeTableFactory | 1"); }),
              ErrorCode::BadObjectName);
    EXPECT_EQ(code_of([] { parse_selection("livingroom |  | seating.SofaFactory | 1"); }), ErrorCode::EmptyField);
    EXPECT_EQ(code_of([] { parse_selection("livingroom | floorlamps | lamp.FloorLampFactory | 2"); }),
              ErrorCode::TooManyFloorLamps);
    EXPECT_EQ(code_of([] {
                  parse_selection("livingroom | floorlamps | lamp.FloorLampFactory | 1\n"
                                  "livingroom | readinglamps | lamp.FloorLampFactory | 1");
              }),
              ErrorCode::TooManyFloorLamps);
    // error line numbers count blank lines
    try {
        parse_selection("\nlivingroom | sofas | seating.SofaFactory | 1\n\nbad line");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Selection, DuplicatesMergeLastWins) {
    const auto r = parse_selection(
        "livingroom | chairs | seating.ChairFactory | 2\n"
        "livingroom | sofas | seating.SofaFactory | 1\n"
        "livingroom | chairs | seating.ChairFactory | 4\n");
    ASSERT_EQ(r.value.size(), 2u);
    EXPECT_EQ(r.value[0].object_name, "chairs");
    EXPECT_EQ(r.value[0].quantity, 4);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0].line, 3u);
}

TEST(Constraints, ExampleLines) {
    const auto sel = living_selection();
    const auto a = parse_constraints("coffeetables | sofas, front_to_front", sel).value;
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0], (ConstraintRule{"coffeetables", "sofas", {ConstraintKind::FrontToFront}}));
    const auto b = parse_constraints("rugs | rooms, none", sel).value;
    EXPECT_EQ(b[0], (ConstraintRule{"rugs", "rooms", {ConstraintKind::RoomNone}}));
    EXPECT_TRUE(b[0].relative_to_room());
    const auto c = parse_constraints("SideTables | Armchairs, leftright_leftright | armchairs, none", sel).value;
    EXPECT_EQ(c[0], (ConstraintRule{"sidetables", "armchairs",
                                     {ConstraintKind::LeftrightLeftright, ConstraintKind::ObjectNone}}));
}

TEST(Constraints, Errors) {
    const auto sel = living_selection();
    const auto code = [&](const std::string& s) { return code_of([&] { parse_constraints(s, sel); }); };
    EXPECT_EQ(code("tvstands | rooms, against_wall | sofas, front_against"), ErrorCode::MixedParents);
    EXPECT_EQ(code("tvstands | sofas, side_near_wall"), ErrorCode::KindParentMismatch);
    EXPECT_EQ(code("tvstands | rooms, front_to_front"), ErrorCode::KindParentMismatch);
    EXPECT_EQ(code("tvstands | rooms, hovering"), ErrorCode::UnknownConstraintKind);
    EXPECT_EQ(code("tvstands | rooms against_wall"), ErrorCode::BadConstraintCell);
    EXPECT_EQ(code("tvstands"), ErrorCode::FieldCount);
    EXPECT_EQ(code("pianos | rooms, against_wall"), ErrorCode::UnknownObject);
    EXPECT_EQ(code("coffeetables | pianos, front_to_front"), ErrorCode::UnknownObject);
    EXPECT_EQ(code("sofas | sofas, side_by_side"), ErrorCode::ParentCycle);
    EXPECT_EQ(code("sofas | rooms, against_wall | rooms, none | rooms, flush_wall"), ErrorCode::TooManyConstraints);
    EXPECT_EQ(code("sofas | coffeetables, front_to_front\ncoffeetables | sofas, front_to_front"), ErrorCode::ParentCycle);
}

TEST(Constraints, ConflictingKindsWarn) {
    const auto sel = living_selection();
    const auto r = parse_constraints("sofas | rooms, against_wall | rooms, spaced_wall", sel);
    ASSERT_EQ(r.value.size(), 1u);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_NE(r.warnings[0].message.find("conflict"), std::string::npos);
}

TEST(ScoreTerms, FullTermSet) {
    const auto sel = living_selection();
    const auto r = parse_score_terms(
        "sofas | doors, 1.5 - 3.0, max, 5.0 | furniture, cu.front_dir, 0.1, max, 6.0 | none | none | min, 8.0", sel);
    ASSERT_EQ(r.value.size(), 1u);
    const auto& s = r.value[0];
    ASSERT_TRUE(s.distance && s.accessibility && s.volume);
    EXPECT_FALSE(s.angle || s.focus);
    EXPECT_EQ(s.distance->related, "doors");
    EXPECT_EQ(s.distance->range, (DistanceRange{1.5, 3.0}));
    EXPECT_EQ(s.distance->mode, Extremum::Max);
    EXPECT_DOUBLE_EQ(s.distance->weight, 5.0);
    EXPECT_EQ(s.accessibility->direction, AccessDirection::Front);
    EXPECT_DOUBLE_EQ(s.accessibility->distance, 0.1);
    EXPECT_EQ(s.volume->mode, Extremum::Min);
    EXPECT_DOUBLE_EQ(s.volume->weight, 8.0);

    const auto rugs = parse_score_terms("rugs | none | none | none | none | none", sel).value[0];
    EXPECT_EQ(rugs, (ScoreTermSet{"rugs", {}, {}, {}, {}, {}}));
}

TEST(ScoreTerms, FlexibleRangeSpacing) {
    const auto sel = living_selection();
    const auto a = parse_score_terms("sofas | doors,1.5-3,max,5 | none | none | none | none", sel).value[0];
    EXPECT_EQ(a.distance->range, (DistanceRange{1.5, 3.0}));
    const auto b = parse_score_terms("sofas | doors, none, MAX, 5 | none | none | none | none", sel).value[0];
    EXPECT_FALSE(b.distance->range.has_value());
    EXPECT_EQ(b.distance->mode, Extremum::Max);
}

TEST(ScoreTerms, Errors) {
    const auto sel = living_selection();
    const auto code = [&](const std::string& s) { return code_of([&] { parse_score_terms(s, sel); }); };
    EXPECT_EQ(code("sofas | none | none | none | none"), ErrorCode::ColumnCount);
    EXPECT_EQ(code("sofas | doors, 1 - 2, max, 11 | none | none | none | none"), ErrorCode::WeightOutOfRange);
    EXPECT_EQ(code("sofas | doors, 1 - 2, max, -1 | none | none | none | none"), ErrorCode::WeightOutOfRange);
    EXPECT_EQ(code("sofas | doors, 3 - 2, max, 1 | none | none | none | none"), ErrorCode::BadRange);
    EXPECT_EQ(code("sofas | doors, far, max, 1 | none | none | none | none"), ErrorCode::BadRange);
    EXPECT_EQ(code("sofas | doors, 1 - 2, most, 1 | none | none | none | none"), ErrorCode::BadMinMax);
    EXPECT_EQ(code("sofas | doors, 1 - 2, max, x | none | none | none | none"), ErrorCode::BadNumber);
    EXPECT_EQ(code("sofas | none | none | tvstands, cu.up, min, 1 | none | none"), ErrorCode::IllegalOrientation);
    EXPECT_EQ(code("sofas | none | none | none | none | big"), ErrorCode::MalformedTerm);
    EXPECT_EQ(code("sofas | pianos, 1 - 2, max, 1 | none | none | none | none"), ErrorCode::UnknownRelated);
    EXPECT_EQ(code("pianos | none | none | none | none | none"), ErrorCode::UnknownObject);
    EXPECT_EQ(code("sofas | | none | none | none | none"), ErrorCode::EmptyField);
    EXPECT_EQ(code("sofas | none | none | none | min, 5 | none"), ErrorCode::TermWrongColumn);
}

TEST(ScoreTerms, DegenerateOrientationWarns) {
    const auto sel = living_selection();
    const auto r = parse_score_terms("sofas | none | none | tvstands, cu.top, min, 1 | none | none", sel);
    EXPECT_EQ(r.value[0].angle->orientation, Orientation::Top);
    EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ScoreTerms, ClassifyShapes) {
    EXPECT_EQ(classify_term_cell("min, 5"), ScoreColumn::Volume);
    EXPECT_EQ(classify_term_cell("sofas, min, 5"), ScoreColumn::Focus);
    EXPECT_EQ(classify_term_cell("sofas, cu.front, min, 5"), ScoreColumn::Angle);
    EXPECT_EQ(classify_term_cell("sofas, 1 - 2, min, 5"), ScoreColumn::Distance);
    EXPECT_EQ(classify_term_cell("furniture, cu.front_dir, 0.5, max, 2.0"), ScoreColumn::Accessibility);
    EXPECT_EQ(classify_term_cell("a"), std::nullopt);
}

TEST(Serialize, ExamplesRoundTripUpToWhitespace) {
    const auto sel =
        parse_selection("livingroom|sofas|seating.SofaFactory|1\nlivingroom | coffeetables | tables.CoffeeTableFactory | 1");
    EXPECT_EQ(serialize_selection(sel.value),
              "livingroom | sofas | seating.SofaFactory | 1\nlivingroom | coffeetables | tables.CoffeeTableFactory | 1\n");
    const auto cons = parse_constraints("coffeetables|sofas,front_to_front\nsofas | rooms, against_wall", sel.value);
    EXPECT_EQ(serialize_constraints(cons.value), "coffeetables | sofas, front_to_front\nsofas | rooms, against_wall\n");
    const std::string line =
        "sofas | doors, 1.5 - 3.0, max, 5.0 | furniture, cu.front_dir, 0.1, max, 6.0 | none | none | min, 8.0\n";
    EXPECT_EQ(serialize_score_terms(parse_score_terms(line, sel.value).value), line);
    const auto empty = serialize(RuleBundle{});
    EXPECT_TRUE(empty.selection.empty() && empty.constraints.empty() && empty.score_terms.empty());
}

namespace {

const std::vector<std::string>& factories() {
    static const std::vector<std::string> f = [] {
        std::vector<std::string> out;
        for (const auto& e : codesign::catalog::Catalog::builtin().entries()) {
            if (e.factory_name != "lamp.FloorLampFactory") {
                out.push_back(e.factory_name);
            }
        }
        return out;
    }();
    return f;
}

double random_weight(std::mt19937_64& rng) {
    // mix of round and arbitrary doubles to exercise shortest formatting
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> w(0.0, 10.0);
    switch (pick(rng)) {
    case 0:
        return std::round(w(rng));
    case 1:
        return std::round(w(rng) * 10) / 10;
    default:
        return w(rng);
    }
}

RuleBundle random_bundle(std::mt19937_64& rng) {
    RuleBundle b;
    std::uniform_int_distribution<int> count(1, 7);
    std::uniform_int_distribution<int> qty(1, 5);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const auto& fs = factories();
        b.selections.push_back({"room" + std::to_string(rng() % 3), "obj" + std::to_string(i),
                                fs[rng() % fs.size()], qty(rng)});
    }
    std::vector<ConstraintKind> room_kinds;
    std::vector<ConstraintKind> object_kinds;
    for (const auto k : kAllConstraintKinds) {
        (is_room_kind(k) ? room_kinds : object_kinds).push_back(k);
    }
    for (int i = 0; i < n; ++i) {
        if (rng() % 4 == 0) {
            continue;
        }
        ConstraintRule r;
        r.object_name = "obj" + std::to_string(i);
        // parents always have smaller indices, so no cycles
        const bool to_room = i == 0 || rng() % 2 == 0;
        r.parent = to_room ? "rooms" : "obj" + std::to_string(rng() % i);
        const auto& pool = to_room ? room_kinds : object_kinds;
        const int nk = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < nk; ++k) {
            r.kinds.push_back(pool[rng() % pool.size()]);
        }
        b.constraints.push_back(r);
    }
    const auto related = [&]() -> std::string {
        if (rng() % 2 == 0) {
            return std::string(kRelatedClasses[rng() % kRelatedClasses.size()]);
        }
        return "obj" + std::to_string(rng() % n);
    };
    for (int i = 0; i < n; ++i) {
        if (rng() % 3 == 0) {
            continue;
        }
        ScoreTermSet s;
        s.object_name = "obj" + std::to_string(i);
        const auto parent_of_child = [&](const std::string& r) {
            const auto* c = find_constraint(b.constraints, r);
            return c != nullptr && c->parent == s.object_name;
        };
        const auto mode = [&] { return rng() % 2 ? Extremum::Min : Extremum::Max; };
        if (rng() % 2) {
            DistanceTerm d{related(), std::nullopt, mode(), random_weight(rng)};
            if (rng() % 2) {
                const double lo = std::round(std::uniform_real_distribution<double>(0, 3)(rng) * 100) / 100;
                d.range = DistanceRange{lo, lo + std::round(std::uniform_real_distribution<double>(0, 3)(rng) * 100) / 100};
            }
            if (!parent_of_child(d.related)) {
                s.distance = d;
            }
        }
        if (rng() % 2) {
            AccessTerm a{related(), static_cast<AccessDirection>(rng() % 3), random_weight(rng) / 10, mode(),
                         random_weight(rng)};
            if (!parent_of_child(a.related)) {
                s.accessibility = a;
            }
        }
        if (rng() % 2) {
            AngleTerm a{related(), static_cast<Orientation>(rng() % 6), mode(), random_weight(rng)};
            if (!parent_of_child(a.related)) {
                s.angle = a;
            }
        }
        if (rng() % 2) {
            FocusTerm f{related(), mode(), random_weight(rng)};
            if (!parent_of_child(f.related)) {
                s.focus = f;
            }
        }
        if (rng() % 2) {
            s.volume = VolumeTerm{mode(), random_weight(rng)};
        }
        b.score_terms.push_back(s);
    }
    return b;
}

}  // namespace

TEST(Serialize, RandomBundlesRoundTripExactly) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        const RuleBundle b = random_bundle(rng);
        (void)validate_bundle(b);
        const auto texts = serialize(b);
        const RuleBundle back = parse_bundle(texts);
        ASSERT_EQ(back, b) << texts.selection << texts.constraints << texts.score_terms;
        const auto again = serialize(back);
        EXPECT_EQ(again.score_terms, texts.score_terms);
    }
}

TEST(Parsing, IsTotalOnRandomInput) {
    std::mt19937_64 rng(77);
    const std::string alphabet = "abcdefz|,. -;0123456789\n\tcu._rooms";
    const auto sel = living_selection();
    const auto cons = parse_constraints(corpus::context_constraints(), sel).value;
    std::vector<std::string> seeds;
    for (const auto& c : corpus::cases()) {
        seeds.push_back(c.line);
    }
    int errors = 0;
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        if (i % 2 == 0) {
            s = seeds[rng() % seeds.size()];
            const int edits = 1 + static_cast<int>(rng() % 4);
            for (int e = 0; e < edits && !s.empty(); ++e) {
                s[rng() % s.size()] = alphabet[rng() % alphabet.size()];
            }
        } else {
            const std::size_t len = rng() % 80;
            for (std::size_t k = 0; k < len; ++k) {
                s += alphabet[rng() % alphabet.size()];
            }
        }
        for (int g = 0; g < 3; ++g) {
            try {
                if (g == 0) {
                    (void)parse_selection(s);
                } else if (g == 1) {
                    (void)parse_constraints(s, sel);
                } else {
                    (void)parse_score_terms(s, sel, &cons);
                }
            } catch (const ParseError&) {
                ++errors;
            }
        }
    }
    EXPECT_GT(errors, 0);
}

TEST(Bundle, ValidateCatchesCrossListErrors) {
    RuleBundle b;
    b.selections = {{"livingroom", "sofas", "seating.SofaFactory", 1}};
    b.constraints = {{"tables", "rooms", {ConstraintKind::AgainstWall}}};
    EXPECT_EQ(code_of([&] { validate_bundle(b); }), ErrorCode::UnknownObject);
    b.constraints = {{"sofas", "rooms", {ConstraintKind::FrontToFront}}};
    EXPECT_EQ(code_of([&] { validate_bundle(b); }), ErrorCode::KindParentMismatch);
    b.constraints = {};
    b.score_terms = {{"sofas", DistanceTerm{"pianos", {}, Extremum::Min, 1.0}, {}, {}, {}, {}}};
    EXPECT_EQ(code_of([&] { validate_bundle(b); }), ErrorCode::UnknownRelated);
    b.score_terms = {};
    EXPECT_TRUE(validate_bundle(b).empty());
}

TEST(ErrorCodes, NamesAreDistinctSnakeCase) {
    std::set<std::string_view> names;
    for (const auto c : kAllErrorCodes) {
        const auto n = error_code_name(c);
        EXPECT_TRUE(codesign::text::is_lower_identifier(n)) << n;
        EXPECT_TRUE(names.insert(n).second) << n;
    }
}

#include "codesign/ruledsl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "codesign/text.hpp"

namespace codesign::ruledsl {

namespace {

using text::trim;

struct Issue {
    ErrorCode code;
    std::string reason;
};

[[noreturn]] void fail(ErrorCode code, std::size_t line, std::string reason) {
    throw ParseError(code, line, std::move(reason));
}

[[noreturn]] void fail_all(const std::vector<Issue>& issues, std::size_t line) {
    std::vector<std::string> reasons;
    reasons.reserve(issues.size());
    for (const auto& i : issues) {
        reasons.push_back(i.reason);
    }
    fail(issues.front().code, line, text::join(reasons, "; "));
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.starts_with("```");
}

std::vector<std::string> split_trimmed(std::string_view s, char sep) {
    std::vector<std::string> out;
    for (const auto part : text::split(s, sep)) {
        out.emplace_back(trim(part));
    }
    return out;
}

std::optional<ConstraintKind> room_kind_from(std::string_view tok) {
    for (const auto k : kAllConstraintKinds) {
        if (is_room_kind(k) && token(k) == tok) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<ConstraintKind> object_kind_from(std::string_view tok) {
    for (const auto k : kAllConstraintKinds) {
        if (!is_room_kind(k) && token(k) == tok) {
            return k;
        }
    }
    return std::nullopt;
}

bool selected(const std::vector<SelectionItem>& selections, std::string_view name) {
    return std::any_of(selections.begin(), selections.end(),
                       [&](const SelectionItem& s) { return s.object_name == name; });
}

Extremum parse_extremum(std::string_view tok, std::size_t line) {
    const std::string t = text::to_lower(trim(tok));
    if (t == "min") {
        return Extremum::Min;
    }
    if (t == "max") {
        return Extremum::Max;
    }
    fail(ErrorCode::BadMinMax, line, "expected min or max, got '" + std::string(tok) + "'");
}

double parse_weight(std::string_view tok, std::size_t line) {
    const auto v = text::parse_number(tok);
    if (!v) {
        fail(ErrorCode::BadNumber, line, "weight '" + std::string(tok) + "' is not a number");
    }
    if (*v < 0.0 || *v > 10.0) {
        fail(ErrorCode::WeightOutOfRange, line, "weight " + std::string(tok) + " is outside 0.0 to 10.0");
    }
    return *v;
}

std::string parse_related(std::string_view tok, std::size_t line) {
    const std::string name = text::to_lower(trim(tok));
    if (!text::is_lower_identifier(name)) {
        fail(ErrorCode::BadObjectName, line, "related object '" + std::string(tok) + "' is not a valid name");
    }
    return name;
}

std::optional<DistanceRange> parse_range(std::string_view tok, std::size_t line) {
    const auto t = trim(tok);
    if (text::to_lower(t) == "none") {
        return std::nullopt;
    }
    const auto parts = text::split(t, '-');
    if (parts.size() != 2) {
        fail(ErrorCode::BadRange, line, "distance range '" + std::string(t) + "' must be 'lo - hi' or none");
    }
    const auto lo = text::parse_number(parts[0]);
    const auto hi = text::parse_number(parts[1]);
    if (!lo || !hi) {
        fail(ErrorCode::BadRange, line, "distance range '" + std::string(t) + "' has non-numeric bounds");
    }
    if (*lo < 0.0 || *lo > *hi) {
        fail(ErrorCode::BadRange, line, "distance range '" + std::string(t) + "' needs 0 <= lo <= hi");
    }
    return DistanceRange{*lo, *hi};
}

template <class T>
void merge_last_wins(std::vector<T>& items, std::vector<std::size_t>& lines, T item, std::size_t line,
                     const std::string& key, std::vector<Warning>& warnings) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].object_name == key) {
            warnings.push_back({line, "duplicate entry for '" + key + "' replaces line " + std::to_string(lines[i])});
            items[i] = std::move(item);
            lines[i] = line;
            return;
        }
    }
    items.push_back(std::move(item));
    lines.push_back(line);
}

bool gap_conflict(ConstraintKind a, ConstraintKind b) {
    const auto pair_is = [&](ConstraintKind x, ConstraintKind y) { return (a == x && b == y) || (a == y && b == x); };
    return pair_is(ConstraintKind::AgainstWall, ConstraintKind::SpacedWall) ||
           pair_is(ConstraintKind::FlushWall, ConstraintKind::SpacedWall) ||
           pair_is(ConstraintKind::CornerAgainstWall, ConstraintKind::SpacedWall) ||
           pair_is(ConstraintKind::RoomNone, ConstraintKind::AgainstWall) ||
           pair_is(ConstraintKind::ObjectNone, ConstraintKind::FrontAgainst);
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::FieldCount:
        return "field_count";
    case ErrorCode::EmptyField:
        return "empty_field";
    case ErrorCode::BadRoomType:
        return "bad_room_type";
    case ErrorCode::BadObjectName:
        return "bad_object_name";
    case ErrorCode::BadQuantity:
        return "bad_quantity";
    case ErrorCode::UnknownFactory:
        return "unknown_factory";
    case ErrorCode::TooManyFloorLamps:
        return "too_many_floorlamps";
    case ErrorCode::BadConstraintCell:
        return "bad_constraint_cell";
    case ErrorCode::UnknownConstraintKind:
        return "unknown_constraint_kind";
    case ErrorCode::KindParentMismatch:
        return "kind_parent_mismatch";
    case ErrorCode::MixedParents:
        return "mixed_parents";
    case ErrorCode::TooManyConstraints:
        return "too_many_constraints";
    case ErrorCode::UnknownObject:
        return "unknown_object";
    case ErrorCode::ParentCycle:
        return "parent_cycle";
    case ErrorCode::ColumnCount:
        return "column_count";
    case ErrorCode::MultiTerm:
        return "multi_term";
    case ErrorCode::MalformedTerm:
        return "malformed_term";
    case ErrorCode::TermWrongColumn:
        return "term_wrong_column";
    case ErrorCode::IllegalDirection:
        return "illegal_direction";
    case ErrorCode::IllegalOrientation:
        return "illegal_orientation";
    case ErrorCode::BadMinMax:
        return "bad_min_max";
    case ErrorCode::BadNumber:
        return "bad_number";
    case ErrorCode::BadRange:
        return "bad_range";
    case ErrorCode::WeightOutOfRange:
        return "weight_out_of_range";
    case ErrorCode::UnknownRelated:
        return "unknown_related";
    case ErrorCode::ParentReferencesChild:
        return "parent_references_child";
    }
    return "unknown";
}

ParseError::ParseError(ErrorCode code, std::size_t line, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + std::string(error_code_name(code)) + ": " + reason),
      code_(code),
      line_(line),
      reason_(std::move(reason)) {}

std::string_view token(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::RoomNone:
    case ConstraintKind::ObjectNone:
        return "none";
    case ConstraintKind::AgainstWall:
        return "against_wall";
    case ConstraintKind::CornerAgainstWall:
        return "corner_against_wall";
    case ConstraintKind::FlushWall:
        return "flush_wall";
    case ConstraintKind::SpacedWall:
        return "spaced_wall";
    case ConstraintKind::SideAgainstWall:
        return "side_against_wall";
    case ConstraintKind::BackNearWall:
        return "back_near_wall";
    case ConstraintKind::SideNearWall:
        return "side_near_wall";
    case ConstraintKind::FrontAgainst:
        return "front_against";
    case ConstraintKind::FrontToFront:
        return "front_to_front";
    case ConstraintKind::LeftrightLeftright:
        return "leftright_leftright";
    case ConstraintKind::SideBySide:
        return "side_by_side";
    case ConstraintKind::BackToBack:
        return "back_to_back";
    }
    return "none";
}

bool is_room_kind(ConstraintKind kind) {
    switch (kind) {
    case ConstraintKind::RoomNone:
    case ConstraintKind::AgainstWall:
    case ConstraintKind::CornerAgainstWall:
    case ConstraintKind::FlushWall:
    case ConstraintKind::SpacedWall:
    case ConstraintKind::SideAgainstWall:
    case ConstraintKind::BackNearWall:
    case ConstraintKind::SideNearWall:
        return true;
    default:
        return false;
    }
}

std::string_view token(Extremum e) { return e == Extremum::Min ? "min" : "max"; }

std::string_view token(AccessDirection d) {
    switch (d) {
    case AccessDirection::Front:
        return "cu.front_dir";
    case AccessDirection::Back:
        return "cu.back_dir";
    case AccessDirection::Down:
        return "cu.down_dir";
    }
    return "cu.front_dir";
}

std::string_view token(Orientation o) {
    switch (o) {
    case Orientation::Front:
        return "cu.front";
    case Orientation::Side:
        return "cu.side";
    case Orientation::Back:
        return "cu.back";
    case Orientation::Top:
        return "cu.top";
    case Orientation::Leftright:
        return "cu.leftright";
    case Orientation::Bottom:
        return "cu.bottom";
    }
    return "cu.front";
}

bool is_related_class(std::string_view name) {
    return std::find(kRelatedClasses.begin(), kRelatedClasses.end(), name) != kRelatedClasses.end();
}

std::string_view column_name(ScoreColumn c) {
    switch (c) {
    case ScoreColumn::Distance:
        return "distance";
    case ScoreColumn::Accessibility:
        return "accessibility";
    case ScoreColumn::Angle:
        return "angle_alignment";
    case ScoreColumn::Focus:
        return "focus_score";
    case ScoreColumn::Volume:
        return "volume";
    }
    return "distance";
}

std::optional<ScoreColumn> classify_term_cell(std::string_view cell) {
    const auto fields = split_trimmed(trim(cell), ',');
    switch (fields.size()) {
    case 2:
        return ScoreColumn::Volume;
    case 3:
        return ScoreColumn::Focus;
    case 4:
        return text::starts_with_ci(fields[1], "cu.") ? ScoreColumn::Angle : ScoreColumn::Distance;
    case 5:
        return ScoreColumn::Accessibility;
    default:
        return std::nullopt;
    }
}

TermCell parse_term_cell(std::string_view cell, ScoreColumn column, std::size_t line) {
    const auto t = trim(cell);
    if (t.empty()) {
        fail(ErrorCode::EmptyField, line, std::string(column_name(column)) + " column is empty; use none");
    }
    if (text::to_lower(t) == "none") {
        return std::monostate{};
    }
    if (t.find(';') != std::string_view::npos) {
        fail(ErrorCode::MultiTerm, line,
             std::string(column_name(column)) + " column joins several terms with ';'; only one term per column");
    }
    const auto shape = classify_term_cell(t);
    if (!shape) {
        fail(ErrorCode::MalformedTerm, line, "cannot read '" + std::string(t) + "' as a score term");
    }
    if (*shape != column) {
        fail(ErrorCode::TermWrongColumn, line,
             std::string(column_name(*shape)) + "-shaped term '" + std::string(t) + "' in the " +
                 std::string(column_name(column)) + " column");
    }
    const auto f = split_trimmed(t, ',');
    switch (column) {
    case ScoreColumn::Distance: {
        DistanceTerm d;
        d.related = parse_related(f[0], line);
        d.range = parse_range(f[1], line);
        d.mode = parse_extremum(f[2], line);
        d.weight = parse_weight(f[3], line);
        return d;
    }
    case ScoreColumn::Accessibility: {
        AccessTerm a;
        a.related = parse_related(f[0], line);
        const std::string dir = text::to_lower(f[1]);
        bool found = false;
        for (const auto d : {AccessDirection::Front, AccessDirection::Back, AccessDirection::Down}) {
            if (token(d) == dir) {
                a.direction = d;
                found = true;
            }
        }
        if (!found) {
            fail(ErrorCode::IllegalDirection, line,
                 "direction '" + f[1] + "' is not one of cu.front_dir, cu.back_dir, cu.down_dir");
        }
        const auto dist = text::parse_number(f[2]);
        if (!dist || *dist < 0.0) {
            fail(ErrorCode::BadNumber, line, "clearance distance '" + f[2] + "' must be a non-negative number");
        }
        a.distance = *dist;
        a.mode = parse_extremum(f[3], line);
        a.weight = parse_weight(f[4], line);
        return a;
    }
    case ScoreColumn::Angle: {
        AngleTerm a;
        a.related = parse_related(f[0], line);
        const std::string ori = text::to_lower(f[1]);
        bool found = false;
        for (const auto o : {Orientation::Front, Orientation::Side, Orientation::Back, Orientation::Top,
                             Orientation::Leftright, Orientation::Bottom}) {
            if (token(o) == ori) {
                a.orientation = o;
                found = true;
            }
        }
        if (!found) {
            fail(ErrorCode::IllegalOrientation, line, "orientation '" + f[1] + "' is not a cu.* orientation");
        }
        a.mode = parse_extremum(f[2], line);
        a.weight = parse_weight(f[3], line);
        return a;
    }
    case ScoreColumn::Focus: {
        FocusTerm fo;
        fo.related = parse_related(f[0], line);
        fo.mode = parse_extremum(f[1], line);
        fo.weight = parse_weight(f[2], line);
        return fo;
    }
    case ScoreColumn::Volume: {
        VolumeTerm v;
        v.mode = parse_extremum(f[0], line);
        v.weight = parse_weight(f[1], line);
        return v;
    }
    }
    return std::monostate{};
}

Parsed<std::vector<SelectionItem>> parse_selection(std::string_view input, const catalog::Catalog& cat) {
    Parsed<std::vector<SelectionItem>> out;
    std::vector<std::size_t> lines;
    std::size_t line_no = 0;
    for (const auto raw : text::split_lines(input)) {
        ++line_no;
        if (skippable(raw)) {
            continue;
        }
        const auto fields = split_trimmed(raw, '|');
        if (fields.size() != 4) {
            fail(ErrorCode::FieldCount, line_no,
                 "expected 4 fields 'room_type | selected_objects | furniture_factory | quantity', got " +
                     std::to_string(fields.size()));
        }
        for (const auto& f : fields) {
            if (f.empty()) {
                fail(ErrorCode::EmptyField, line_no, "a field is empty");
            }
        }
        std::vector<Issue> issues;
        if (!text::is_lower_identifier(fields[0])) {
            issues.push_back({ErrorCode::BadRoomType, "room type '" + fields[0] + "' must be lowercase without spaces"});
        }
        if (!text::is_lower_identifier(fields[1])) {
            issues.push_back(
                {ErrorCode::BadObjectName, "object name '" + fields[1] + "' must be lowercase plural without spaces"});
        }
        const auto* entry = cat.find(fields[2]);
        if (entry == nullptr || entry->factory_name != fields[2]) {
            issues.push_back({ErrorCode::UnknownFactory, "'" + fields[2] + "' is not an available factory"});
        }
        const auto qty = text::parse_integer(fields[3]);
        if (!qty || *qty < 1 || *qty > 100) {
            issues.push_back({ErrorCode::BadQuantity, "quantity '" + fields[3] + "' must be a positive integer"});
        }
        if (!issues.empty()) {
            fail_all(issues, line_no);
        }
        SelectionItem item{fields[0], fields[1], fields[2], static_cast<int>(*qty)};
        const std::string key = item.object_name;
        merge_last_wins(out.value, lines, std::move(item), line_no, key, out.warnings);
    }
    std::map<std::string, int> lamps;
    for (std::size_t i = 0; i < out.value.size(); ++i) {
        const auto& item = out.value[i];
        if (item.factory == "lamp.FloorLampFactory") {
            lamps[item.room_type] += item.quantity;
            if (lamps[item.room_type] > 1) {
                fail(ErrorCode::TooManyFloorLamps, lines[i], "at most 1 floor lamp per room");
            }
        }
    }
    return out;
}

Parsed<std::vector<ConstraintRule>> parse_constraints(std::string_view input,
                                                      const std::vector<SelectionItem>& selections) {
    Parsed<std::vector<ConstraintRule>> out;
    std::vector<std::size_t> lines;
    std::size_t line_no = 0;
    for (const auto raw : text::split_lines(input)) {
        ++line_no;
        if (skippable(raw)) {
            continue;
        }
        const auto fields = split_trimmed(raw, '|');
        if (fields.size() < 2) {
            fail(ErrorCode::FieldCount, line_no, "expected 'selected_objects | parent, constraint [| parent, constraint]'");
        }
        for (const auto& f : fields) {
            if (f.empty()) {
                fail(ErrorCode::EmptyField, line_no, "a field is empty");
            }
        }
        ConstraintRule rule;
        rule.object_name = text::to_lower(fields[0]);
        if (!text::is_lower_identifier(rule.object_name)) {
            fail(ErrorCode::BadObjectName, line_no, "object name '" + fields[0] + "' must not contain spaces");
        }
        std::set<std::string> parents;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            const auto parts = split_trimmed(fields[c], ',');
            if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
                fail(ErrorCode::BadConstraintCell, line_no, "constraint '" + fields[c] + "' must be 'parent, kind'");
            }
            const std::string parent = text::to_lower(parts[0]);
            const std::string tok = text::to_lower(parts[1]);
            if (!text::is_lower_identifier(parent)) {
                fail(ErrorCode::BadConstraintCell, line_no, "parent '" + parts[0] + "' is not a valid name");
            }
            const bool to_room = parent == kRoomsParent;
            const auto room_kind = room_kind_from(tok);
            const auto object_kind = object_kind_from(tok);
            if (!room_kind && !object_kind) {
                fail(ErrorCode::UnknownConstraintKind, line_no, "'" + parts[1] + "' is not a constraint kind");
            }
            if (to_room && !room_kind) {
                fail(ErrorCode::KindParentMismatch, line_no,
                     "'" + tok + "' is object-to-object positioning and cannot relate to rooms");
            }
            if (!to_room && !object_kind) {
                fail(ErrorCode::KindParentMismatch, line_no,
                     "'" + tok + "' is global positioning and must relate to rooms, not '" + parent + "'");
            }
            rule.kinds.push_back(to_room ? *room_kind : *object_kind);
            parents.insert(parent);
            rule.parent = parent;
        }
        if (parents.size() > 1) {
            fail(ErrorCode::MixedParents, line_no, "all constraints of '" + rule.object_name + "' must share one parent");
        }
        if (rule.kinds.size() > 2) {
            fail(ErrorCode::TooManyConstraints, line_no, "at most 2 constraints per object type");
        }
        if (!selected(selections, rule.object_name)) {
            fail(ErrorCode::UnknownObject, line_no, "'" + rule.object_name + "' is not among the selected objects");
        }
        if (!rule.relative_to_room()) {
            if (rule.parent == rule.object_name) {
                fail(ErrorCode::ParentCycle, line_no, "'" + rule.object_name + "' cannot be its own parent");
            }
            if (!selected(selections, rule.parent)) {
                fail(ErrorCode::UnknownObject, line_no, "parent '" + rule.parent + "' is not among the selected objects");
            }
        }
        if (rule.kinds.size() == 2) {
            if (rule.kinds[0] == rule.kinds[1]) {
                out.warnings.push_back({line_no, "constraint kind repeated for '" + rule.object_name + "'"});
            } else if (gap_conflict(rule.kinds[0], rule.kinds[1])) {
                out.warnings.push_back({line_no, "constraints of '" + rule.object_name + "' may conflict: " +
                                                     std::string(token(rule.kinds[0])) + " and " +
                                                     std::string(token(rule.kinds[1]))});
            }
        }
        const std::string key = rule.object_name;
        merge_last_wins(out.value, lines, std::move(rule), line_no, key, out.warnings);
    }
    // Parent chains must terminate at rooms.
    for (std::size_t i = 0; i < out.value.size(); ++i) {
        std::set<std::string> seen{out.value[i].object_name};
        const ConstraintRule* cur = &out.value[i];
        while (cur != nullptr && !cur->relative_to_room()) {
            if (!seen.insert(cur->parent).second) {
                fail(ErrorCode::ParentCycle, lines[i], "parent chain of '" + out.value[i].object_name + "' loops");
            }
            cur = find_constraint(out.value, cur->parent);
        }
    }
    return out;
}

Parsed<std::vector<ScoreTermSet>> parse_score_terms(std::string_view input,
                                                    const std::vector<SelectionItem>& selections,
                                                    const std::vector<ConstraintRule>* constraints) {
    Parsed<std::vector<ScoreTermSet>> out;
    std::vector<std::size_t> lines;
    std::size_t line_no = 0;
    constexpr std::array columns = {ScoreColumn::Distance, ScoreColumn::Accessibility, ScoreColumn::Angle,
                                    ScoreColumn::Focus, ScoreColumn::Volume};
    for (const auto raw : text::split_lines(input)) {
        ++line_no;
        if (skippable(raw)) {
            continue;
        }
        const auto fields = split_trimmed(raw, '|');
        if (fields.size() != 6) {
            fail(ErrorCode::ColumnCount, line_no,
                 "expected 6 columns 'selected_objects | distance | accessibility | angle_alignment | focus_score | "
                 "volume', got " +
                     std::to_string(fields.size()));
        }
        ScoreTermSet set;
        set.object_name = text::to_lower(fields[0]);
        if (!text::is_lower_identifier(set.object_name)) {
            fail(ErrorCode::BadObjectName, line_no, "object name '" + fields[0] + "' must not contain spaces");
        }
        std::vector<std::string> related;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const TermCell cell = parse_term_cell(fields[c + 1], columns[c], line_no);
            std::visit(
                [&](const auto& term) {
                    using T = std::decay_t<decltype(term)>;
                    if constexpr (std::is_same_v<T, DistanceTerm>) {
                        set.distance = term;
                        related.push_back(term.related);
                    } else if constexpr (std::is_same_v<T, AccessTerm>) {
                        set.accessibility = term;
                        related.push_back(term.related);
                    } else if constexpr (std::is_same_v<T, AngleTerm>) {
                        set.angle = term;
                        related.push_back(term.related);
                    } else if constexpr (std::is_same_v<T, FocusTerm>) {
                        set.focus = term;
                        related.push_back(term.related);
                    } else if constexpr (std::is_same_v<T, VolumeTerm>) {
                        set.volume = term;
                    }
                },
                cell);
        }
        if (!selected(selections, set.object_name)) {
            fail(ErrorCode::UnknownObject, line_no, "'" + set.object_name + "' is not among the selected objects");
        }
        for (const auto& r : related) {
            if (!is_related_class(r) && !selected(selections, r)) {
                fail(ErrorCode::UnknownRelated, line_no,
                     "related object '" + r + "' is neither selected nor one of doors, windows, furniture, opens, walls, rooms");
            }
            if (constraints != nullptr) {
                if (const auto* child_rule = find_constraint(*constraints, r);
                    child_rule != nullptr && child_rule->parent == set.object_name) {
                    fail(ErrorCode::ParentReferencesChild, line_no,
                         "parent '" + set.object_name + "' must not have score terms related to its child '" + r + "'");
                }
            }
        }
        if (set.angle && (set.angle->orientation == Orientation::Top || set.angle->orientation == Orientation::Bottom)) {
            out.warnings.push_back({line_no, "orientation " + std::string(token(set.angle->orientation)) +
                                                 " has no floor-plan meaning and scores 0"});
        }
        const std::string key = set.object_name;
        merge_last_wins(out.value, lines, std::move(set), line_no, key, out.warnings);
    }
    return out;
}

std::string serialize_selection(const std::vector<SelectionItem>& items) {
    std::string out;
    for (const auto& i : items) {
        out += i.room_type + " | " + i.object_name + " | " + i.factory + " | " + std::to_string(i.quantity) + "\n";
    }
    return out;
}

std::string serialize_constraints(const std::vector<ConstraintRule>& rules) {
    std::string out;
    for (const auto& r : rules) {
        out += r.object_name;
        for (const auto k : r.kinds) {
            out += " | " + r.parent + ", " + std::string(token(k));
        }
        out += "\n";
    }
    return out;
}

std::string serialize_term(const TermCell& cell) {
    using text::format_decimal;
    return std::visit(
        [](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "none";
            } else if constexpr (std::is_same_v<T, DistanceTerm>) {
                const std::string range =
                    t.range ? format_decimal(t.range->lo) + " - " + format_decimal(t.range->hi) : std::string("none");
                return t.related + ", " + range + ", " + std::string(token(t.mode)) + ", " + format_decimal(t.weight);
            } else if constexpr (std::is_same_v<T, AccessTerm>) {
                return t.related + ", " + std::string(token(t.direction)) + ", " + format_decimal(t.distance) + ", " +
                       std::string(token(t.mode)) + ", " + format_decimal(t.weight);
            } else if constexpr (std::is_same_v<T, AngleTerm>) {
                return t.related + ", " + std::string(token(t.orientation)) + ", " + std::string(token(t.mode)) + ", " +
                       format_decimal(t.weight);
            } else if constexpr (std::is_same_v<T, FocusTerm>) {
                return t.related + ", " + std::string(token(t.mode)) + ", " + format_decimal(t.weight);
            } else {
                return std::string(token(t.mode)) + ", " + format_decimal(t.weight);
            }
        },
        cell);
}

std::string serialize_score_terms(const std::vector<ScoreTermSet>& sets) {
    std::string out;
    const auto cell = [](const auto& opt) -> std::string {
        return opt ? serialize_term(TermCell{*opt}) : std::string("none");
    };
    for (const auto& s : sets) {
        out += s.object_name + " | " + cell(s.distance) + " | " + cell(s.accessibility) + " | " + cell(s.angle) + " | " +
               cell(s.focus) + " | " + cell(s.volume) + "\n";
    }
    return out;
}

SerializedBundle serialize(const RuleBundle& bundle) {
    return {serialize_selection(bundle.selections), serialize_constraints(bundle.constraints),
            serialize_score_terms(bundle.score_terms)};
}

RuleBundle parse_bundle(const SerializedBundle& texts, const catalog::Catalog& cat) {
    RuleBundle b;
    b.selections = parse_selection(texts.selection, cat).value;
    b.constraints = parse_constraints(texts.constraints, b.selections).value;
    b.score_terms = parse_score_terms(texts.score_terms, b.selections, &b.constraints).value;
    return b;
}

std::vector<Warning> validate_bundle(const RuleBundle& bundle, const catalog::Catalog& cat) {
    std::vector<Warning> warnings;
    std::set<std::string> names;
    for (const auto& s : bundle.selections) {
        if (!names.insert(s.object_name).second) {
            fail(ErrorCode::UnknownObject, 0, "object '" + s.object_name + "' is selected twice");
        }
        const auto* e = cat.find(s.factory);
        if (e == nullptr || e->factory_name != s.factory) {
            fail(ErrorCode::UnknownFactory, 0, "'" + s.factory + "' is not an available factory");
        }
        if (s.quantity < 1) {
            fail(ErrorCode::BadQuantity, 0, "quantity of '" + s.object_name + "' must be positive");
        }
    }
    for (const auto& r : bundle.constraints) {
        if (!names.contains(r.object_name)) {
            fail(ErrorCode::UnknownObject, 0, "constraint for unselected object '" + r.object_name + "'");
        }
        if (!r.relative_to_room() && !names.contains(r.parent)) {
            fail(ErrorCode::UnknownObject, 0, "constraint parent '" + r.parent + "' is not selected");
        }
        if (r.kinds.empty() || r.kinds.size() > 2) {
            fail(ErrorCode::TooManyConstraints, 0, "'" + r.object_name + "' needs 1 or 2 constraint kinds");
        }
        for (const auto k : r.kinds) {
            if (is_room_kind(k) != r.relative_to_room()) {
                fail(ErrorCode::KindParentMismatch, 0, "kind/parent mismatch for '" + r.object_name + "'");
            }
        }
        if (r.kinds.size() == 2 && gap_conflict(r.kinds[0], r.kinds[1])) {
            warnings.push_back({0, "constraints of '" + r.object_name + "' may conflict"});
        }
    }
    for (const auto& s : bundle.score_terms) {
        if (!names.contains(s.object_name)) {
            fail(ErrorCode::UnknownObject, 0, "score terms for unselected object '" + s.object_name + "'");
        }
        std::vector<std::string> related;
        if (s.distance) {
            related.push_back(s.distance->related);
        }
        if (s.accessibility) {
            related.push_back(s.accessibility->related);
        }
        if (s.angle) {
            related.push_back(s.angle->related);
            if (s.angle->orientation == Orientation::Top || s.angle->orientation == Orientation::Bottom) {
                warnings.push_back({0, "orientation of '" + s.object_name + "' has no floor-plan meaning"});
            }
        }
        if (s.focus) {
            related.push_back(s.focus->related);
        }
        for (const auto& r : related) {
            if (!is_related_class(r) && !names.contains(r)) {
                fail(ErrorCode::UnknownRelated, 0, "related object '" + r + "' is not selected");
            }
        }
    }
    return warnings;
}

std::vector<ObjectSubset> object_subset(const std::vector<SelectionItem>& items) {
    std::vector<ObjectSubset> out;
    out.reserve(items.size());
    for (const auto& i : items) {
        out.push_back(i.subset());
    }
    return out;
}

const ConstraintRule* find_constraint(const std::vector<ConstraintRule>& rules, std::string_view object_name) {
    for (const auto& r : rules) {
        if (r.object_name == object_name) {
            return &r;
        }
    }
    return nullptr;
}

const ScoreTermSet* find_score_terms(const std::vector<ScoreTermSet>& sets, std::string_view object_name) {
    for (const auto& s : sets) {
        if (s.object_name == object_name) {
            return &s;
        }
    }
    return nullptr;
}

}  // namespace codesign::ruledsl

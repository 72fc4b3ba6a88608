#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "codesign/catalog.hpp"

// Parser, validator and serializer for the three pipe-delimited rule grammars:
//
//   selection    room_type | object_name | factory | quantity
//   constraints  object_name | parent, kind [| parent, kind]
//   score terms  object_name | distance | accessibility | angle_alignment | focus_score | volume
//
// See docs/rule-language.md for the full grammar and the error code table.
namespace codesign::ruledsl {

enum class ErrorCode {
    FieldCount,
    EmptyField,
    BadRoomType,
    BadObjectName,
    BadQuantity,
    UnknownFactory,
    TooManyFloorLamps,
    BadConstraintCell,
    UnknownConstraintKind,
    KindParentMismatch,
    MixedParents,
    TooManyConstraints,
    UnknownObject,
    ParentCycle,
    ColumnCount,
    MultiTerm,
    MalformedTerm,
    TermWrongColumn,
    IllegalDirection,
    IllegalOrientation,
    BadMinMax,
    BadNumber,
    BadRange,
    WeightOutOfRange,
    UnknownRelated,
    ParentReferencesChild,
};

inline constexpr std::array kAllErrorCodes = {
    ErrorCode::FieldCount,         ErrorCode::EmptyField,          ErrorCode::BadRoomType,
    ErrorCode::BadObjectName,      ErrorCode::BadQuantity,         ErrorCode::UnknownFactory,
    ErrorCode::TooManyFloorLamps,  ErrorCode::BadConstraintCell,   ErrorCode::UnknownConstraintKind,
    ErrorCode::KindParentMismatch, ErrorCode::MixedParents,        ErrorCode::TooManyConstraints,
    ErrorCode::UnknownObject,      ErrorCode::ParentCycle,         ErrorCode::ColumnCount,
    ErrorCode::MultiTerm,          ErrorCode::MalformedTerm,       ErrorCode::TermWrongColumn,
    ErrorCode::IllegalDirection,   ErrorCode::IllegalOrientation,  ErrorCode::BadMinMax,
    ErrorCode::BadNumber,          ErrorCode::BadRange,            ErrorCode::WeightOutOfRange,
    ErrorCode::UnknownRelated,     ErrorCode::ParentReferencesChild,
};

/// Stable snake_case identifier shown to users and returned by the API.
std::string_view error_code_name(ErrorCode code);

class ParseError : public std::runtime_error {
public:
    ParseError(ErrorCode code, std::size_t line, std::string reason);

    ErrorCode code() const { return code_; }
    /// 1-based input line, 0 for bundle-level errors.
    std::size_t line() const { return line_; }
    const std::string& reason() const { return reason_; }

private:
    ErrorCode code_;
    std::size_t line_;
    std::string reason_;
};

struct Warning {
    std::size_t line = 0;
    std::string message;

    friend bool operator==(const Warning&, const Warning&) = default;
};

template <class T>
struct Parsed {
    T value;
    std::vector<Warning> warnings;
};

// ---- selection -------------------------------------------------------------

struct ObjectSubset {
    std::string object_name;
    int quantity = 1;
};

struct SelectionItem {
    std::string room_type;
    std::string object_name;
    std::string factory;
    int quantity = 1;

    ObjectSubset subset() const { return {object_name, quantity}; }
    friend bool operator==(const SelectionItem&, const SelectionItem&) = default;
};

// ---- constraints -----------------------------------------------------------

enum class ConstraintKind {
    RoomNone,
    AgainstWall,
    CornerAgainstWall,
    FlushWall,
    SpacedWall,
    SideAgainstWall,
    BackNearWall,
    SideNearWall,
    ObjectNone,
    FrontAgainst,
    FrontToFront,
    LeftrightLeftright,
    SideBySide,
    BackToBack,
};

inline constexpr std::array kAllConstraintKinds = {
    ConstraintKind::RoomNone,     ConstraintKind::AgainstWall,        ConstraintKind::CornerAgainstWall,
    ConstraintKind::FlushWall,    ConstraintKind::SpacedWall,         ConstraintKind::SideAgainstWall,
    ConstraintKind::BackNearWall, ConstraintKind::SideNearWall,       ConstraintKind::ObjectNone,
    ConstraintKind::FrontAgainst, ConstraintKind::FrontToFront,       ConstraintKind::LeftrightLeftright,
    ConstraintKind::SideBySide,   ConstraintKind::BackToBack,
};

inline constexpr std::string_view kRoomsParent = "rooms";

std::string_view token(ConstraintKind kind);
bool is_room_kind(ConstraintKind kind);

struct ConstraintRule {
    std::string object_name;
    std::string parent;
    std::vector<ConstraintKind> kinds;

    bool relative_to_room() const { return parent == kRoomsParent; }
    friend bool operator==(const ConstraintRule&, const ConstraintRule&) = default;
};

// ---- score terms -----------------------------------------------------------

enum class Extremum { Min, Max };
enum class AccessDirection { Front, Back, Down };
enum class Orientation { Front, Side, Back, Top, Leftright, Bottom };

std::string_view token(Extremum e);
std::string_view token(AccessDirection d);
std::string_view token(Orientation o);

struct DistanceRange {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const DistanceRange&, const DistanceRange&) = default;
};

struct DistanceTerm {
    std::string related;
    std::optional<DistanceRange> range;
    Extremum mode = Extremum::Min;
    double weight = 0.0;
    friend bool operator==(const DistanceTerm&, const DistanceTerm&) = default;
};

struct AccessTerm {
    std::string related;
    AccessDirection direction = AccessDirection::Front;
    double distance = 0.0;
    Extremum mode = Extremum::Max;
    double weight = 0.0;
    friend bool operator==(const AccessTerm&, const AccessTerm&) = default;
};

struct AngleTerm {
    std::string related;
    Orientation orientation = Orientation::Front;
    Extremum mode = Extremum::Min;
    double weight = 0.0;
    friend bool operator==(const AngleTerm&, const AngleTerm&) = default;
};

struct FocusTerm {
    std::string related;
    Extremum mode = Extremum::Min;
    double weight = 0.0;
    friend bool operator==(const FocusTerm&, const FocusTerm&) = default;
};

struct VolumeTerm {
    Extremum mode = Extremum::Min;
    double weight = 0.0;
    friend bool operator==(const VolumeTerm&, const VolumeTerm&) = default;
};

struct ScoreTermSet {
    std::string object_name;
    std::optional<DistanceTerm> distance;
    std::optional<AccessTerm> accessibility;
    std::optional<AngleTerm> angle;
    std::optional<FocusTerm> focus;
    std::optional<VolumeTerm> volume;

    friend bool operator==(const ScoreTermSet&, const ScoreTermSet&) = default;
};

/// Related-object classes allowed in score terms besides selected object names.
inline constexpr std::array<std::string_view, 6> kRelatedClasses = {"doors", "windows", "furniture",
                                                                    "opens", "walls",   "rooms"};
bool is_related_class(std::string_view name);

enum class ScoreColumn { Distance, Accessibility, Angle, Focus, Volume };
std::string_view column_name(ScoreColumn c);

using TermCell = std::variant<std::monostate, DistanceTerm, AccessTerm, AngleTerm, FocusTerm, VolumeTerm>;

/// Parses one cell of a score-term line; std::monostate means "none".
/// Throws ParseError (with `line`) for malformed cells or a term in the wrong column.
TermCell parse_term_cell(std::string_view cell, ScoreColumn column, std::size_t line = 0);
/// Shape-only classification of a cell, independent of the column it sits in.
std::optional<ScoreColumn> classify_term_cell(std::string_view cell);

// ---- bundle ----------------------------------------------------------------

struct RuleBundle {
    std::vector<SelectionItem> selections;
    std::vector<ConstraintRule> constraints;
    std::vector<ScoreTermSet> score_terms;

    friend bool operator==(const RuleBundle&, const RuleBundle&) = default;
};

struct SerializedBundle {
    std::string selection;
    std::string constraints;
    std::string score_terms;
};

Parsed<std::vector<SelectionItem>> parse_selection(std::string_view text,
                                                   const catalog::Catalog& cat = catalog::Catalog::builtin());
Parsed<std::vector<ConstraintRule>> parse_constraints(std::string_view text,
                                                      const std::vector<SelectionItem>& selections);
/// `constraints`, when given, enables the parent-to-child reference check.
Parsed<std::vector<ScoreTermSet>> parse_score_terms(std::string_view text,
                                                    const std::vector<SelectionItem>& selections,
                                                    const std::vector<ConstraintRule>* constraints = nullptr);

std::string serialize_selection(const std::vector<SelectionItem>& items);
std::string serialize_constraints(const std::vector<ConstraintRule>& rules);
std::string serialize_score_terms(const std::vector<ScoreTermSet>& sets);
std::string serialize_term(const TermCell& cell);
SerializedBundle serialize(const RuleBundle& bundle);
RuleBundle parse_bundle(const SerializedBundle& texts, const catalog::Catalog& cat = catalog::Catalog::builtin());

/// Checks cross-list invariants of a complete bundle; throws ParseError with line 0.
/// Returns non-fatal warnings (conflicting constraint kinds, 2D-degenerate orientations).
std::vector<Warning> validate_bundle(const RuleBundle& bundle, const catalog::Catalog& cat = catalog::Catalog::builtin());

std::vector<ObjectSubset> object_subset(const std::vector<SelectionItem>& items);
const ConstraintRule* find_constraint(const std::vector<ConstraintRule>& rules, std::string_view object_name);
const ScoreTermSet* find_score_terms(const std::vector<ScoreTermSet>& sets, std::string_view object_name);

}  // namespace codesign::ruledsl

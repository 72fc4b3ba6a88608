#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "codesign/catalog.hpp"
#include "codesign/geometry.hpp"
#include "codesign/ruledsl.hpp"

// Energy model: weighted score-term losses, constraint violations and hard feasibility penalties.
namespace codesign::scoring {

struct Placement {
    std::string instance_id;
    std::string object_name;
    std::string factory;
    std::size_t variant_index = 0;
    geometry::Footprint footprint;
    catalog::Tier tier = catalog::Tier::Medium;
    std::optional<std::string> parent_instance;
    double height = 0.0;

    bool is_rug() const;
    friend bool operator==(const Placement&, const Placement&) = default;
};

struct Layout {
    geometry::RoomPolygon room;
    std::vector<Placement> placements;

    const Placement* find(std::string_view instance_id) const;
    Placement* find(std::string_view instance_id);
    friend bool operator==(const Layout&, const Layout&) = default;
};

struct Energy {
    double loss = 0.0;
    double violation = 0.0;
    double total = 0.0;

    friend bool operator==(const Energy&, const Energy&) = default;
};

struct ScoringConfig {
    /// Weight of the violation in total = loss + lambda * violation.
    double lambda = 100.0;
    /// Multiplier on hard penalties (outside room, overlap, door swing) inside the violation.
    double hard_weight = 10.0;
};

class UnknownRelated : public std::runtime_error {
public:
    explicit UnknownRelated(const std::string& name)
        : std::runtime_error("related object '" + name + "' matches no instance or feature class") {}
};

// Tolerances of the constraint kinds, in meters and degrees.
namespace tol {
inline constexpr double kAgainstGap = 0.05;
inline constexpr double kFlushGap = 0.01;
inline constexpr double kSpacedMin = 0.10;
inline constexpr double kSpacedMax = 0.50;
inline constexpr double kNearGap = 0.30;
inline constexpr double kWallAngle = 5.0;
inline constexpr double kNearAngle = 15.0;
inline constexpr double kObjectAngle = 10.0;
inline constexpr double kFrontAgainstGap = 0.05;
inline constexpr double kFrontToFrontMin = 0.05;
inline constexpr double kFrontToFrontMax = 1.0;
inline constexpr double kFrontToFrontOverlap = 0.5;
inline constexpr double kFlankGap = 0.15;
inline constexpr double kSideBySideGap = 0.20;
inline constexpr double kBackToBackGap = 0.20;
/// Depth of the clearance strip in front of windows and openings.
inline constexpr double kFeatureStrip = 0.30;
}  // namespace tol

// Raw normalized quantities in [0, 1] before min/max and weight are applied.
// nullopt means the related class has no members here, and the term contributes 0.
// Throws UnknownRelated for a name that is neither a feature class nor in the layout.
std::optional<double> distance_raw(const ruledsl::DistanceTerm& t, const Placement& p, const Layout& layout);
std::optional<double> access_raw(const ruledsl::AccessTerm& t, const Placement& p, const Layout& layout);
std::optional<double> angle_raw(const ruledsl::AngleTerm& t, const Placement& p, const Layout& layout);
std::optional<double> focus_raw(const ruledsl::FocusTerm& t, const Placement& p, const Layout& layout);
double volume_raw(const Placement& p, const Layout& layout);

double term_loss(const ruledsl::DistanceTerm& t, const Placement& p, const Layout& layout);
double term_loss(const ruledsl::AccessTerm& t, const Placement& p, const Layout& layout);
double term_loss(const ruledsl::AngleTerm& t, const Placement& p, const Layout& layout);
double term_loss(const ruledsl::FocusTerm& t, const Placement& p, const Layout& layout);
double term_loss(const ruledsl::VolumeTerm& t, const Placement& p, const Layout& layout);
double term_loss(const ruledsl::TermCell& t, const Placement& p, const Layout& layout);
/// Sum over every term present in `set`.
double term_set_loss(const ruledsl::ScoreTermSet& set, const Placement& p, const Layout& layout);

/// Violation of a single kind; `parent` is required for object-relative kinds.
double kind_violation(ruledsl::ConstraintKind kind, const Placement& p, const Placement* parent, const Layout& layout);
/// Sum over the rule's kinds. Object-relative rules use p.parent_instance when set,
/// otherwise the best-matching instance of the parent object.
double constraint_violation(const ruledsl::ConstraintRule& rule, const Placement& p, const Layout& layout);

/// Unweighted hard-penalty sum: outside-room corner depth and area, non-rug overlap area,
/// door-swing obstruction area.
double hard_penalty(const Layout& layout);

Energy total_energy(const ruledsl::RuleBundle& bundle, const Layout& layout, const ScoringConfig& config = {});

/// True when every footprint is inside the room, no two non-rug footprints overlap
/// by more than 1e-6 m^2 and no door swing zone is obstructed.
bool is_feasible(const Layout& layout);

}  // namespace codesign::scoring

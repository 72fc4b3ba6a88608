#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "codesign/catalog.hpp"
#include "codesign/ruledsl.hpp"
#include "codesign/scoring.hpp"

// Tiered simulated annealing over furniture placements.
namespace codesign::annealer {

struct MoveWeights {
    double translate = 0.5;
    double rotate = 0.2;
    double wall_snap = 0.2;
    double variant_swap = 0.1;
};

struct AnnealConfig {
    int iters_large = 80;
    int iters_medium = 60;
    int iters_small = 30;
    double t0 = 1.0;
    /// Temperature reached after each object's budget; the per-object cooling factor
    /// is (t_final / t0)^(1 / iters).
    double t_final = 0.01;
    MoveWeights moves;
    std::uint64_t seed = 0;
    /// Second sweep over every object after the tiered pass.
    bool polish_pass = false;
    /// Snapshot every `snapshot_stride` accepted moves (0 disables intermediate snapshots).
    int snapshot_stride = 10;
    scoring::ScoringConfig scoring;

    int iterations_for(catalog::Tier tier) const;
    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct TraceRecord {
    std::string object_id;
    int iteration = 0;
    double proposed_total = 0.0;
    bool accepted = false;
    double best_total = 0.0;
    double temperature = 0.0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using LossTrace = std::vector<TraceRecord>;

inline constexpr const char* kTraceHeader = "object_id,iteration,proposed_total,accepted,best_total,temperature";
std::string trace_csv(const LossTrace& trace);

struct Snapshot {
    std::size_t sequence = 0;
    scoring::Layout layout;
    scoring::Energy energy;
    bool final = false;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

struct AnnealResult {
    scoring::Layout layout;
    scoring::Energy initial_energy;
    scoring::Energy energy;
    LossTrace trace;
    std::size_t accepted_moves = 0;
    std::size_t snapshot_count = 0;
};

class Unplaceable : public std::runtime_error {
public:
    Unplaceable(std::string instance_id, const std::string& why)
        : std::runtime_error(instance_id + " cannot be placed: " + why), instance_id_(std::move(instance_id)) {}
    const std::string& instance_id() const { return instance_id_; }

private:
    std::string instance_id_;
};

/// Expands selections into instances ("sofas_0", "sofas_1", ...), links children to parent
/// instances round-robin and drops each at a random feasible pose (overlap allowed after
/// 1000 rejected tries).
scoring::Layout initial_layout(const ruledsl::RuleBundle& bundle, const geometry::RoomPolygon& room,
                               const catalog::Catalog& cat, std::uint64_t seed);

/// Order in which objects are annealed: tier, then parent depth, then instance id.
std::vector<std::string> anneal_order(const scoring::Layout& layout);

AnnealResult optimize(const ruledsl::RuleBundle& bundle, const scoring::Layout& layout, const AnnealConfig& config,
                      const catalog::Catalog& cat = catalog::Catalog::builtin(), const SnapshotSink& sink = {});

/// Runs optimize and collects every snapshot it emits.
std::vector<Snapshot> snapshot_stream(const ruledsl::RuleBundle& bundle, const scoring::Layout& layout,
                                      const AnnealConfig& config, const catalog::Catalog& cat = catalog::Catalog::builtin());

/// Metropolis acceptance probability for an energy change at temperature t.
double acceptance_probability(double delta, double t);

}  // namespace codesign::annealer

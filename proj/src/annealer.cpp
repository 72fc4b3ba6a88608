#include "codesign/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "codesign/text.hpp"

namespace codesign::annealer {

using geometry::Footprint;
using geometry::Vec2;
using scoring::Energy;
using scoring::Layout;
using scoring::Placement;

namespace {

constexpr int kPlacementTries = 1000;
constexpr int kProposalTries = 8;
constexpr double kSnapClearance = 0.001;
constexpr double kGridStep = 0.05;

int tier_rank(catalog::Tier t) {
    switch (t) {
    case catalog::Tier::Large:
        return 0;
    case catalog::Tier::Medium:
        return 1;
    case catalog::Tier::Small:
        return 2;
    }
    return 1;
}

int parent_depth(const Layout& layout, const Placement& p) {
    int depth = 0;
    const Placement* cur = &p;
    // parent chains are acyclic after validation; the bound guards hand-built layouts
    while (cur->parent_instance && depth <= static_cast<int>(layout.placements.size())) {
        cur = layout.find(*cur->parent_instance);
        if (cur == nullptr) {
            break;
        }
        ++depth;
    }
    return depth;
}

Footprint sized(Vec2 c, const catalog::Dimensions& d, double rot) { return Footprint::from_size(c, d.width, d.depth, rot); }

bool blocks(const Footprint& fp, bool rug, const Layout& layout, const std::vector<const Placement*>& placed) {
    if (!layout.room.contains(fp)) {
        return true;
    }
    if (rug) {
        return false;
    }
    for (const auto* q : placed) {
        if (!q->is_rug() && geometry::footprint_overlap_area(fp, q->footprint) > 1e-6) {
            return true;
        }
    }
    for (const auto& f : layout.room.features()) {
        if (const auto zone = layout.room.swing_zone(f)) {
            if (geometry::footprint_overlap_area(fp, *zone) > 1e-6) {
                return true;
            }
        }
    }
    return false;
}

std::optional<Footprint> grid_fit(const geometry::RoomPolygon& room, const catalog::Dimensions& d) {
    const Vec2 lo = room.bbox_min();
    const Vec2 hi = room.bbox_max();
    for (double x = lo.x; x <= hi.x + 1e-9; x += kGridStep) {
        for (double y = lo.y; y <= hi.y + 1e-9; y += kGridStep) {
            for (const double rot : {0.0, 90.0}) {
                const auto fp = sized({x, y}, d, rot);
                if (room.contains(fp)) {
                    return fp;
                }
            }
        }
    }
    return std::nullopt;
}

class Proposer {
public:
    Proposer(const AnnealConfig& cfg, const catalog::Catalog& cat, std::mt19937_64& rng)
        : cfg_(cfg), cat_(cat), rng_(rng),
          pick_({cfg.moves.translate, cfg.moves.rotate, cfg.moves.wall_snap, cfg.moves.variant_swap}) {}

    // Returns false when no in-room candidate was found.
    bool propose(Layout& layout, Placement& p, double temperature) {
        const Placement original = p;
        for (int attempt = 0; attempt < kProposalTries; ++attempt) {
            p = original;
            apply(layout, p, temperature);
            if (!(p == original) && layout.room.contains(p.footprint)) {
                return true;
            }
        }
        p = original;
        return false;
    }

private:
    void apply(const Layout& layout, Placement& p, double temperature) {
        const Footprint& fp = p.footprint;
        switch (pick_(rng_)) {
        case 0: {
            const double sigma = 0.1 * layout.room.diagonal() * temperature / cfg_.t0;
            std::normal_distribution<double> n(0.0, sigma);
            const double dx = n(rng_);
            const double dy = n(rng_);
            p.footprint = fp.translated({dx, dy});
            break;
        }
        case 1: {
            const int quarter = static_cast<int>(rng_() % 4);
            double rot = 90.0 * quarter;
            if (rng_() % 2 == 1) {
                rot += std::uniform_real_distribution<double>(-15.0, 15.0)(rng_);
            }
            p.footprint = fp.with_rotation(rot);
            break;
        }
        case 2: {
            // nearest wall half of the time, otherwise any wall; along-wall position kept,
            // or pushed into one of the wall's ends
            std::size_t wall = 0;
            Vec2 q = layout.room.closest_boundary_point(fp.center(), &wall);
            if (rng_() % 2 == 1) {
                wall = static_cast<std::size_t>(rng_() % layout.room.wall_count());
                q = geometry::closest_point_on_segment(fp.center(), layout.room.wall(wall));
            }
            const auto seg = layout.room.wall(wall);
            const Vec2 along = geometry::normalized(seg.b - seg.a);
            const double len = seg.length();
            const double lo = std::min(fp.half_width(), len / 2);
            const double hi = std::max(len - fp.half_width(), len / 2);
            double t = std::clamp(geometry::dot(q - seg.a, along), lo, hi);
            switch (rng_() % 4) {
            case 0:
                t = lo + kSnapClearance;
                break;
            case 1:
                t = hi - kSnapClearance;
                break;
            default:
                break;
            }
            const Vec2 n = layout.room.inward_normal(wall);
            const Vec2 c = seg.a + along * t + n * (fp.half_depth() + kSnapClearance);
            p.footprint = Footprint(c, fp.half_width(), fp.half_depth(), geometry::rotation_facing(n));
            break;
        }
        default: {
            const auto* entry = cat_.find(p.factory);
            if (entry == nullptr || entry->variants.size() < 2) {
                return;
            }
            std::size_t v = static_cast<std::size_t>(rng_() % (entry->variants.size() - 1));
            if (v >= p.variant_index) {
                ++v;
            }
            p.variant_index = v;
            p.height = entry->variants[v].height;
            p.footprint = sized(fp.center(), entry->variants[v], fp.rotation_deg());
            break;
        }
        }
    }

    const AnnealConfig& cfg_;
    const catalog::Catalog& cat_;
    std::mt19937_64& rng_;
    std::discrete_distribution<int> pick_;
};

}  // namespace

int AnnealConfig::iterations_for(catalog::Tier tier) const {
    switch (tier) {
    case catalog::Tier::Large:
        return iters_large;
    case catalog::Tier::Medium:
        return iters_medium;
    case catalog::Tier::Small:
        return iters_small;
    }
    return iters_medium;
}

void AnnealConfig::validate() const {
    if (iters_large < 1 || iters_medium < 1 || iters_small < 1) {
        throw std::invalid_argument("iteration counts must be at least 1");
    }
    if (!(t0 > 0.0)) {
        throw std::invalid_argument("initial temperature must be positive");
    }
    if (!(t_final > 0.0 && t_final < t0)) {
        throw std::invalid_argument("final temperature must lie in (0, t0)");
    }
    const auto& m = moves;
    if (m.translate < 0 || m.rotate < 0 || m.wall_snap < 0 || m.variant_swap < 0 ||
        m.translate + m.rotate + m.wall_snap + m.variant_swap <= 0) {
        throw std::invalid_argument("move weights must be non-negative and not all zero");
    }
    if (snapshot_stride < 0) {
        throw std::invalid_argument("snapshot stride must be non-negative");
    }
}

std::string trace_csv(const LossTrace& trace) {
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << r.object_id << ',' << r.iteration << ',' << text::format_number(r.proposed_total) << ','
            << (r.accepted ? 1 : 0) << ',' << text::format_number(r.best_total) << ','
            << text::format_number(r.temperature) << '\n';
    }
    return out.str();
}

double acceptance_probability(double delta, double t) {
    if (delta <= 0.0) {
        return 1.0;
    }
    return std::exp(-delta / t);
}

std::vector<std::string> anneal_order(const Layout& layout) {
    struct Key {
        int tier;
        int depth;
        std::string id;
    };
    std::vector<Key> keys;
    for (const auto& p : layout.placements) {
        keys.push_back({tier_rank(p.tier), parent_depth(layout, p), p.instance_id});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        return std::tie(a.tier, a.depth, a.id) < std::tie(b.tier, b.depth, b.id);
    });
    std::vector<std::string> out;
    for (auto& k : keys) {
        out.push_back(std::move(k.id));
    }
    return out;
}

Layout initial_layout(const ruledsl::RuleBundle& bundle, const geometry::RoomPolygon& room, const catalog::Catalog& cat,
                      std::uint64_t seed) {
    Layout layout{room, {}};
    std::map<std::string, std::vector<std::string>> instances;
    for (const auto& item : bundle.selections) {
        const auto& entry = cat.lookup(item.factory);
        for (int i = 0; i < item.quantity; ++i) {
            Placement p;
            p.instance_id = item.object_name + "_" + std::to_string(i);
            p.object_name = item.object_name;
            p.factory = entry.factory_name;
            p.variant_index = entry.default_variant;
            p.tier = tier_of(entry);
            p.height = entry.variants[entry.default_variant].height;
            instances[item.object_name].push_back(p.instance_id);
            layout.placements.push_back(std::move(p));
        }
    }
    for (const auto& rule : bundle.constraints) {
        if (rule.relative_to_room()) {
            continue;
        }
        const auto& parents = instances[rule.parent];
        if (parents.empty()) {
            continue;
        }
        std::size_t k = 0;
        for (auto& p : layout.placements) {
            if (p.object_name == rule.object_name) {
                p.parent_instance = parents[k++ % parents.size()];
            }
        }
    }

    std::mt19937_64 rng(seed);
    const Vec2 lo = room.bbox_min();
    const Vec2 hi = room.bbox_max();
    std::uniform_real_distribution<double> ux(lo.x, hi.x);
    std::uniform_real_distribution<double> uy(lo.y, hi.y);
    const auto random_pose = [&](const catalog::Dimensions& d) {
        const double x = ux(rng);
        const double y = uy(rng);
        return sized({x, y}, d, 90.0 * static_cast<double>(rng() % 4));
    };

    std::vector<const Placement*> placed;
    for (const auto& id : anneal_order(layout)) {
        Placement& p = *layout.find(id);
        const auto& entry = cat.lookup(p.factory);
        std::optional<Footprint> chosen;
        for (int i = 0; i < kPlacementTries && !chosen; ++i) {
            const auto fp = random_pose(entry.variants[p.variant_index]);
            if (!blocks(fp, p.is_rug(), layout, placed)) {
                chosen = fp;
            }
        }
        for (int i = 0; i < kPlacementTries && !chosen; ++i) {
            const auto fp = random_pose(entry.variants[p.variant_index]);
            if (room.contains(fp)) {
                chosen = fp;
            }
        }
        if (!chosen) {
            const std::size_t small = entry.smallest_variant();
            chosen = grid_fit(room, entry.variants[small]);
            if (!chosen) {
                throw Unplaceable(p.instance_id, "its smallest variant does not fit inside the room");
            }
            p.variant_index = small;
            p.height = entry.variants[small].height;
        }
        p.footprint = *chosen;
        placed.push_back(&p);
    }
    return layout;
}

AnnealResult optimize(const ruledsl::RuleBundle& bundle, const Layout& layout, const AnnealConfig& config,
                      const catalog::Catalog& cat, const SnapshotSink& sink) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    Proposer proposer(config, cat, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    AnnealResult result;
    const auto energy = [&](const Layout& l) { return scoring::total_energy(bundle, l, config.scoring); };
    Layout best = layout;
    Energy best_e = energy(best);
    result.initial_energy = best_e;

    std::size_t sequence = 0;
    const auto emit = [&](bool final) {
        ++result.snapshot_count;
        if (sink) {
            sink(Snapshot{sequence++, best, best_e, final});
        } else {
            ++sequence;
        }
    };

    const auto order = anneal_order(layout);
    const int passes = config.polish_pass ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
        for (const auto& id : order) {
            Layout current = best;
            Energy cur_e = best_e;
            const int iters = config.iterations_for(current.find(id)->tier);
            const double alpha = std::pow(config.t_final / config.t0, 1.0 / iters);
            double t = config.t0;
            for (int k = 0; k < iters; ++k) {
                t *= alpha;
                Layout candidate = current;
                Placement& target = *candidate.find(id);
                TraceRecord rec{id, k, cur_e.total, false, best_e.total, t};
                if (proposer.propose(candidate, target, t)) {
                    const Energy cand_e = energy(candidate);
                    rec.proposed_total = cand_e.total;
                    const double p = acceptance_probability(cand_e.total - cur_e.total, t);
                    // draw unconditionally so the random stream does not depend on the energy sign
                    const double u = unit(rng);
                    if (u < p) {
                        rec.accepted = true;
                        current = std::move(candidate);
                        cur_e = cand_e;
                        ++result.accepted_moves;
                        if (cur_e.total < best_e.total) {
                            best = current;
                            best_e = cur_e;
                        }
                        if (config.snapshot_stride > 0 && result.accepted_moves % config.snapshot_stride == 0) {
                            emit(false);
                        }
                    }
                }
                rec.best_total = best_e.total;
                result.trace.push_back(std::move(rec));
            }
        }
    }
    emit(true);
    result.layout = std::move(best);
    result.energy = best_e;
    return result;
}

std::vector<Snapshot> snapshot_stream(const ruledsl::RuleBundle& bundle, const Layout& layout, const AnnealConfig& config,
                                      const catalog::Catalog& cat) {
    std::vector<Snapshot> out;
    optimize(bundle, layout, config, cat, [&](const Snapshot& s) { out.push_back(s); });
    return out;
}

}  // namespace codesign::annealer

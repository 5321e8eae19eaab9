#include "nullshadow/ensemble.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "nullshadow/parallel.hpp"
#include "nullshadow/random.hpp"

namespace nullshadow {

namespace {

// Tolerance for the "all survivors share one state" check.
constexpr double kSurvivorFidelityTol = 1e-9;

struct AtomDraw {
    QubitState start;
    bool premeasured_excited{false};
    TrajectoryRecord record;
};

// Fixed draw order per atom: premeasurement variate (if enabled), then jump
// variate. Survivor measurements, if any, draw afterwards from the same stream.
AtomDraw draw_atom(const EnsembleConfig& cfg, SplitMix64& rng) {
    AtomDraw d;
    d.start = cfg.initial;
    if (cfg.premeasure) {
        d.premeasured_excited = uniform01(rng) < cfg.initial.excited_population();
        d.start = d.premeasured_excited ? QubitState::excited() : QubitState::ground();
    }
    d.record = run_trajectory(d.start, cfg.params, cfg.horizon, uniform01(rng));
    return d;
}

struct Tally {
    std::vector<std::uint64_t> blackened;
    std::vector<std::uint64_t> excited_survivors;
    std::vector<std::uint64_t> measured_excited;
    bool survivor_mismatch{false};

    explicit Tally(std::size_t points) : blackened(points, 0), excited_survivors(points, 0), measured_excited(points, 0) {}
};

}  // namespace

void EnsembleConfig::validate() const {
    if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (grid_points < 2) throw ConfigError("grid_points must be >= 2");
    if (std::abs(initial.norm_squared() - 1.0) > 1e-9) throw ConfigError("initial state must be normalized");
    params.validate();
}

std::vector<double> grid_times(double horizon, std::size_t points) {
    if (points < 2) throw ConfigError("grid needs at least two points");
    std::vector<double> t(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t k = 0; k + 1 < points; ++k) t[k] = horizon * static_cast<double>(k) / last;
    t.back() = horizon;
    return t;
}

double expected_blackened(double n, double p1, double gamma, double t) {
    if (!(n >= 0.0)) throw ConfigError("atom count must be non-negative");
    return n * (1.0 - no_jump_survival(p1, gamma, t));
}

QubitState survivor_state(double t, const QubitState& initial, const AtomParams& params) {
    return no_jump_evolve(initial, params, t);
}

EnsembleStats run_ensemble(const EnsembleConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto grid = grid_times(cfg.horizon, cfg.grid_points);
    const std::size_t points = grid.size();

    std::vector<double> conditioned_excited(points);
    for (std::size_t k = 0; k < points; ++k)
        conditioned_excited[k] = survivor_state(grid[k], cfg.initial, cfg.params).excited_population();
    const QubitState final_survivor = survivor_state(cfg.horizon, cfg.initial, cfg.params);

    const auto n = static_cast<std::size_t>(cfg.n_atoms);
    threads = std::max(1u, threads);
    std::vector<Tally> tallies(threads, Tally(points));

    parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end, unsigned worker) {
        Tally& tally = tallies[worker];
        for (std::size_t i = begin; i < end; ++i) {
            SplitMix64 rng(substream_seed(cfg.base_seed, i));
            const AtomDraw d = draw_atom(cfg, rng);
            if (!cfg.premeasure && !d.record.blackened &&
                fidelity(d.record.final_state, final_survivor) < 1.0 - kSurvivorFidelityTol)
                tally.survivor_mismatch = true;
            for (std::size_t k = 0; k < points; ++k) {
                if (d.record.jump_time && *d.record.jump_time <= grid[k]) {
                    ++tally.blackened[k];
                    continue;
                }
                if (d.premeasured_excited) ++tally.excited_survivors[k];
                if (cfg.measure_survivors) {
                    const double q = cfg.premeasure ? (d.premeasured_excited ? 1.0 : 0.0) : conditioned_excited[k];
                    if (uniform01(rng) < q) ++tally.measured_excited[k];
                }
            }
        }
    });

    EnsembleStats stats;
    stats.grid = grid;
    stats.blackened_count.assign(points, 0);
    std::vector<std::uint64_t> excited(points, 0);
    std::vector<std::uint64_t> measured(points, 0);
    for (const Tally& t : tallies) {
        if (t.survivor_mismatch) throw std::logic_error("survivors diverged from the shared conditioned state");
        for (std::size_t k = 0; k < points; ++k) {
            stats.blackened_count[k] += t.blackened[k];
            excited[k] += t.excited_survivors[k];
            measured[k] += t.measured_excited[k];
        }
    }

    stats.survivors.resize(points);
    stats.survivor_excited_prob.resize(points);
    for (std::size_t k = 0; k < points; ++k) {
        const std::uint64_t alive = cfg.n_atoms - stats.blackened_count[k];
        stats.survivors[k] = alive;
        if (alive == 0)
            stats.survivor_excited_prob[k] = std::numeric_limits<double>::quiet_NaN();
        else if (cfg.premeasure)
            stats.survivor_excited_prob[k] = static_cast<double>(excited[k]) / static_cast<double>(alive);
        else
            stats.survivor_excited_prob[k] = conditioned_excited[k];
    }
    if (cfg.measure_survivors) stats.survivor_measured_excited = std::move(measured);
    stats.fraction_blackened_final =
        static_cast<double>(stats.blackened_count.back()) / static_cast<double>(cfg.n_atoms);
    return stats;
}

std::vector<std::vector<QubitState>> trajectory_paths(const EnsembleConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto grid = grid_times(cfg.horizon, cfg.grid_points);
    const auto n = static_cast<std::size_t>(cfg.n_atoms);
    std::vector<std::vector<QubitState>> paths(n);
    parallel_chunks(n, std::max(1u, threads), [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i) {
            SplitMix64 rng(substream_seed(cfg.base_seed, i));
            const AtomDraw d = draw_atom(cfg, rng);
            auto& path = paths[i];
            path.reserve(grid.size());
            for (double t : grid) path.push_back(trajectory_state_at(d.start, cfg.params, d.record.jump_time, t));
        }
    });
    return paths;
}

}  // namespace nullshadow

#pragma once

// N independent atoms, each in a cell whose lid blackens when it absorbs the
// atom's photon. Per-atom random substreams make every statistic a function
// of (config, base_seed) only.

#include <cstdint>
#include <optional>
#include <vector>

#include "nullshadow/core.hpp"
#include "nullshadow/dynamics.hpp"

namespace nullshadow {

struct EnsembleConfig {
    std::uint64_t n_atoms{1000};
    QubitState initial{QubitState::from_excited_population(0.5)};
    AtomParams params{};
    double horizon{10.0};
    std::size_t grid_points{101};
    std::uint64_t base_seed{0};
    /// Projectively collapse every atom onto ground/excited at t = 0 before it evolves.
    bool premeasure{false};
    /// Additionally measure every survivor at every grid time (sampled, non-destructive estimate).
    bool measure_survivors{false};

    void validate() const;
};

struct EnsembleStats {
    std::vector<double> grid;
    std::vector<std::uint64_t> blackened_count;
    std::vector<std::uint64_t> survivors;
    /// Excited population among survivors; NaN where none survive.
    std::vector<double> survivor_excited_prob;
    /// Survivors found excited by the sampled measurement, when requested.
    std::optional<std::vector<std::uint64_t>> survivor_measured_excited;
    double fraction_blackened_final{0.0};
};

/// horizon * k / (points - 1) for k = 0 .. points - 1; the last entry is exactly horizon.
std::vector<double> grid_times(double horizon, std::size_t points);

/// n p1 (1 - exp(-gamma t)).
double expected_blackened(double n, double p1, double gamma, double t);

/// State shared by every atom that has not radiated by t.
QubitState survivor_state(double t, const QubitState& initial, const AtomParams& params);

EnsembleStats run_ensemble(const EnsembleConfig& cfg, unsigned threads = 1);

/// Per-atom state on the grid (ground after the jump), for comparison with the master equation.
std::vector<std::vector<QubitState>> trajectory_paths(const EnsembleConfig& cfg, unsigned threads = 1);

}  // namespace nullshadow

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nullshadow/core.hpp"

namespace testing_support {

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

/// Haar-ish random normalized state with a random global phase.
inline nullshadow::QubitState random_state() {
    std::normal_distribution<double> n;
    nullshadow::QubitState s({n(rng()), n(rng())}, {n(rng()), n(rng())});
    return nullshadow::normalize(s);
}

inline nullshadow::AtomParams random_params() {
    const double e0 = uniform(-2.0, 2.0);
    return {e0, e0 + uniform(0.1, 5.0), uniform(0.1, 3.0)};
}

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace testing_support

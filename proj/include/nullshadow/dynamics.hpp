#pragma once

// Quantum-jump unraveling of spontaneous emission for one atom.
//
// While no photon is seen, the excited amplitude decays as exp(-gamma t / 2)
// relative to the ground amplitude and the state is renormalized: a null
// result still updates the state. A detected photon resets the atom to the
// ground state, which it never leaves (no driving, no thermal excitation).

#include <cmath>
#include <optional>

#include "nullshadow/core.hpp"
#include "nullshadow/random.hpp"

namespace nullshadow {

template <typename Real>
struct BasicTrajectoryRecord {
    std::optional<Real> jump_time;
    BasicQubitState<Real> final_state;
    bool blackened{false};
};

using TrajectoryRecord = BasicTrajectoryRecord<double>;

namespace detail {

template <typename Real>
void require_time(Real t) {
    if (!(t >= Real(0))) throw ConfigError("time must be non-negative");
}

template <typename Real>
void require_probability(Real p) {
    if (!(p >= Real(0) && p <= Real(1))) throw ConfigError("probability must lie in [0, 1]");
}

}  // namespace detail

/// State conditioned on no emission during [0, t].
template <typename Real>
BasicQubitState<Real> no_jump_evolve(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params,
                                     Real t) {
    detail::require_time(t);
    const Real x = params.gamma * t;
    const Real p0 = state.ground_population();
    const Real p1 = state.excited_population();
    Complex<Real> a0 = state.a0();
    Complex<Real> a1 = state.a1();
    // Both amplitudes are rescaled in the form that cannot underflow to 0/0:
    // a pure excited state keeps its direction for any finite t.
    if (p0 == Real(0)) {
        if (p1 == Real(0)) throw NullStateError();
        a1 /= std::sqrt(p1);
    } else if (p1 > Real(0)) {
        a0 /= std::sqrt(p0 + p1 * std::exp(-x));
        a1 /= std::sqrt(p0 * std::exp(x) + p1);
    } else {
        a0 /= std::sqrt(p0);
    }
    return free_evolve(BasicQubitState<Real>(a0, a1), params, t);
}

/// Instantaneous emission rate gamma |a1|^2.
template <typename Real>
Real jump_hazard(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params) {
    return params.gamma * state.excited_population();
}

/// Probability of no emission by time t for excited population p1.
template <typename Real>
Real no_jump_survival(Real p1, Real gamma, Real t) {
    detail::require_probability(p1);
    detail::require_time(t);
    return (Real(1) - p1) + p1 * std::exp(-gamma * t);
}

/// Excited population of the survivor state after waiting t without a photon.
template <typename Real>
Real conditional_excited_prob(Real p1, Real gamma, Real t) {
    detail::require_probability(p1);
    detail::require_time(t);
    if (p1 == Real(0)) return Real(0);
    if (p1 == Real(1)) return Real(1);
    return p1 / ((Real(1) - p1) * std::exp(gamma * t) + p1);
}

/// Exact inverse-transform draw of the emission time; empty means the atom never radiates.
template <typename Real>
std::optional<Real> sample_jump_time(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params,
                                     Real u) {
    if (!(u >= Real(0) && u < Real(1))) throw ConfigError("uniform variate must lie in [0, 1)");
    const Real p1 = state.excited_population();
    if (!(params.gamma > Real(0)) || u >= p1) return std::nullopt;
    return -std::log1p(-u / p1) / params.gamma;
}

template <typename Real>
BasicTrajectoryRecord<Real> run_trajectory(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params,
                                           Real horizon, Real u) {
    if (!(horizon > Real(0))) throw ConfigError("horizon must be positive");
    const auto jump = sample_jump_time(state, params, u);
    if (jump && *jump <= horizon) return {jump, BasicQubitState<Real>::ground(), true};
    return {std::nullopt, no_jump_evolve(state, params, horizon), false};
}

/// State at time t of a trajectory that started in `initial` and radiated at `jump_time` (if ever).
template <typename Real>
BasicQubitState<Real> trajectory_state_at(const BasicQubitState<Real>& initial, const BasicAtomParams<Real>& params,
                                          const std::optional<Real>& jump_time, Real t) {
    if (jump_time && *jump_time <= t) return BasicQubitState<Real>::ground();
    return no_jump_evolve(initial, params, t);
}

/// Time-stepped sampler: per step of length dt the atom radiates with
/// probability hazard * dt. Carries O(dt) bias; kept as a cross-check of
/// sample_jump_time, not for production runs.
template <typename Real, Uniform64Generator G>
std::optional<Real> sample_jump_time_stepped(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params,
                                             Real dt, Real horizon, G& gen) {
    if (!(dt > Real(0))) throw ConfigError("dt must be positive");
    const auto steps = static_cast<long long>(std::ceil(horizon / dt));
    BasicQubitState<Real> s = state;
    for (long long k = 0; k < steps; ++k) {
        if (static_cast<Real>(uniform01(gen)) < jump_hazard(s, params) * dt) return Real(k + 1) * dt;
        s = no_jump_evolve(s, params, dt);
    }
    return std::nullopt;
}

}  // namespace nullshadow

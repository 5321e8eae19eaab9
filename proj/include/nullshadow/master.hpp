#pragma once

// Lindblad master equation for the decaying two-level atom,
//
//   d rho/dt = -i [H, rho] + gamma (L rho L^+ - {L^+ L, rho} / 2),
//   H = diag(e0, e1),  L = |ground><excited|,
//
// integrated with fixed-step classical RK4. Used as the reference for
// trajectory ensemble averages.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "nullshadow/core.hpp"

namespace nullshadow {

template <typename Real>
struct BasicMasterRunConfig {
    Real dt{Real(1e-3)};
    Real t_max{Real(1)};
    int record_every{1};

    void validate(const BasicAtomParams<Real>& params) const {
        if (!(dt > Real(0))) throw ConfigError("dt must be positive");
        if (!(t_max >= dt)) throw ConfigError("t_max must be at least dt");
        if (record_every < 1) throw ConfigError("record_every must be >= 1");
        const Real scale = std::max({params.gamma, params.transition_frequency(), Real(1e-12)});
        if (dt > Real(0.1) / scale) throw ConfigError("dt exceeds stability bound 0.1 / max(gamma, e1 - e0)");
    }

    /// Steps actually taken; the step is shrunk to t_max / steps() so the horizon is hit exactly.
    long long steps() const {
        const Real ratio = t_max / dt;
        const Real nearest = std::round(ratio);
        return static_cast<long long>(std::abs(ratio - nearest) <= Real(1e-9) * ratio ? nearest : std::ceil(ratio));
    }
};

using MasterRunConfig = BasicMasterRunConfig<double>;

template <typename Real>
struct BasicMasterSeries {
    std::vector<Real> times;
    std::vector<BasicDensityMatrix2<Real>> states;
};

using MasterSeries = BasicMasterSeries<double>;

/// Time derivative of rho. Traceless and Hermitian-preserving.
template <typename Real>
Operator2<Real> lindblad_rhs(const Operator2<Real>& rho, const BasicAtomParams<Real>& params) {
    using C = Complex<Real>;
    Operator2<Real> hamiltonian = Operator2<Real>::Zero();
    hamiltonian.diagonal() << C(params.e0), C(params.e1);
    Operator2<Real> lowering = Operator2<Real>::Zero();
    lowering(0, 1) = C(1);
    const Operator2<Real> number = lowering.adjoint() * lowering;
    const C minus_i(0, -1);
    return minus_i * (hamiltonian * rho - rho * hamiltonian) +
           params.gamma * (lowering * rho * lowering.adjoint() - Real(0.5) * (number * rho + rho * number));
}

template <typename Real>
BasicDensityMatrix2<Real> lindblad_rhs(const BasicDensityMatrix2<Real>& rho, const BasicAtomParams<Real>& params) {
    return BasicDensityMatrix2<Real>(lindblad_rhs(rho.m, params));
}

template <typename Real>
Operator2<Real> rk4_step(const Operator2<Real>& rho, const BasicAtomParams<Real>& params, Real h) {
    const Operator2<Real> k1 = lindblad_rhs(rho, params);
    const Operator2<Real> k2 = lindblad_rhs(Operator2<Real>(rho + Real(0.5) * h * k1), params);
    const Operator2<Real> k3 = lindblad_rhs(Operator2<Real>(rho + Real(0.5) * h * k2), params);
    const Operator2<Real> k4 = lindblad_rhs(Operator2<Real>(rho + h * k3), params);
    Operator2<Real> next = rho + (h / Real(6)) * (k1 + Real(2) * k2 + Real(2) * k3 + k4);
    // Only round-off can break Hermiticity; project it back out.
    return Real(0.5) * (next + next.adjoint());
}

/// Records at t = 0, every record_every steps, and at t_max.
template <typename Real>
BasicMasterSeries<Real> integrate_master(const BasicDensityMatrix2<Real>& rho0, const BasicAtomParams<Real>& params,
                                         const BasicMasterRunConfig<Real>& cfg) {
    // Degenerate levels are allowed here: the generator is well defined for e1 == e0.
    if (!(params.e1 >= params.e0)) throw ConfigError("excited energy must not be below ground energy");
    if (!(params.gamma >= Real(0))) throw ConfigError("decay rate must be non-negative");
    cfg.validate(params);
    if (!rho0.is_physical()) throw ConfigError("initial density matrix is not physical");

    const long long steps = cfg.steps();
    const Real h = cfg.t_max / static_cast<Real>(steps);
    BasicMasterSeries<Real> out;
    out.times.push_back(Real(0));
    out.states.push_back(rho0);
    Operator2<Real> rho = rho0.m;
    for (long long k = 1; k <= steps; ++k) {
        rho = rk4_step(rho, params, h);
        if (k % cfg.record_every == 0 || k == steps) {
            out.times.push_back(k == steps ? cfg.t_max : h * static_cast<Real>(k));
            out.states.push_back(BasicDensityMatrix2<Real>(rho));
        }
    }
    return out;
}

/// Equal-weight mean of pure-state projectors, one path per trajectory, all on a shared time grid.
template <typename Real>
std::vector<BasicDensityMatrix2<Real>> average_trajectories(
    std::span<const std::vector<BasicQubitState<Real>>> paths) {
    if (paths.empty()) throw ConfigError("no trajectories to average");
    const std::size_t points = paths.front().size();
    std::vector<Operator2<Real>> sums(points, Operator2<Real>::Zero());
    for (const auto& path : paths) {
        if (path.size() != points) throw ConfigError("trajectories do not share a time grid");
        for (std::size_t k = 0; k < points; ++k) sums[k] += path[k].amps * path[k].amps.adjoint();
    }
    const Real weight = Real(1) / static_cast<Real>(paths.size());
    std::vector<BasicDensityMatrix2<Real>> out;
    out.reserve(points);
    for (const auto& s : sums) out.emplace_back(Operator2<Real>(s * weight));
    return out;
}

/// Largest entry modulus of a - b over a series.
template <typename Real>
Real max_elementwise_deviation(std::span<const BasicDensityMatrix2<Real>> a,
                               std::span<const BasicDensityMatrix2<Real>> b) {
    if (a.size() != b.size()) throw ConfigError("series lengths differ");
    Real worst = Real(0);
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, (a[k].m - b[k].m).cwiseAbs().maxCoeff());
    return worst;
}

}  // namespace nullshadow

#pragma once

// Two-level state primitives. Basis ordering is (ground, excited) throughout;
// the coherence of a density matrix is rho01 = <ground|rho|excited>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>

#include "nullshadow/errors.hpp"

namespace nullshadow {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Amplitudes2 = Eigen::Matrix<Complex<Real>, 2, 1>;

template <typename Real>
using Operator2 = Eigen::Matrix<Complex<Real>, 2, 2>;

/// Pure state a0|ground> + a1|excited>. Global phase is kept as-is.
template <typename Real>
struct BasicQubitState {
    Amplitudes2<Real> amps{Amplitudes2<Real>::Zero()};

    BasicQubitState() = default;
    BasicQubitState(Complex<Real> a0_, Complex<Real> a1_) { amps << a0_, a1_; }
    explicit BasicQubitState(const Amplitudes2<Real>& v) : amps(v) {}

    static BasicQubitState ground() { return {Real(1), Real(0)}; }
    static BasicQubitState excited() { return {Real(0), Real(1)}; }

    /// Real non-negative amplitudes with excited population p1.
    static BasicQubitState from_excited_population(Real p1) {
        if (!(p1 >= Real(0) && p1 <= Real(1)))
            throw ConfigError("excited population must lie in [0, 1]");
        return {std::sqrt(Real(1) - p1), std::sqrt(p1)};
    }

    Complex<Real> a0() const { return amps(0); }
    Complex<Real> a1() const { return amps(1); }
    Real ground_population() const { return std::norm(amps(0)); }
    Real excited_population() const { return std::norm(amps(1)); }
    Real norm_squared() const { return amps.squaredNorm(); }

    /// Bit-exact comparison, global phase included. Use fidelity for physics.
    friend bool operator==(const BasicQubitState& a, const BasicQubitState& b) { return a.amps == b.amps; }
};

using QubitState = BasicQubitState<double>;

/// Level energies (angular frequencies, hbar = 1) and spontaneous decay rate.
template <typename Real>
struct BasicAtomParams {
    Real e0{0};
    Real e1{1};
    Real gamma{1};

    Real transition_frequency() const { return e1 - e0; }
    Real lifetime() const { return Real(1) / gamma; }

    void validate() const {
        if (!(e1 > e0)) throw ConfigError("excited energy must exceed ground energy");
        if (!(gamma >= Real(0))) throw ConfigError("decay rate must be non-negative");
    }
};

using AtomParams = BasicAtomParams<double>;

/// 2x2 density matrix in the (ground, excited) basis.
template <typename Real>
struct BasicDensityMatrix2 {
    Operator2<Real> m{Operator2<Real>::Zero()};

    BasicDensityMatrix2() = default;
    explicit BasicDensityMatrix2(const Operator2<Real>& op) : m(op) {}
    BasicDensityMatrix2(Real rho00, Real rho11, Complex<Real> rho01) {
        m << rho00, rho01, std::conj(rho01), rho11;
    }

    static BasicDensityMatrix2 diagonal(Real rho00, Real rho11) { return {rho00, rho11, Real(0)}; }

    Real rho00() const { return m(0, 0).real(); }
    Real rho11() const { return m(1, 1).real(); }
    Complex<Real> rho01() const { return m(0, 1); }
    Real trace() const { return m.trace().real(); }
    Real purity() const { return (m * m).trace().real(); }

    /// Trace one, non-negative populations and |rho01|^2 <= rho00 rho11, each to tol.
    bool is_physical(Real tol = Real(1e-9)) const {
        const Real neg = std::min<Real>(tol, Real(1e-12));
        return std::abs(trace() - Real(1)) <= tol && rho00() >= -neg && rho11() >= -neg &&
               std::norm(rho01()) <= rho00() * rho11() + tol &&
               (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
    }
};

using DensityMatrix2 = BasicDensityMatrix2<double>;

template <typename Real>
BasicQubitState<Real> normalize(const BasicQubitState<Real>& state) {
    const Real n = state.amps.norm();
    if (!(n > Real(0))) throw NullStateError();
    return BasicQubitState<Real>(Amplitudes2<Real>(state.amps / n));
}

/// Measurement-free evolution: each level picks up exp(-i E t).
template <typename Real>
BasicQubitState<Real> free_evolve(const BasicQubitState<Real>& state, const BasicAtomParams<Real>& params,
                                  Real t) {
    if (!(t >= Real(0))) throw ConfigError("evolution time must be non-negative");
    return {state.a0() * std::polar(Real(1), -params.e0 * t), state.a1() * std::polar(Real(1), -params.e1 * t)};
}

/// |<s1|s2>|^2 for normalized states.
template <typename Real>
Real fidelity(const BasicQubitState<Real>& s1, const BasicQubitState<Real>& s2) {
    return std::min<Real>(Real(1), std::norm(s1.amps.dot(s2.amps)));
}

template <typename Real>
BasicDensityMatrix2<Real> density_from_state(const BasicQubitState<Real>& state) {
    return BasicDensityMatrix2<Real>(Operator2<Real>(state.amps * state.amps.adjoint()));
}

}  // namespace nullshadow

#pragma once

// Single-photon Mach-Zehnder / Elitzur-Vaidman device.
//
// Two rails (arm A, arm B). Beam splitters use the symmetric convention
//
//   [ sqrt(T)      i sqrt(1-T) ]
//   [ i sqrt(1-T)  sqrt(T)     ]
//
// so reflection costs a phase i. The photon enters on rail A. Detector naming
// follows the observable rather than geometry: D1 is the output port that
// receives every photon of a balanced, unblocked, equal-phase device, which
// under this convention is the rail-B output. D2 is the rail-A output.

#include <array>
#include <cmath>
#include <optional>
#include <string_view>

#include "nullshadow/core.hpp"

namespace nullshadow {

enum class Arm { A, B };
enum class Outcome { D1, D2, Absorbed };

constexpr std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::D1: return "D1";
        case Outcome::D2: return "D2";
        case Outcome::Absorbed: return "Absorbed";
    }
    return "?";
}

template <typename Real>
struct BasicModeState {
    Amplitudes2<Real> amps{Amplitudes2<Real>::Zero()};
    Real p_absorbed{0};

    BasicModeState() = default;
    BasicModeState(Complex<Real> a, Complex<Real> b, Real absorbed = Real(0)) : p_absorbed(absorbed) { amps << a, b; }

    static BasicModeState input() { return {Real(1), Real(0)}; }

    Complex<Real> amp_a() const { return amps(0); }
    Complex<Real> amp_b() const { return amps(1); }
    Real total_probability() const { return amps.squaredNorm() + p_absorbed; }
};

using ModeState = BasicModeState<double>;

template <typename Real>
struct BasicEVConfig {
    Real splitter1_transmissivity{Real(0.5)};
    Real splitter2_transmissivity{Real(0.5)};
    Real phase_a{0};
    Real phase_b{0};
    std::optional<Arm> blocker;

    void validate() const {
        for (Real t : {splitter1_transmissivity, splitter2_transmissivity})
            if (!(t >= Real(0) && t <= Real(1))) throw ConfigError("transmissivity must lie in [0, 1]");
    }
};

using EVConfig = BasicEVConfig<double>;

template <typename Real>
struct BasicDetectionProbs {
    Real d1{0};
    Real d2{0};
    Real absorbed{0};

    Real operator[](Outcome o) const {
        return o == Outcome::D1 ? d1 : o == Outcome::D2 ? d2 : absorbed;
    }
};

using DetectionProbs = BasicDetectionProbs<double>;

template <typename Real>
Operator2<Real> beam_splitter_matrix(Real transmissivity) {
    if (!(transmissivity >= Real(0) && transmissivity <= Real(1)))
        throw ConfigError("transmissivity must lie in [0, 1]");
    const Complex<Real> t(std::sqrt(transmissivity), 0);
    const Complex<Real> r(0, std::sqrt(Real(1) - transmissivity));
    Operator2<Real> u;
    u << t, r, r, t;
    return u;
}

template <typename Real>
BasicModeState<Real> beam_splitter(const BasicModeState<Real>& m, Real transmissivity) {
    BasicModeState<Real> out = m;
    out.amps = beam_splitter_matrix(transmissivity) * m.amps;
    return out;
}

template <typename Real>
BasicModeState<Real> apply_arm_phases(const BasicModeState<Real>& m, Real phase_a, Real phase_b) {
    return {m.amp_a() * std::polar(Real(1), phase_a), m.amp_b() * std::polar(Real(1), phase_b), m.p_absorbed};
}

/// The blocker absorbs whatever amplitude reaches it.
template <typename Real>
BasicModeState<Real> apply_blocker(const BasicModeState<Real>& m, Arm arm) {
    BasicModeState<Real> out = m;
    const int idx = arm == Arm::A ? 0 : 1;
    out.p_absorbed += std::norm(out.amps(idx));
    out.amps(idx) = Complex<Real>(0);
    return out;
}

/// Photon state just before the detectors.
template <typename Real>
BasicModeState<Real> propagate(const BasicEVConfig<Real>& cfg) {
    cfg.validate();
    auto m = beam_splitter(BasicModeState<Real>::input(), cfg.splitter1_transmissivity);
    m = apply_arm_phases(m, cfg.phase_a, cfg.phase_b);
    if (cfg.blocker) m = apply_blocker(m, *cfg.blocker);
    return beam_splitter(m, cfg.splitter2_transmissivity);
}

template <typename Real>
BasicDetectionProbs<Real> detection_probs(const BasicEVConfig<Real>& cfg) {
    const auto m = propagate(cfg);
    return {std::norm(m.amp_b()), std::norm(m.amp_a()), m.p_absorbed};
}

/// Inverse-transform draw over (D1, D2, Absorbed). Zero-probability outcomes are never returned.
template <typename Real>
Outcome sample_outcome(const BasicDetectionProbs<Real>& probs, Real u) {
    if (!(u >= Real(0) && u < Real(1))) throw ConfigError("uniform variate must lie in [0, 1)");
    constexpr std::array order{Outcome::D1, Outcome::D2, Outcome::Absorbed};
    Real cumulative = Real(0);
    std::optional<Outcome> last_possible;
    for (Outcome o : order) {
        const Real p = probs[o];
        if (!(p > Real(0))) continue;
        cumulative += p;
        last_possible = o;
        if (u < cumulative) return o;
    }
    // Rounding left the cumulative sum a hair below one.
    return last_possible.value_or(Outcome::D1);
}

template <typename Real>
Outcome sample_photon(const BasicEVConfig<Real>& cfg, Real u) {
    return sample_outcome(detection_probs(cfg), u);
}

}  // namespace nullshadow

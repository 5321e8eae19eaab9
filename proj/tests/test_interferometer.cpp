#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>

#include "nullshadow/interferometer.hpp"
#include "nullshadow/random.hpp"
#include "test_helpers.hpp"

using namespace nullshadow;
using testing_support::kInvSqrt2;
using testing_support::uniform;

namespace {

using C = std::complex<double>;

// Independent oracle: scalar 2x2 products written out by hand.
struct Pair {
    C a, b;
};

Pair splitter(Pair in, double t) {
    const double c = std::sqrt(t);
    const C r(0.0, std::sqrt(1.0 - t));
    return {c * in.a + r * in.b, r * in.a + c * in.b};
}

std::array<double, 3> oracle_probs(double t1, double t2, double pa, double pb, std::optional<Arm> blocker) {
    Pair m = splitter({1.0, 0.0}, t1);
    m.a *= std::polar(1.0, pa);
    m.b *= std::polar(1.0, pb);
    double absorbed = 0.0;
    if (blocker == Arm::A) {
        absorbed = std::norm(m.a);
        m.a = 0.0;
    } else if (blocker == Arm::B) {
        absorbed = std::norm(m.b);
        m.b = 0.0;
    }
    m = splitter(m, t2);
    // D1 is the rail-B output, D2 the rail-A output.
    return {std::norm(m.b), std::norm(m.a), absorbed};
}

}  // namespace

TEST_CASE("beam_splitter") {
    SUBCASE("T = 1 is the identity") {
        const ModeState m({0.6, 0.1}, {0.0, -0.8}, 0.0);
        const auto out = beam_splitter(m, 1.0);
        CHECK((out.amps - m.amps).norm() == 0.0);
    }
    SUBCASE("balanced splitter on rail A") {
        const auto out = beam_splitter(ModeState::input(), 0.5);
        CHECK(std::abs(out.amp_a() - C(kInvSqrt2, 0.0)) < 1e-15);
        CHECK(std::abs(out.amp_b() - C(0.0, kInvSqrt2)) < 1e-15);
    }
    SUBCASE("two balanced splitters route everything to one output") {
        const auto out = beam_splitter(beam_splitter(ModeState::input(), 0.5), 0.5);
        CHECK(std::abs(out.amp_a()) < 1e-15);
        CHECK(std::abs(out.amp_b() - C(0.0, 1.0)) < 1e-15);
    }
    SUBCASE("out of range") {
        CHECK_THROWS_AS(beam_splitter(ModeState::input(), 1.5), ConfigError);
        CHECK_THROWS_AS(beam_splitter(ModeState::input(), -0.1), ConfigError);
    }
    SUBCASE("unitary: inner products and norms preserved") {
        for (int trial = 0; trial < 200; ++trial) {
            const ModeState x({uniform(-1, 1), uniform(-1, 1)}, {uniform(-1, 1), uniform(-1, 1)});
            const ModeState y({uniform(-1, 1), uniform(-1, 1)}, {uniform(-1, 1), uniform(-1, 1)});
            const double t = uniform(0.0, 1.0);
            const auto bx = beam_splitter(x, t);
            const auto by = beam_splitter(y, t);
            CHECK(std::abs(bx.amps.dot(by.amps) - x.amps.dot(y.amps)) < 1e-14);
            CHECK(std::abs(bx.amps.squaredNorm() - x.amps.squaredNorm()) < 1e-14);
        }
    }
}

TEST_CASE("apply_arm_phases") {
    const auto m = beam_splitter(ModeState::input(), 0.5);
    CHECK((apply_arm_phases(m, 0.0, 0.0).amps - m.amps).norm() == 0.0);
    const auto shifted = apply_arm_phases(m, 1.1, -0.4);
    CHECK(std::abs(std::norm(shifted.amp_a()) - std::norm(m.amp_a())) < 1e-15);
    CHECK(std::abs(std::norm(shifted.amp_b()) - std::norm(m.amp_b())) < 1e-15);

    EVConfig flipped;
    flipped.phase_a = std::numbers::pi;
    const auto p = detection_probs(flipped);
    CHECK(p.d1 < 1e-12);
    CHECK(std::abs(p.d2 - 1.0) < 1e-12);
}

TEST_CASE("apply_blocker") {
    const auto balanced = beam_splitter(ModeState::input(), 0.5);
    SUBCASE("empty arm is a no-op") {
        const auto m = apply_blocker(ModeState::input(), Arm::B);
        CHECK(m.p_absorbed == 0.0);
        CHECK((m.amps - ModeState::input().amps).norm() == 0.0);
    }
    SUBCASE("blocking arm B of the balanced state") {
        const auto m = apply_blocker(balanced, Arm::B);
        CHECK(std::abs(m.p_absorbed - 0.5) < 1e-15);
        CHECK(m.amp_b() == C(0.0));
        CHECK(std::abs(m.total_probability() - 1.0) < 1e-12);
    }
    SUBCASE("idempotent") {
        const auto once = apply_blocker(balanced, Arm::A);
        const auto twice = apply_blocker(once, Arm::A);
        CHECK(twice.p_absorbed == once.p_absorbed);
        CHECK((twice.amps - once.amps).norm() == 0.0);
    }
}

TEST_CASE("detection_probs examples") {
    SUBCASE("balanced, unblocked, equal phases: every photon reaches D1") {
        const auto p = detection_probs(EVConfig{});
        CHECK(std::abs(p.d1 - 1.0) < 1e-12);
        CHECK(p.d2 < 1e-12);
        CHECK(p.absorbed == 0.0);
    }
    SUBCASE("balanced with a blocker") {
        for (Arm arm : {Arm::A, Arm::B}) {
            EVConfig cfg;
            cfg.blocker = arm;
            const auto p = detection_probs(cfg);
            CHECK(std::abs(p.d1 - 0.25) < 1e-12);
            CHECK(std::abs(p.d2 - 0.25) < 1e-12);
            CHECK(std::abs(p.absorbed - 0.5) < 1e-12);
        }
    }
    SUBCASE("photon never meets a blocker in the dark arm") {
        for (double t2 : {0.0, 0.3, 0.5, 1.0}) {
            EVConfig blocked;
            blocked.splitter1_transmissivity = 1.0;
            blocked.splitter2_transmissivity = t2;
            blocked.blocker = Arm::B;
            EVConfig open = blocked;
            open.blocker.reset();
            const auto a = detection_probs(blocked);
            const auto b = detection_probs(open);
            CHECK(a.absorbed == 0.0);
            CHECK(std::abs(a.d1 - b.d1) < 1e-15);
            CHECK(std::abs(a.d2 - b.d2) < 1e-15);
        }
        EVConfig cfg;
        cfg.splitter1_transmissivity = 1.0;
        cfg.splitter2_transmissivity = 0.0;
        cfg.blocker = Arm::B;
        const auto p = detection_probs(cfg);
        CHECK(std::abs(p.d1 - 1.0) < 1e-12);
        CHECK(p.d2 < 1e-12);
        CHECK(p.absorbed == 0.0);
    }
}

TEST_CASE("detection_probs matches the hand-multiplied oracle") {
    for (int trial = 0; trial < 500; ++trial) {
        EVConfig cfg;
        cfg.splitter1_transmissivity = uniform(0.0, 1.0);
        cfg.splitter2_transmissivity = uniform(0.0, 1.0);
        cfg.phase_a = uniform(-7.0, 7.0);
        cfg.phase_b = uniform(-7.0, 7.0);
        const int b = trial % 3;
        if (b == 1) cfg.blocker = Arm::A;
        if (b == 2) cfg.blocker = Arm::B;
        const auto p = detection_probs(cfg);
        const auto o = oracle_probs(cfg.splitter1_transmissivity, cfg.splitter2_transmissivity, cfg.phase_a,
                                    cfg.phase_b, cfg.blocker);
        CHECK(std::abs(p.d1 - o[0]) < 1e-12);
        CHECK(std::abs(p.d2 - o[1]) < 1e-12);
        CHECK(std::abs(p.absorbed - o[2]) < 1e-12);
        CHECK(std::abs(p.d1 + p.d2 + p.absorbed - 1.0) < 1e-12);

        // Common phase offsets change nothing.
        EVConfig shifted = cfg;
        const double common = uniform(-5.0, 5.0);
        shifted.phase_a += common;
        shifted.phase_b += common;
        const auto q = detection_probs(shifted);
        CHECK(std::abs(q.d1 - p.d1) < 1e-12);
        CHECK(std::abs(q.d2 - p.d2) < 1e-12);
    }
}

TEST_CASE("pipeline stages conserve probability") {
    for (int trial = 0; trial < 200; ++trial) {
        auto m = beam_splitter(ModeState::input(), uniform(0.0, 1.0));
        CHECK(std::abs(m.total_probability() - 1.0) < 1e-12);
        m = apply_arm_phases(m, uniform(-4, 4), uniform(-4, 4));
        CHECK(std::abs(m.total_probability() - 1.0) < 1e-12);
        m = apply_blocker(m, trial % 2 ? Arm::A : Arm::B);
        CHECK(std::abs(m.total_probability() - 1.0) < 1e-12);
        m = beam_splitter(m, uniform(0.0, 1.0));
        CHECK(std::abs(m.total_probability() - 1.0) < 1e-12);
    }
}

TEST_CASE("interference fringe") {
    for (int k = 0; k < 64; ++k) {
        EVConfig cfg;
        const double delta = 2.0 * std::numbers::pi * k / 64.0;
        cfg.phase_a = delta;
        const auto p = detection_probs(cfg);
        CHECK(std::abs(p.d2 - std::pow(std::sin(delta / 2.0), 2)) < 1e-12);
        CHECK(std::abs(p.d1 + p.d2 - 1.0) < 1e-12);
    }
}

TEST_CASE("sample_photon") {
    EVConfig open;
    for (double u : {0.0, 0.25, 0.5, 0.999999, 0.9999999999999999}) CHECK(sample_photon(open, u) == Outcome::D1);
    EVConfig bomb;
    bomb.blocker = Arm::B;
    CHECK(sample_photon(bomb, 0.9) == Outcome::Absorbed);
    CHECK(sample_photon(bomb, 0.3) == Outcome::D2);
    CHECK(sample_photon(bomb, 0.1) == Outcome::D1);
    CHECK_THROWS_AS(sample_photon(bomb, 1.0), ConfigError);

    SUBCASE("empirical frequencies") {
        const auto probs = detection_probs(bomb);
        SplitMix64 gen(7);
        const int n = 100000;
        std::array<int, 3> counts{};
        for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(sample_outcome(probs, uniform01(gen)))];
        for (Outcome o : {Outcome::D1, Outcome::D2, Outcome::Absorbed}) {
            const double p = probs[o];
            const double sigma = std::sqrt(n * p * (1.0 - p));
            CHECK(std::abs(counts[static_cast<std::size_t>(o)] - n * p) <= 3.0 * sigma);
        }
    }
}

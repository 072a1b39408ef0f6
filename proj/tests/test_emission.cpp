#include <doctest.h>

#include <cmath>
#include <random>

#include "dynlab/emission.hpp"

using namespace dynlab;
using namespace dynlab::emission;

namespace {

LevelSystem make_two_level(double omega_c, double r12,
                           const PhysicalConstants& k, double omega_base = 0.0) {
    const CVec3 zero = CVec3::Zero();
    CVec3 off = CVec3::Zero();
    off(0) = Complex(r12, 0.0);
    return LevelSystem({omega_base, omega_base + omega_c},
                       {zero, off, off, zero}, k);
}

fields::ModeSet one_mode_set(double omega, Complex alpha,
                             const PhysicalConstants& k) {
    std::vector<fields::FieldMode> modes;
    modes.emplace_back(fields::Vec3(0, 0, omega / k.c), fields::Vec3(1, 0, 0),
                       alpha, 0, k);
    return fields::ModeSet(std::move(modes), k, 1.0, 1);
}

}  // namespace

TEST_CASE("level system validation") {
    const auto k = make_constants(UnitSystem::Natural);
    const CVec3 zero = CVec3::Zero();
    CHECK_THROWS_AS(LevelSystem({1.0, 1.0}, {zero, zero, zero, zero}, k),
                    std::invalid_argument);

    CVec3 off = CVec3::Zero();
    off(0) = Complex(0.3, 0.1);
    CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {zero, off, off, zero}, k),
                    std::invalid_argument);  // not conjugate-symmetric

    CVec3 diag = CVec3::Zero();
    diag(1) = Complex(0.0, 0.5);
    CHECK_THROWS_AS(LevelSystem({0.0, 1.0}, {diag, zero, zero, zero}, k),
                    std::invalid_argument);  // imaginary diagonal
}

TEST_CASE("emission constant") {
    const auto k = make_constants(UnitSystem::Natural);
    const auto sys = make_two_level(1.0, 1.0, k);
    const auto p = emission_constant(sys, 0, 1);
    CHECK(p.A == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p.omega_c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.r12 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.tau == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

    // Dark transition.
    const auto dark = make_two_level(1.0, 0.0, k);
    CHECK(emission_constant(dark, 0, 1).A == 0.0);

    // Cubic frequency dependence.
    const auto doubled = make_two_level(2.0, 1.0, k);
    CHECK(emission_constant(doubled, 0, 1).A ==
          doctest::Approx(8.0 * p.A).epsilon(1e-13));

    CHECK_THROWS_AS(emission_constant(sys, 1, 1), std::invalid_argument);
}

TEST_CASE("transition probability and intensity") {
    const auto k = make_constants(UnitSystem::Natural);
    const double p12 = transition_probability(1.0, 1.0, k);
    CHECK(p12 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(transition_probability(1.0, 0.0, k) == 0.0);

    const auto sys = make_two_level(1.0, 1.0, k);
    CHECK(p12 == doctest::Approx(2.0 * emission_constant(sys, 0, 1).A)
                     .epsilon(1e-14));

    const double intensity = emission_intensity(1.0, 1.0, k);
    CHECK(intensity == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(intensity / (k.hbar * 1.0) == doctest::Approx(p12).epsilon(1e-15));
    CHECK(emission_intensity(1.0, 0.0, k) == 0.0);
}

TEST_CASE("photon geometry") {
    const auto k = make_constants(UnitSystem::Natural);
    const auto g = photon_geometry(k.c, 0.5, k);  // C/omega = 1
    CHECK(g.sigma1 == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(g.dx2 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.length == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.sigma1 == doctest::Approx(M_PI * (g.dx2 + g.dy2)).epsilon(1e-15));

    const auto g2 = photon_geometry(2.0 * k.c, 0.5, k);
    CHECK(g2.sigma1 == doctest::Approx(g.sigma1 / 4.0).epsilon(1e-15));

    const double dp2 = k.hbar * k.hbar / (4.0 * g.dx2);
    CHECK(dp2 * g.dx2 == doctest::Approx(k.hbar * k.hbar / 4.0).epsilon(1e-15));
}

TEST_CASE("secular derivatives") {
    const auto k = make_constants(UnitSystem::Natural);
    const auto sys = make_two_level(1.0, 1.0, k);
    const double a_rate = emission_constant(sys, 0, 1).A;

    SUBCASE("pure level-1 state is a fixed point") {
        const auto dot = secular_rhs(sys, {Complex(1, 0), Complex(0, 0)});
        CHECK(std::abs(dot[0]) == 0.0);
        CHECK(std::abs(dot[1]) == 0.0);
    }

    SUBCASE("symmetric hybrid state") {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        const auto dot =
            secular_rhs(sys, {Complex(inv_sqrt2, 0), Complex(inv_sqrt2, 0)});
        CHECK(dot[0].real() ==
              doctest::Approx(a_rate / (2.0 * std::sqrt(2.0))).epsilon(1e-13));
        CHECK(dot[1].real() ==
              doctest::Approx(-a_rate / (2.0 * std::sqrt(2.0))).epsilon(1e-13));
        CHECK(std::abs(dot[0].imag()) <= 1e-16);
    }

    SUBCASE("norm is a first integral") {
        std::mt19937 rng(64);
        std::uniform_real_distribution<double> c(-1.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            std::vector<Complex> lam = {Complex(c(rng), c(rng)),
                                        Complex(c(rng), c(rng))};
            double norm = 0.0;
            for (auto& l : lam) norm += std::norm(l);
            for (auto& l : lam) l /= std::sqrt(norm);
            const auto dot = secular_rhs(sys, lam);
            Complex acc(0, 0);
            for (std::size_t j = 0; j < lam.size(); ++j)
                acc += std::conj(lam[j]) * dot[j];
            CHECK(std::abs(acc.real()) <= 1e-15 * a_rate);
        }
    }
}

TEST_CASE("full pre-secular derivatives") {
    const auto k = make_constants(UnitSystem::Natural);
    const double r12 = 0.8;
    const auto sys = make_two_level(1.0, r12, k, 0.3);
    const std::vector<Complex> lam = {Complex(0.6, 0.1), Complex(0.5, -0.2)};

    SUBCASE("single level gives a zero derivative") {
        const LevelSystem one({1.0}, {CVec3::Zero()}, k);
        const auto dot = full_rhs(one, {Complex(1, 0)}, 0.4);
        CHECK(std::abs(dot[0]) == 0.0);
    }

    SUBCASE("two-level closed form at arbitrary time") {
        // For off-diagonal dipoles the triple sum keeps exactly two terms
        // per level: the secular one and one counter-rotating term at
        // twice the gap frequency.
        const double coeff = -(2.0 / 3.0) * coulomb_e2(k) /
                             (k.hbar * k.c * k.c * k.c);
        const double delta = sys.frequency(0) - sys.frequency(1);
        const double d3 = delta * delta * delta;
        const double rr = r12 * r12;
        for (double t : {0.0, 0.37, 2.9}) {
            const auto dot = full_rhs(sys, lam, t);
            const Complex cr1 = std::polar(1.0, 2.0 * delta * t);
            const Complex expected0 =
                coeff * rr * d3 *
                (lam[0] * std::norm(lam[1]) -
                 lam[1] * lam[1] * std::conj(lam[0]) * cr1);
            const Complex cr2 = std::polar(1.0, -2.0 * delta * t);
            const Complex expected1 =
                coeff * rr * (-d3) *
                (lam[1] * std::norm(lam[0]) -
                 lam[0] * lam[0] * std::conj(lam[1]) * cr2);
            CHECK(std::abs(dot[0] - expected0) <= 1e-14);
            CHECK(std::abs(dot[1] - expected1) <= 1e-14);
        }
    }

    SUBCASE("time average approaches the secular derivative") {
        const auto sec = secular_rhs(sys, lam);
        const double gap = 1.0;
        const std::size_t n = 20000;
        const double t_span = 400.0 * M_PI / gap + 0.37;
        std::vector<Complex> acc(2, Complex(0, 0));
        for (std::size_t i = 0; i < n; ++i) {
            const double t = t_span * static_cast<double>(i) / n;
            const auto dot = full_rhs(sys, lam, t);
            for (int j = 0; j < 2; ++j) acc[j] += dot[j];
        }
        for (int j = 0; j < 2; ++j) {
            acc[j] /= static_cast<double>(n);
            CHECK(std::abs(acc[j] - sec[j]) <= 1e-2 * std::abs(sec[j]));
        }
    }
}

TEST_CASE("population integration against the logistic closed form") {
    EmissionParams params{};
    params.A = 2.0 / 3.0;
    params.omega_c = 1.0;
    params.tau = 1.0;
    params.r12 = 1.0;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    TwoLevelState center;
    center.lambda = {Complex(inv_sqrt2, 0), Complex(inv_sqrt2, 0)};
    const double dt = 1e-3 / params.A;

    SUBCASE("pure state stays put") {
        TwoLevelState pure;
        pure.lambda = {Complex(1, 0), Complex(0, 0)};
        const auto traj = integrate_populations(params, pure, 5.0, dt);
        for (const auto& s : traj) {
            CHECK(std::norm(s.lambda[0]) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(s.lambda[1]) == 0.0);
        }
    }

    SUBCASE("both directions match the closed form") {
        for (double t_end : {10.0 / params.A, -10.0 / params.A}) {
            const auto traj = integrate_populations(params, center, t_end, dt);
            double worst_norm = 0.0, worst_pop = 0.0;
            for (const auto& s : traj) {
                const double p1 = std::norm(s.lambda[0]);
                const double p2 = std::norm(s.lambda[1]);
                worst_norm = std::max(worst_norm, std::abs(p1 + p2 - 1.0));
                const auto ref = analytic_populations(s.time, params.A);
                worst_pop = std::max(worst_pop, std::abs(p1 - ref.first));
                worst_pop = std::max(worst_pop, std::abs(p2 - ref.second));
            }
            CHECK(worst_norm <= 1e-10);
            CHECK(worst_pop <= 1e-8);
        }
    }

    SUBCASE("rejections") {
        CHECK_THROWS_AS(integrate_populations(params, center, 1.0, 2e-3 / params.A),
                        std::invalid_argument);
        TwoLevelState bad;
        bad.lambda = {Complex(1, 0), Complex(0.1, 0)};
        CHECK_THROWS_AS(integrate_populations(params, bad, 1.0, dt),
                        std::invalid_argument);
    }
}

TEST_CASE("analytic populations") {
    const auto at_zero = analytic_populations(0.0, 1.0);
    CHECK(at_zero.first == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(at_zero.second == doctest::Approx(0.5).epsilon(1e-15));

    // Exponent clamping at +-400 saturates the tails near exp(-400).
    const auto late = analytic_populations(500.0, 1.0);
    CHECK(late.first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(late.second <= 1e-170);

    std::mt19937 rng(21);
    std::uniform_real_distribution<double> t(-50.0, 50.0);
    for (int i = 0; i < 500; ++i) {
        const auto p = analytic_populations(t(rng), 0.7);
        CHECK(p.first + p.second == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hybrid envelope") {
    CHECK(hybrid_envelope(0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hybrid_envelope(3.1, 0.9) ==
          doctest::Approx(hybrid_envelope(-3.1, 0.9)).epsilon(1e-15));

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> t(-20.0, 20.0);
    std::uniform_real_distribution<double> a(0.1, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double tt = t(rng), aa = a(rng);
        const auto p = analytic_populations(tt, aa);
        CHECK(std::abs(hybrid_envelope(tt, aa) -
                       std::sqrt(p.first * p.second)) <= 1e-12);
    }

    // Far outside the needle the envelope saturates without overflow.
    CHECK(hybrid_envelope(1000.0, 1.0) <= 1e-170);
}

TEST_CASE("steady-state radius") {
    const auto k = make_constants(UnitSystem::Natural);
    EmissionParams params{};
    params.omega_c = 1.0;
    params.tau = 1e-3;
    const Eigen::Vector3d e_amp(0.8, 0.0, 0.0);

    const CVec3 far = steady_state_radius(50.0, params, e_amp, k);
    CHECK(std::abs(far(0)) <= 1e-3 * e_amp.norm());

    const CVec3 at_res = steady_state_radius(1.0, params, e_amp, k);
    CHECK(std::abs(at_res(0)) ==
          doctest::Approx((k.e / k.m) * 0.8 / (params.tau)).epsilon(1e-12));
    CHECK(std::abs(at_res(0).real()) <= 1e-12 * std::abs(at_res(0)));

    EmissionParams undamped = params;
    undamped.tau = 0.0;
    const CVec3 real_amp = steady_state_radius(2.0, undamped, e_amp, k);
    CHECK(real_amp(0).imag() == 0.0);
    CHECK(real_amp(0).real() ==
          doctest::Approx((k.e / k.m) * 0.8 / 3.0).epsilon(1e-14));
}

TEST_CASE("resonant derivatives") {
    const auto k = make_constants(UnitSystem::Natural);
    const auto sys = make_two_level(1.0, 0.1, k);
    const std::vector<Complex> lam = {Complex(0.6, 0.1), Complex(0.5, -0.2)};

    SUBCASE("empty mode set") {
        const fields::ModeSet empty({}, k, 1.0, 1);
        const auto dot = resonant_rhs(sys, empty, lam, 0.0, true);
        CHECK(std::abs(dot[0]) == 0.0);
        CHECK(std::abs(dot[1]) == 0.0);
    }

    SUBCASE("proportional to the secular derivative without counter-rotation") {
        const Complex alpha(0.3, 0.2);
        const double w = 1.2;
        const auto ms = one_mode_set(w, alpha, k);
        const double tau = emission_constant(sys, 0, 1).tau;
        const auto res = resonant_rhs(sys, ms, lam, 0.7, false);
        const auto sec = secular_rhs(sys, lam);
        const double detune = w * w - 1.0;
        const double damp = tau * w * w * w;
        const double kappa = w * w * std::norm(alpha) * 2.0 * detune /
                             (detune * detune + damp * damp);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(res[i] - kappa * sec[i]) <=
                  1e-10 * std::abs(kappa * sec[i]));
    }

    SUBCASE("counter-rotating terms wash out of averaged trajectories") {
        // Gap = 100 A; drive far above the population timescale.
        const auto slow = make_two_level(1.0, std::sqrt(1.5e-2), k);
        const auto ms = one_mode_set(1.2, Complex(0.5, 0.0), k);
        const double dt = 0.02;
        const std::size_t steps = 5000;
        std::vector<Complex> on = {Complex(1.0 / std::sqrt(2.0), 0),
                                   Complex(1.0 / std::sqrt(2.0), 0)};
        std::vector<Complex> off = on;
        std::vector<double> p_on, p_off;
        const auto rk4 = [&](std::vector<Complex>& s, double t, bool cr) {
            const auto f = [&](const std::vector<Complex>& x, double tt) {
                return resonant_rhs(slow, ms, x, tt, cr);
            };
            const auto k1 = f(s, t);
            std::vector<Complex> tmp(2);
            for (int i = 0; i < 2; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
            const auto k2 = f(tmp, t + 0.5 * dt);
            for (int i = 0; i < 2; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
            const auto k3 = f(tmp, t + 0.5 * dt);
            for (int i = 0; i < 2; ++i) tmp[i] = s[i] + dt * k3[i];
            const auto k4 = f(tmp, t + dt);
            for (int i = 0; i < 2; ++i)
                s[i] += (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        };
        for (std::size_t i = 0; i < steps; ++i) {
            const double t = dt * static_cast<double>(i);
            rk4(on, t, true);
            rk4(off, t, false);
            p_on.push_back(std::norm(on[0]));
            p_off.push_back(std::norm(off[0]));
        }
        // Averages over a 10 * (2 pi / omega) window.
        const auto window = static_cast<std::size_t>(
            std::llround(10.0 * 2.0 * M_PI / 1.2 / dt));
        double worst = 0.0;
        for (std::size_t i = 0; i + window < p_on.size(); i += 100) {
            double a_on = 0.0, a_off = 0.0;
            for (std::size_t j = i; j < i + window; ++j) {
                a_on += p_on[j];
                a_off += p_off[j];
            }
            worst = std::max(worst, std::abs(a_on - a_off) /
                                        static_cast<double>(window));
        }
        CHECK(worst <= 1e-2);
    }
}

TEST_CASE("dipole expectation") {
    const auto k = make_constants(UnitSystem::Natural);
    const auto ms = one_mode_set(1.2, Complex(0.4, 0.1), k);

    SUBCASE("pure state with zero diagonal dipole") {
        const auto sys = make_two_level(1.0, 0.3, k);
        const auto d =
            dipole_expectation(sys, ms, {Complex(1, 0), Complex(0, 0)}, 0.9);
        CHECK(d.norm() == 0.0);
    }

    SUBCASE("linear in the coherent amplitude") {
        const auto sys = make_two_level(1.0, 0.3, k);
        const std::vector<Complex> lam = {Complex(0.6, 0.0), Complex(0.8, 0.0)};
        const auto d1 = dipole_expectation(sys, ms, lam, 0.4);
        const auto ms2 = one_mode_set(1.2, Complex(0.8, 0.2), k);
        const auto d2 = dipole_expectation(sys, ms2, lam, 0.4);
        CHECK((d2 - 2.0 * d1).norm() <= 1e-13 * d1.norm());
    }

    SUBCASE("field prefactor equals the one-quantum oscillation amplitude") {
        // (e/m) sqrt(2 pi hbar w / (Omega eps0)) = w^2 sqrt(hbar/(2 m w))
        // when m w^2 = 4 pi e^2 / (Omega eps0).
        const double omega = 1.0;
        const double volume =
            4.0 * M_PI * k.e * k.e / (k.eps0 * k.m * omega * omega);
        const double lhs =
            (k.e / k.m) *
            std::sqrt(2.0 * M_PI * k.hbar * omega / (volume * k.eps0));
        const double rhs =
            omega * omega * std::sqrt(k.hbar / (2.0 * k.m * omega));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("hydrogen 1s->2p reference dipole") {
    const double expected = 128.0 * std::sqrt(2.0) / 243.0;
    CHECK(std::abs(hydrogen_1s2p_dipole() - expected) <= 1e-10);
}

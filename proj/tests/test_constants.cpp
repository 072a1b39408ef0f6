#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dynlab/constants.hpp"

using namespace dynlab;

TEST_CASE("natural constants fix the convention") {
    const auto k = make_constants(UnitSystem::Natural);
    CHECK(k.e == 1.0);
    CHECK(k.hbar == 1.0);
    CHECK(k.c == 1.0);
    CHECK(k.m == 1.0);
    CHECK(k.charge_mass == 1.0);
    CHECK(k.eps0 == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-15));
    CHECK(k.mu0 == doctest::Approx(4.0 * M_PI).epsilon(1e-15));
}

TEST_CASE("light-speed identity holds in both unit systems") {
    for (auto system : {UnitSystem::Natural, UnitSystem::Si}) {
        const auto k = make_constants(system);
        CHECK(std::abs(k.c * std::sqrt(k.eps0 * k.mu0) - 1.0) <= 1e-12);
        CHECK(k.e > 0.0);
        CHECK(k.m > 0.0);
        CHECK(k.charge_mass > 0.0);
        CHECK(k.hbar > 0.0);
        CHECK(k.eps0 > 0.0);
        CHECK(k.mu0 > 0.0);
    }
}

TEST_CASE("SI constants carry CODATA 2018 values") {
    const auto k = make_constants(UnitSystem::Si);
    CHECK(k.c == 2.99792458e8);
    CHECK(k.e == doctest::Approx(1.602176634e-19).epsilon(1e-12));
    CHECK(k.eps0 == doctest::Approx(8.8541878128e-12).epsilon(1e-10));
}

TEST_CASE("make_constants is pure") {
    const auto a = make_constants(UnitSystem::Si);
    const auto b = make_constants(UnitSystem::Si);
    CHECK(a.e == b.e);
    CHECK(a.m == b.m);
    CHECK(a.hbar == b.hbar);
    CHECK(a.c == b.c);
    CHECK(a.eps0 == b.eps0);
    CHECK(a.mu0 == b.mu0);
}

TEST_CASE("internal mode frequency") {
    CHECK(internal_mode_frequency(SpringParams(0.0, 1.0, 2.0, 1.0, 1)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(internal_mode_frequency(SpringParams(0.0, 0.0, 1.0, 1.0, 1)) == 0.0);
    CHECK(internal_mode_frequency(SpringParams(0.0, 2.0, 1.0, 1.0, 1)) ==
          doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("collective mode frequency") {
    CHECK(collective_mode_frequency(SpringParams(1.0, 0.0, 2.0, 1.0, 1)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(collective_mode_frequency(SpringParams(0.0, 1.0, 1.0, 1.0, 1)) == 0.0);
}

TEST_CASE("chi = 2 chi_tilde makes the collective frequency twice squared") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double chi_tilde = dist(rng);
        const double theta = dist(rng);
        const SpringParams p(2.0 * chi_tilde, chi_tilde, theta, 1.0, 4);
        const double w_int = internal_mode_frequency(p);
        const double w_col = collective_mode_frequency(p);
        CHECK(std::abs(w_col * w_col / (2.0 * w_int * w_int) - 1.0) <= 1e-12);
    }
}

TEST_CASE("charge frequency in natural units") {
    const auto k = make_constants(UnitSystem::Natural);
    const SpringParams p(1.0, 1.0, 1.0, 1.0, 1);
    CHECK(charge_frequency(p, k) == doctest::Approx(2.0).epsilon(1e-14));

    // Dilute limit.
    const SpringParams dilute(1.0, 1.0, 1.0, 1e12, 1);
    CHECK(charge_frequency(dilute, k) < 1e-5);
}

TEST_CASE("charge frequency agrees with the wavevector form") {
    const auto k = make_constants(UnitSystem::Natural);
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(0.2, 5.0);
    for (int i = 0; i < 100; ++i) {
        const SpringParams p(1.0, 1.0, dist(rng), dist(rng), 2);
        const double direct = charge_frequency(p, k);
        // Theta C^2 = (2e)^2/(4 pi Omega_0 q^2 eps0) solved with q = w/C.
        const double wavevector =
            k.c * std::sqrt(4.0 * k.e * k.e /
                            (4.0 * M_PI * p.cell_volume * p.charge_mass *
                             k.c * k.c * k.eps0));
        CHECK(std::abs(direct / wavevector - 1.0) <= 1e-12);
    }
}

TEST_CASE("charge frequency is homogeneous in the charge") {
    const SpringParams p(1.0, 1.0, 1.3, 0.7, 2);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(0.1, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double s = dist(rng);
        auto k = make_constants(UnitSystem::Natural);
        const double base = charge_frequency(p, k);
        k.e *= s;
        CHECK(charge_frequency(p, k) ==
              doctest::Approx(s * base).epsilon(1e-12));
    }
}

TEST_CASE("spring parameter validation") {
    CHECK_THROWS_AS(SpringParams(-1.0, 1.0, 1.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(SpringParams(1.0, 1.0, 0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(SpringParams(1.0, 1.0, 1.0, -2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(SpringParams(1.0, 1.0, 1.0, 1.0, 0), std::invalid_argument);
    const SpringParams ok(1.0, 2.0, 3.0, 0.5, 6);
    CHECK(ok.total_volume == doctest::Approx(3.0).epsilon(1e-15));
}

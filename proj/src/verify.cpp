#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dynlab/emission.hpp"
#include "dynlab/field_modes.hpp"
#include "dynlab/lattice.hpp"
#include "dynlab/radiation.hpp"
#include "dynlab/run.hpp"

namespace dynlab::run {

namespace {

using fields::Vec3;
using emission::Complex;

void check(RunReport& r, const std::string& name, double measured,
           double tolerance) {
    r.checks.push_back({name, measured, tolerance, measured <= tolerance});
}

double rel(double actual, double expected) {
    return std::abs(actual - expected) / std::abs(expected);
}

// ------------------------------------------------------------- model core

void check_constants(RunReport& r) {
    const auto knat = make_constants(UnitSystem::Natural);
    const auto ksi = make_constants(UnitSystem::Si);
    check(r, "constants_speed_identity_natural",
          std::abs(knat.c * std::sqrt(knat.eps0 * knat.mu0) - 1.0), 1e-12);
    check(r, "constants_speed_identity_si",
          std::abs(ksi.c * std::sqrt(ksi.eps0 * ksi.mu0) - 1.0), 1e-12);

    const SpringParams sp(2.6, 1.3, 1.7, 1.0, 8);  // chi = 2 chi_tilde
    const double w_int = internal_mode_frequency(sp);
    const double w_col = collective_mode_frequency(sp);
    check(r, "frequency_ratio_chi_equals_2chitilde",
          std::abs(w_col * w_col / (2.0 * w_int * w_int) - 1.0), 1e-12);

    const SpringParams sp2(1.0, 1.0, 1.3, 0.7, 4);
    const double w_direct = charge_frequency(sp2, knat);
    // Wavevector form Theta C^2 = (2e)^2/(4 pi Omega_0 q^2 eps0), q = w/C.
    const double w_wavevector =
        knat.c * std::sqrt(4.0 * knat.e * knat.e /
                           (4.0 * M_PI * sp2.cell_volume * sp2.charge_mass *
                            knat.c * knat.c * knat.eps0));
    check(r, "charge_frequency_wavevector_identity",
          rel(w_direct, w_wavevector), 1e-12);
}

// ---------------------------------------------------------------- lattice

void check_lattice(RunReport& r) {
    const SpringParams springs(2.0, 1.0, 1.0, 1.0, 8);
    const lattice::LatticeConfig config(8, 1.0, springs);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
        lattice::dynamical_matrix(config, 0.0));
    const double acoustic = std::sqrt(std::max(es.eigenvalues()(0), 0.0));
    const double optical_sq = es.eigenvalues()(1);
    check(r, "lattice_q0_acoustic_zero", acoustic, 1e-12);
    const double expected_sq =
        2.0 * (2.0 * springs.intra_spring / springs.charge_mass);
    check(r, "lattice_q0_optical_eigenvalue",
          std::abs(optical_sq / expected_sq - 1.0), 1e-10);

    // Time-domain spectrum of the seeded optical mode.
    const double omega_opt = std::sqrt(optical_sq);
    const double period = 2.0 * M_PI / omega_opt;
    const std::size_t steps_per = 315;
    const double dt = period / static_cast<double>(steps_per);
    lattice::ChainState state = lattice::build_chain(
        config, lattice::SeedMode{0.0, 0.01, lattice::Branch::Optical});
    const std::size_t stride = 8, n_samples = 4096;
    std::vector<lattice::ChainState> samples;
    samples.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        samples.push_back(state);
        for (std::size_t s = 0; s < stride; ++s)
            state = lattice::verlet_step(state, config, dt);
    }
    const auto peaks = lattice::measured_spectrum(samples, 0);
    const double bin = 2.0 * M_PI /
                       (static_cast<double>(n_samples) * dt *
                        static_cast<double>(stride));
    double peak_offset_bins = 1e300;
    for (const auto& p : peaks)
        peak_offset_bins =
            std::min(peak_offset_bins, std::abs(p.omega - omega_opt) / bin);
    check(r, "lattice_dft_peak_within_one_bin", peak_offset_bins, 1.0);

    // Energy drift and one-period return at dt*omega ~ 1.5e-3.
    const std::size_t n_fine = 4190;
    const double dt_fine = period / static_cast<double>(n_fine);
    lattice::ChainState st = lattice::build_chain(
        config, lattice::SeedMode{0.0, 0.01, lattice::Branch::Optical});
    const lattice::ChainState initial = st;
    const double e0 = lattice::total_energy(st, config);
    double drift = 0.0;
    for (std::size_t i = 0; i < 100000; ++i) {
        st = lattice::verlet_step(st, config, dt_fine);
        drift = std::max(drift,
                         std::abs(lattice::total_energy(st, config) - e0) / e0);
    }
    check(r, "verlet_energy_drift_1e5_steps", drift, 1e-6);

    st = initial;
    for (std::size_t i = 0; i < n_fine; ++i)
        st = lattice::verlet_step(st, config, dt_fine);
    double return_err = 0.0;
    for (std::size_t j = 0; j < config.n_cells; ++j) {
        return_err = std::max(return_err,
                              std::abs(st.u_plus[j] - initial.u_plus[j]));
        return_err = std::max(return_err,
                              std::abs(st.u_minus[j] - initial.u_minus[j]));
    }
    check(r, "verlet_one_period_return", return_err / 0.005, 1e-6);

    // Momentum conservation with a drifting, excited chain.
    lattice::ChainState moving = initial;
    for (std::size_t j = 0; j < config.n_cells; ++j) {
        moving.v_plus[j] = 0.3;
        moving.v_minus[j] = 0.3;
    }
    const double p0 = lattice::chain_momentum(moving, config);
    double p_drift = 0.0;
    for (std::size_t i = 0; i < 2000; ++i) {
        moving = lattice::verlet_step(moving, config, dt);
        p_drift = std::max(
            p_drift, std::abs(lattice::chain_momentum(moving, config) - p0));
    }
    check(r, "chain_momentum_conservation", p_drift / std::abs(p0), 1e-12);
}

// ------------------------------------------------------------ field modes

fields::ModeSet reference_mode_set(const PhysicalConstants& k) {
    // Fixed eight-mode set spanning directions, frequencies, amplitudes
    // and occupations; volume bookkeeping Omega = 8 * 0.125 = 1.
    struct Row {
        Vec3 dir;
        double mag;
        double ar, ai;
        int n;
    };
    const Row rows[8] = {
        {{1.0, 0.0, 0.0}, 0.7, 0.40, 0.10, 0},
        {{0.0, 1.0, 0.0}, 1.1, -0.20, 0.30, 1},
        {{0.0, 0.0, 1.0}, 0.9, 0.15, -0.25, 2},
        {{1.0, 1.0, 0.0}, 1.4, 0.05, 0.45, 3},
        {{1.0, 0.0, 1.0}, 0.8, -0.35, -0.15, 1},
        {{0.0, 1.0, 1.0}, 1.7, 0.25, 0.05, 0},
        {{1.0, 1.0, 1.0}, 1.2, -0.10, -0.40, 2},
        {{2.0, -1.0, 3.0}, 1.5, 0.30, 0.20, 1},
    };
    std::vector<fields::FieldMode> modes;
    for (const auto& row : rows) {
        const Vec3 q = row.dir.normalized() * row.mag;
        const Vec3 helper =
            std::abs(row.dir.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
        const Vec3 pol = q.cross(helper).normalized();
        modes.emplace_back(q, pol, fields::Complex(row.ar, row.ai), row.n, k);
    }
    return fields::ModeSet(std::move(modes), k, 0.125, 8);
}

void check_field_modes(RunReport& r) {
    const auto k = make_constants(UnitSystem::Natural);
    const auto ms = reference_mode_set(k);

    double w_max = 0.0, q_max = 0.0;
    for (const auto& m : ms.modes) {
        w_max = std::max(w_max, m.omega);
        q_max = std::max(q_max, m.q.norm());
    }
    const Vec3 points[4] = {
        {0.0, 0.0, 0.0}, {0.3, -0.2, 0.5}, {-1.1, 0.7, 0.4}, {2.0, 1.0, -0.5}};
    const double times[3] = {0.0, 0.37, 1.9};

    const double ht = 1e-4 * 2.0 * M_PI / w_max;
    const double hx = 1e-4 * 2.0 * M_PI / q_max;
    double scale_e = 0.0, worst_e = 0.0, worst_h = 0.0, scale_h = 0.0;
    for (const auto& rr : points)
        for (double t : times) {
            const Vec3 e = fields::electric_field(ms, rr, t);
            const Vec3 fd_e = -(fields::vector_potential(ms, rr, t + ht) -
                                fields::vector_potential(ms, rr, t - ht)) /
                              (2.0 * ht);
            worst_e = std::max(worst_e, (fd_e - e).norm());
            scale_e = std::max(scale_e, e.norm());

            Vec3 curl = Vec3::Zero();
            for (int axis = 0; axis < 3; ++axis) {
                Vec3 dr = Vec3::Zero();
                dr(axis) = hx;
                const Vec3 da = (fields::vector_potential(ms, rr + dr, t) -
                                 fields::vector_potential(ms, rr - dr, t)) /
                                (2.0 * hx);
                // accumulate epsilon_{jkl} d_k A_l
                curl(0) += (axis == 1 ? da(2) : 0.0) - (axis == 2 ? da(1) : 0.0);
                curl(1) += (axis == 2 ? da(0) : 0.0) - (axis == 0 ? da(2) : 0.0);
                curl(2) += (axis == 0 ? da(1) : 0.0) - (axis == 1 ? da(0) : 0.0);
            }
            const Vec3 mu_h = k.mu0 * fields::magnetic_field(ms, rr, t);
            worst_h = std::max(worst_h, (curl - mu_h).norm());
            scale_h = std::max(scale_h, mu_h.norm());
        }
    check(r, "field_E_equals_minus_dA_dt", worst_e / scale_e, 1e-6);
    check(r, "field_mu0_H_equals_curl_A", worst_h / scale_h, 1e-6);

    double worst_pref = 0.0;
    for (const auto& m : ms.modes) {
        const double g1 =
            std::sqrt(2.0 * M_PI * k.hbar / (ms.volume * m.omega * k.eps0));
        const double g2 = std::sqrt(2.0 * M_PI * k.hbar * m.omega * k.mu0 /
                                    (ms.volume * m.q.squaredNorm()));
        worst_pref = std::max(worst_pref, rel(g1, g2));
    }
    check(r, "field_g1_g2_prefactor_identity", worst_pref, 1e-12);

    // E = P/eps0 when the mode frequency satisfies the charge relation.
    const SpringParams tie(1.0, 1.0, k.charge_mass, 1.0, 1);
    const double w_tie = charge_frequency(tie, k);
    std::vector<fields::FieldMode> single;
    single.emplace_back(Vec3(0, 0, w_tie / k.c), Vec3(1, 0, 0),
                        fields::Complex(0.4, 0.2), 0, k);
    const fields::ModeSet tied(std::move(single), k, tie.cell_volume, 1);
    double worst_tie = 0.0;
    for (const auto& rr : points)
        for (double t : times) {
            const Vec3 e = fields::electric_field(tied, rr, t);
            const Vec3 p_over_eps =
                fields::polarization_field(tied, rr, t) / k.eps0;
            if (e.norm() > 0.0)
                worst_tie =
                    std::max(worst_tie, (e - p_over_eps).norm() /
                                            std::max(e.norm(), 1e-300));
        }
    check(r, "field_E_equals_P_over_eps0", worst_tie, 1e-9);

    // (n + 1/2) momentum expectation, vacuum and n = 3.
    double worst_mom = 0.0;
    for (int n : {0, 3}) {
        std::vector<fields::FieldMode> one;
        one.emplace_back(Vec3(0, 0, 2.0), Vec3(1, 0, 0),
                         fields::Complex(0, 0), n, k);
        const fields::ModeSet set(std::move(one), k, 0.5, 2);
        const Vec3 got = fields::mode_momentum_expectation(set);
        const double expected = k.hbar * 2.0 * k.c / (set.volume * k.c * k.c) *
                                (static_cast<double>(n) + 0.5);
        worst_mom = std::max(worst_mom, rel(got.z(), expected));
        worst_mom = std::max(worst_mom, std::abs(got.x()) + std::abs(got.y()));
    }
    check(r, "field_mode_momentum_half_quantum", worst_mom, 1e-15);

    const Vec3 triples[4][3] = {
        {{0.3, -0.7, 0.2}, {0.0, 0.6, -0.8}, {1.0, 0.5, 0.5}},
        {{1.2, 0.1, -0.4}, {0.5, 0.5, 0.7}, {-0.3, 0.9, 0.2}},
        {{-0.8, 0.3, 0.9}, {0.2, -0.4, 0.6}, {0.7, 0.7, -0.1}},
        {{0.5, 0.5, 0.5}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}},
    };
    double worst_triple = 0.0;
    for (const auto& t3 : triples) {
        const Vec3 got = fields::triple_product(t3[0], t3[1], t3[2]);
        const Vec3 expected = t3[0].cross(t3[1].cross(t3[2]));
        worst_triple = std::max(worst_triple, (got - expected).norm());
    }
    check(r, "field_triple_product_bac_cab", worst_triple, 1e-12);
}

// --------------------------------------------------------------- emission

emission::LevelSystem two_level_system(double omega_c, double r12,
                                       const PhysicalConstants& k) {
    using CVec3 = emission::CVec3;
    const CVec3 zero = CVec3::Zero();
    CVec3 off = CVec3::Zero();
    off(0) = Complex(r12, 0.0);
    return emission::LevelSystem({0.0, omega_c}, {zero, off, off, zero}, k);
}

void check_emission(RunReport& r) {
    const auto k = make_constants(UnitSystem::Natural);

    const auto sys = two_level_system(1.0, 1.0, k);
    const auto params = emission::emission_constant(sys, 0, 1);
    check(r, "emission_constant_natural", rel(params.A, 2.0 / 3.0), 1e-15);

    const double p12 = emission::transition_probability(1.0, 1.0, k);
    check(r, "emission_p12_equals_2A", std::abs(p12 - 2.0 * params.A), 1e-15);
    const double intensity = emission::emission_intensity(1.0, 1.0, k);
    check(r, "emission_intensity_identity",
          rel(intensity, p12 * k.hbar * 1.0), 1e-15);

    const auto geom = emission::photon_geometry(k.c, params.A, k);
    double geom_err = rel(geom.sigma1, M_PI);
    geom_err = std::max(geom_err,
                        rel(geom.sigma1, M_PI * (geom.dx2 + geom.dy2)));
    const auto geom2 = emission::photon_geometry(2.0 * k.c, params.A, k);
    geom_err = std::max(geom_err, rel(geom2.sigma1, geom.sigma1 / 4.0));
    const double dp2 = k.hbar * k.hbar / (4.0 * geom.dx2);
    geom_err = std::max(geom_err,
                        rel(dp2 * geom.dx2, k.hbar * k.hbar / 4.0));
    check(r, "photon_geometry_identities", geom_err, 1e-15);

    const std::vector<std::vector<Complex>> lambdas = {
        {Complex(0.6, 0.1), Complex(0.5, -0.2)},
        {Complex(0.3, -0.4), Complex(0.7, 0.2)},
        {Complex(1.0, 0.0), Complex(0.0, 0.0)},
    };
    double worst_norm_dot = 0.0;
    for (const auto& lam : lambdas) {
        const auto dot = emission::secular_rhs(sys, lam);
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < lam.size(); ++i)
            acc += std::conj(lam[i]) * dot[i];
        worst_norm_dot = std::max(worst_norm_dot, std::abs(acc.real()));
    }
    check(r, "secular_norm_first_integral", worst_norm_dot / params.A, 1e-15);

    // Resonant derivative reduces to the secular one after removing the
    // per-mode resonance weight.
    const auto sys_res = two_level_system(1.0, 0.1, k);
    const double tau = params.tau;
    const double w_mode = 1.2;
    std::vector<fields::FieldMode> one;
    one.emplace_back(Vec3(0, 0, w_mode / k.c), Vec3(1, 0, 0),
                     fields::Complex(0.3, 0.2), 0, k);
    const fields::ModeSet modeset(std::move(one), k, 1.0, 1);
    const std::vector<Complex> lam = {Complex(0.6, 0.1), Complex(0.5, -0.2)};
    const auto res = emission::resonant_rhs(sys_res, modeset, lam, 0.7, false);
    const auto sec = emission::secular_rhs(sys_res, lam);
    const double detune = w_mode * w_mode - 1.0;
    const double damp = tau * w_mode * w_mode * w_mode;
    const double kappa = w_mode * w_mode * std::norm(fields::Complex(0.3, 0.2)) *
                         2.0 * detune / (detune * detune + damp * damp);
    double worst_prop = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i)
        worst_prop = std::max(worst_prop,
                              std::abs(res[i] - kappa * sec[i]) /
                                  std::max(std::abs(kappa * sec[i]), 1e-300));
    check(r, "resonant_reduces_to_secular", worst_prop, 1e-10);

    // Full pre-secular equations, window-averaged, against the secular flow
    // for a level gap of 100 A.
    const double a_target = 0.01;
    const auto sys_full =
        two_level_system(1.0, std::sqrt(1.5 * a_target), k);
    const double dt = M_PI / 100.0;
    const std::size_t steps = static_cast<std::size_t>(300.0 / dt);
    std::vector<double> p_full, p_sec;
    p_full.reserve(steps + 1);
    p_sec.reserve(steps + 1);
    std::vector<Complex> lf = {Complex(1.0 / std::sqrt(2.0), 0.0),
                               Complex(1.0 / std::sqrt(2.0), 0.0)};
    std::vector<Complex> ls = lf;
    const auto rk4 = [&](std::vector<Complex>& state, double t, auto&& rhs) {
        const auto k1 = rhs(state, t);
        std::vector<Complex> tmp(state.size());
        for (std::size_t i = 0; i < state.size(); ++i)
            tmp[i] = state[i] + 0.5 * dt * k1[i];
        const auto k2 = rhs(tmp, t + 0.5 * dt);
        for (std::size_t i = 0; i < state.size(); ++i)
            tmp[i] = state[i] + 0.5 * dt * k2[i];
        const auto k3 = rhs(tmp, t + 0.5 * dt);
        for (std::size_t i = 0; i < state.size(); ++i)
            tmp[i] = state[i] + dt * k3[i];
        const auto k4 = rhs(tmp, t + dt);
        for (std::size_t i = 0; i < state.size(); ++i)
            state[i] += (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    };
    p_full.push_back(std::norm(lf[0]));
    p_sec.push_back(std::norm(ls[0]));
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = dt * static_cast<double>(i);
        rk4(lf, t, [&](const std::vector<Complex>& s, double tt) {
            return emission::full_rhs(sys_full, s, tt);
        });
        rk4(ls, t, [&](const std::vector<Complex>& s, double) {
            return emission::secular_rhs(sys_full, s);
        });
        p_full.push_back(std::norm(lf[0]));
        p_sec.push_back(std::norm(ls[0]));
    }
    const auto window = static_cast<std::size_t>(
        std::llround(10.0 * 2.0 * M_PI / dt));
    double worst_avg = 0.0;
    for (std::size_t i = window; i + window < p_full.size(); i += 50) {
        double af = 0.0, as = 0.0;
        for (std::size_t j = i - window; j <= i + window; ++j) {
            af += p_full[j];
            as += p_sec[j];
        }
        const auto count = static_cast<double>(2 * window + 1);
        worst_avg = std::max(worst_avg, std::abs(af - as) / count);
    }
    check(r, "full_rhs_window_average_matches_secular", worst_avg, 1e-2);
}

// -------------------------------------------------------------- radiation

void check_radiation(RunReport& r) {
    const auto k = make_constants(UnitSystem::Natural);
    const auto ksi = make_constants(UnitSystem::Si);

    const double sigma = radiation::thomson_cross_section(k);
    check(r, "thomson_natural", rel(sigma, 8.0 * M_PI / 3.0), 1e-15);
    check(r, "thomson_si",
          rel(radiation::thomson_cross_section(ksi), 6.6524587321e-29), 1e-3);

    // Friction work on the Newton response to a sinusoidal field equals
    // -sigma_T (C/4pi) <E^2>.
    const double w_drive = 1.3, e0 = 0.8;
    const double amp = k.e * e0 / (k.m * w_drive * w_drive);
    const double period = 2.0 * M_PI / w_drive;
    const auto traj = radiation::make_sinusoid_trajectory(
        Vec3(amp, 0, 0), w_drive, 0.0, 0.0, period / 64.0, 8 * 64 + 1);
    const double work = radiation::friction_work_average(traj, k);
    const double expected =
        -sigma * (k.c / (4.0 * M_PI)) * (e0 * e0 / 2.0);
    check(r, "friction_work_thomson_identity", rel(work, expected), 1e-4);

    // Numeric jerk stencil against the analytic sinusoid.
    const double w2 = 1.1;
    const double t2 = 2.0 * M_PI / w2;
    auto numeric = radiation::make_sinusoid_trajectory(
        Vec3(0.5, 0.2, -0.1), w2, 0.4, 0.0, 1e-3 * t2, 64);
    const auto analytic_jerk = numeric.jerk(30);
    numeric.source = radiation::TrajectorySource::Numeric;
    const double jerk_scale = 0.55 * w2 * w2 * w2;
    check(r, "friction_jerk_stencil_vs_analytic",
          (numeric.jerk(30) - analytic_jerk).norm() / jerk_scale, 1e-5);

    // Magnetic work vanishes for a deterministic batch of pairs.
    double worst_mag = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = 0.1 * static_cast<double>(i + 1);
        const Vec3 v(std::sin(1.1 * a), std::cos(2.3 * a), std::sin(3.7 * a));
        const Vec3 h(std::cos(0.7 * a), std::sin(1.9 * a), std::cos(2.9 * a));
        const double scale =
            (k.e / k.c) * v.squaredNorm() * h.norm() + 1e-300;
        worst_mag = std::max(
            worst_mag, std::abs(radiation::magnetic_work(v, h, k)) / scale);
    }
    check(r, "magnetic_work_zero", worst_mag, 1e-15);

    // Interaction-Hamiltonian balance on whole periods.
    {
        const double w = 1.0, t_period = 2.0 * M_PI;
        const std::size_t per = 256, periods = 6;
        const auto rtraj = radiation::make_sinusoid_trajectory(
            Vec3(0.7, 0.0, 0.0), w, 0.3, 0.0, t_period / per,
            periods * per + 1);
        radiation::FieldOnGrid field;
        const Vec3 a0(0.2, 0.5, 0.1);
        const double phi_a = 1.1;
        field.a.resize(rtraj.size());
        field.e.resize(rtraj.size());
        for (std::size_t i = 0; i < rtraj.size(); ++i) {
            const double t = rtraj.times[i];
            field.a[i] = a0 * std::cos(w * t + phi_a);
            field.e[i] = a0 * w * std::sin(w * t + phi_a);
        }
        const auto bal = radiation::interaction_equivalence(rtraj, field, k);
        const double scale = std::max({std::abs(bal.lhs), std::abs(bal.rhs), 1e-300});
        check(r, "interaction_equivalence_balance",
              std::abs(bal.lhs - bal.rhs - bal.boundary) / scale, 1e-8);
    }

    // Fermi potential forms.
    {
        const double w = 1.2, t_period = 2.0 * M_PI / w;
        const std::size_t per = 128, periods = 6;
        const auto rtraj = radiation::make_sinusoid_trajectory(
            Vec3(0.5, 0.0, 0.0), w, 0.0, 0.0, t_period / per,
            periods * per + 1);
        // Newton-tied field E = (m/e) r''  ->  V_m2 == V_m4.
        std::vector<Vec3> e_field(rtraj.size()), e_dot(rtraj.size());
        for (std::size_t i = 0; i < rtraj.size(); ++i) {
            e_field[i] = (k.m / k.e) * rtraj.a[i];
            e_dot[i] = (k.m / k.e) * rtraj.jerk(i);
        }
        const auto forms =
            radiation::fermi_potential_forms(rtraj, e_field, e_dot, k);
        double scale = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < forms.v_m4.size(); ++i) {
            scale = std::max(scale, std::abs(forms.v_m4[i]));
            worst = std::max(worst, std::abs(forms.v_m2[i] - forms.v_m4[i]));
        }
        check(r, "fermi_m2_equals_m4_newton_tied", worst / scale, 1e-6);

        // Independent phase-shifted field: averages of V_m2 and the (J.E)
        // form agree by integration by parts.
        const double phi_e = 0.7;
        for (std::size_t i = 0; i < rtraj.size(); ++i) {
            const double t = rtraj.times[i];
            e_field[i] = Vec3(0.9, 0.0, 0.0) * std::cos(w * t + phi_e);
            e_dot[i] = -Vec3(0.9, 0.0, 0.0) * w * std::sin(w * t + phi_e);
        }
        const auto forms2 =
            radiation::fermi_potential_forms(rtraj, e_field, e_dot, k);
        double m2_avg = 0.0, je_avg = 0.0, m2_scale = 0.0;
        const std::size_t count = periods * per;  // whole periods, half-open
        for (std::size_t i = 0; i < count; ++i) {
            m2_avg += forms2.v_m2[i];
            je_avg += forms2.v_je[i];
            m2_scale = std::max(m2_scale, std::abs(forms2.v_m2[i]));
        }
        m2_avg /= static_cast<double>(count);
        je_avg /= static_cast<double>(count);
        check(r, "fermi_m2_average_equals_je_form",
              std::abs(m2_avg - je_avg) / m2_scale, 1e-8);
    }

    // Driven oscillator steady state against the closed form.
    {
        radiation::DriveSpec drive{};
        drive.e_amp = Vec3(1.0, 0.0, 0.0);
        drive.omega_c = 1.0;
        drive.tau = 1e-3;
        drive.m = 1.0;
        drive.e = 1.0;
        double worst = 0.0;
        for (double w : {1.0, 2.0}) {
            drive.omega = w;
            const double t_period = 2.0 * M_PI / w;
            const auto m_steps = static_cast<std::size_t>(
                std::ceil(t_period / (0.01 / std::max(w, drive.omega_c))));
            const double dt = t_period / static_cast<double>(m_steps);
            const auto n_periods = static_cast<std::size_t>(
                std::ceil(20.0 / (drive.tau * drive.omega_c * drive.omega_c) /
                          t_period));
            const double t_end = t_period * static_cast<double>(n_periods);
            const auto traj2 = radiation::driven_trajectory(
                drive, t_end, dt, t_end - 10.0 * t_period);
            const auto rho = radiation::extract_steady_amplitude(traj2, w);
            const std::complex<double> expected =
                (drive.e / drive.m) /
                std::complex<double>(w * w - 1.0, drive.tau * w * w * w);
            const std::complex<double> got = rho(0);
            worst = std::max(worst, rel(std::abs(got), std::abs(expected)));
            double dphase = std::arg(got) - std::arg(expected);
            while (dphase > M_PI) dphase -= 2.0 * M_PI;
            while (dphase < -M_PI) dphase += 2.0 * M_PI;
            worst = std::max(worst, std::abs(dphase));
        }
        check(r, "driven_steady_state_vs_closed_form", worst, 1e-2);
    }

    // Rolloff three orders below peak far above resonance.
    {
        radiation::DriveSpec drive{};
        drive.e_amp = Vec3(1.0, 0.0, 0.0);
        drive.omega_c = 1.0;
        drive.tau = 1e-4;
        drive.m = 1.0;
        drive.e = 1.0;
        const double ratio =
            radiation::steady_amplitude_modulus(drive, 10.0) /
            radiation::steady_amplitude_modulus(drive, 1.0);
        check(r, "resonance_rolloff_three_orders", ratio, 1e-3);
    }
}

}  // namespace

RunReport verify_report(const std::string& output_dir) {
    RunReport report;
    report.command = "verify";

    // Canonical experiments: fixed parameters, CSV outputs plus their own
    // result checks. Everything below is deterministic.
    const char* canonical[] = {
        R"({"command":"dispersion","chi":2.0,"chi_tilde":1.0,"theta":1.0,
            "spacing":1.0,"q_samples":64,"n_cells":16})",
        R"({"command":"emission","A":0.6666666666666666,"t_min":-15.0,
            "t_max":15.0,"dt":0.0015})",
        R"({"command":"resonance","omega_c":1.0,"tau":1e-3,"e_amp":1.0,
            "omega_min":0.5,"omega_max":2.0,"n_points":201})",
        R"({"command":"dielectric","omega_c":1.0,"mass":1.0,"tau":1e-3,
            "n_q":1e-3,"omega_min":0.5,"omega_max":1.5,"n_points":100})",
        R"({"command":"fields","t_count":8,"t_step":0.37,
            "positions":[[0,0,0],[0.1,0.2,0.3],[-0.5,0.4,0.2]]})",
    };
    for (const char* text : canonical) {
        auto cfg = config_from_json(nlohmann::ordered_json::parse(text));
        cfg.output_dir = output_dir;
        detail::dispatch(cfg, report);
        report.inputs[command_name(cfg.command)] = cfg.params;
    }

    check_constants(report);
    check_lattice(report);
    check_field_modes(report);
    check_emission(report);
    check_radiation(report);
    return report;
}

}  // namespace dynlab::run

#include "dynlab/emission.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynlab::emission {

namespace {

double clamped_exp(double x) { return std::exp(std::clamp(x, -400.0, 400.0)); }

double logistic(double x) {
    // 1/(1 + e^{-x}), stable on both tails.
    if (x >= 0.0) return 1.0 / (1.0 + clamped_exp(-x));
    const double ex = clamped_exp(x);
    return ex / (1.0 + ex);
}

}  // namespace

LevelSystem::LevelSystem(std::vector<double> frequencies,
                         std::vector<CVec3> dipole_row_major,
                         const PhysicalConstants& k)
    : freqs_(std::move(frequencies)), dipole_(std::move(dipole_row_major)),
      k_(k) {
    const std::size_t n = freqs_.size();
    if (n < 1) throw std::invalid_argument("LevelSystem: no levels");
    if (dipole_.size() != n * n)
        throw std::invalid_argument("LevelSystem: dipole matrix size mismatch");
    for (std::size_t i = 1; i < n; ++i)
        if (!(freqs_[i] > freqs_[i - 1]))
            throw std::invalid_argument(
                "LevelSystem: frequencies must be strictly increasing");
    for (std::size_t a = 0; a < n; ++a) {
        if (dipole_[a * n + a].imag().norm() > 1e-12)
            throw std::invalid_argument("LevelSystem: diagonal dipole not real");
        for (std::size_t b = a + 1; b < n; ++b) {
            const CVec3 diff = dipole_[a * n + b] - dipole_[b * n + a].conjugate();
            if (diff.norm() > 1e-12 * (1.0 + dipole_[a * n + b].norm()))
                throw std::invalid_argument(
                    "LevelSystem: dipole matrix not conjugate-symmetric");
        }
    }
}

const CVec3& LevelSystem::dipole(std::size_t n, std::size_t s) const {
    return dipole_[n * freqs_.size() + s];
}

double LevelSystem::dipole_sq(std::size_t n, std::size_t s) const {
    return dipole(n, s).squaredNorm();
}

EmissionParams emission_constant(const LevelSystem& sys, std::size_t n,
                                 std::size_t s) {
    if (n == s)
        throw std::invalid_argument("emission_constant: levels must differ");
    if (s < n) std::swap(n, s);
    const auto& k = sys.constants();
    const double e2 = coulomb_e2(k);
    const double omega_c = sys.frequency(s) - sys.frequency(n);
    const double r12_sq = sys.dipole_sq(n, s);
    EmissionParams p{};
    p.omega_c = omega_c;
    p.r12 = std::sqrt(r12_sq);
    p.A = (2.0 / 3.0) * e2 / (k.hbar * k.c * k.c * k.c) * omega_c * omega_c *
          omega_c * r12_sq;
    p.tau = (2.0 / 3.0) * e2 / (k.m * k.c * k.c * k.c);
    return p;
}

double transition_probability(double omega12, double r12,
                              const PhysicalConstants& k) {
    if (omega12 <= 0.0)
        throw std::invalid_argument("transition_probability: omega12 <= 0");
    return (4.0 / 3.0) * coulomb_e2(k) / (k.hbar * k.c * k.c * k.c) *
           omega12 * omega12 * omega12 * r12 * r12;
}

double emission_intensity(double omega12, double r12,
                          const PhysicalConstants& k) {
    return transition_probability(omega12, r12, k) * k.hbar * omega12;
}

PhotonGeometry photon_geometry(double omega, double A,
                               const PhysicalConstants& k) {
    if (omega <= 0.0 || A <= 0.0)
        throw std::invalid_argument("photon_geometry: omega and A must be positive");
    PhotonGeometry g{};
    const double ratio = k.c / omega;
    g.dx2 = 0.5 * ratio * ratio;
    g.dy2 = g.dx2;
    g.sigma1 = M_PI * (g.dx2 + g.dy2);
    g.length = k.c / A;
    return g;
}

std::vector<Complex> secular_rhs(const LevelSystem& sys,
                                 const std::vector<Complex>& lambda) {
    const std::size_t n_levels = sys.size();
    if (lambda.size() != n_levels)
        throw std::invalid_argument("secular_rhs: lambda size mismatch");
    const auto& k = sys.constants();
    const double coeff =
        -(2.0 / 3.0) * coulomb_e2(k) / (k.hbar * k.c * k.c * k.c);
    std::vector<Complex> out(n_levels, Complex(0.0, 0.0));
    for (std::size_t n = 0; n < n_levels; ++n) {
        double weight = 0.0;
        for (std::size_t s = 0; s < n_levels; ++s) {
            if (s == n) continue;
            const double gap = sys.frequency(n) - sys.frequency(s);
            weight += std::norm(lambda[s]) * gap * gap * gap *
                      sys.dipole_sq(n, s);
        }
        out[n] = coeff * weight * lambda[n];
    }
    return out;
}

std::vector<Complex> full_rhs(const LevelSystem& sys,
                              const std::vector<Complex>& lambda, double t) {
    const std::size_t n_levels = sys.size();
    if (lambda.size() != n_levels)
        throw std::invalid_argument("full_rhs: lambda size mismatch");
    const auto& k = sys.constants();
    const double coeff =
        -(2.0 / 3.0) * coulomb_e2(k) / (k.hbar * k.c * k.c * k.c);
    std::vector<Complex> out(n_levels, Complex(0.0, 0.0));
    for (std::size_t n = 0; n < n_levels; ++n) {
        Complex acc(0.0, 0.0);
        for (std::size_t l = 0; l < n_levels; ++l)
            for (std::size_t kk = 0; kk < n_levels; ++kk)
                for (std::size_t s = 0; s < n_levels; ++s) {
                    const double gap = sys.frequency(l) - sys.frequency(kk);
                    if (gap == 0.0) continue;
                    // Plain component sum <l|r_j|k><s|r_j|n>, no conjugation.
                    const Complex plain =
                        (sys.dipole(l, kk).transpose() * sys.dipole(s, n))(0);
                    const double phase = (sys.frequency(kk) - sys.frequency(l) +
                                          sys.frequency(n) - sys.frequency(s)) * t;
                    acc += lambda[l] * std::conj(lambda[kk]) * lambda[s] *
                           gap * gap * gap * plain * std::polar(1.0, phase);
                }
        out[n] = coeff * acc;
    }
    return out;
}

std::vector<TwoLevelState> integrate_populations(const EmissionParams& params,
                                                 const TwoLevelState& lambda0,
                                                 double t_end, double dt) {
    if (params.A <= 0.0)
        throw std::invalid_argument("integrate_populations: A must be positive");
    if (dt <= 0.0 || dt > 1e-3 / params.A)
        throw std::invalid_argument(
            "integrate_populations: dt must satisfy 0 < dt <= 1e-3/A");
    if (lambda0.lambda.size() != 2)
        throw std::invalid_argument("integrate_populations: need two levels");
    double norm0 = 0.0;
    for (const auto& l : lambda0.lambda) norm0 += std::norm(l);
    if (std::abs(norm0 - 1.0) > 1e-9)
        throw std::invalid_argument("integrate_populations: lambda0 not normalized");

    const double a = params.A;
    const auto rhs = [a](const Complex l1, const Complex l2, Complex& d1,
                         Complex& d2) {
        d1 = a * l1 * std::norm(l2);
        d2 = -a * l2 * std::norm(l1);
    };

    const double h = (t_end >= 0.0) ? dt : -dt;
    const auto n_steps =
        static_cast<std::size_t>(std::llround(std::abs(t_end) / dt));

    std::vector<TwoLevelState> traj;
    traj.reserve(n_steps + 1);
    TwoLevelState s = lambda0;
    s.time = 0.0;
    traj.push_back(s);
    for (std::size_t i = 0; i < n_steps; ++i) {
        Complex l1 = s.lambda[0], l2 = s.lambda[1];
        Complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        rhs(l1, l2, k1a, k1b);
        rhs(l1 + 0.5 * h * k1a, l2 + 0.5 * h * k1b, k2a, k2b);
        rhs(l1 + 0.5 * h * k2a, l2 + 0.5 * h * k2b, k3a, k3b);
        rhs(l1 + h * k3a, l2 + h * k3b, k4a, k4b);
        s.lambda[0] = l1 + (h / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a);
        s.lambda[1] = l2 + (h / 6.0) * (k1b + 2.0 * (k2b + k3b) + k4b);
        s.time += h;
        traj.push_back(s);
    }
    return traj;
}

std::pair<double, double> analytic_populations(double t, double A) {
    return {logistic(2.0 * A * t), logistic(-2.0 * A * t)};
}

double hybrid_envelope(double t, double A) {
    // 1/(2 cosh x) = e^{-|x|} / (1 + e^{-2|x|})
    const double x = std::abs(A * t);
    const double ex = clamped_exp(-x);
    return ex / (1.0 + ex * ex);
}

CVec3 steady_state_radius(double omega, const EmissionParams& params,
                          const Vec3& e_amp, const PhysicalConstants& k) {
    if (omega <= 0.0)
        throw std::invalid_argument("steady_state_radius: omega must be positive");
    const Complex denom(omega * omega - params.omega_c * params.omega_c,
                        params.tau * omega * omega * omega);
    return (k.e / k.m) * e_amp.cast<Complex>() / denom;
}

std::vector<Complex> resonant_rhs(const LevelSystem& sys,
                                  const fields::ModeSet& modeset,
                                  const std::vector<Complex>& lambda, double t,
                                  bool include_counter_rotating) {
    const std::size_t n_levels = sys.size();
    if (lambda.size() != n_levels)
        throw std::invalid_argument("resonant_rhs: lambda size mismatch");
    const auto& k = sys.constants();
    const double coeff =
        -(2.0 / 3.0) * coulomb_e2(k) / (k.hbar * k.c * k.c * k.c);
    const double tau = (2.0 / 3.0) * coulomb_e2(k) / (k.m * k.c * k.c * k.c);

    std::vector<Complex> out(n_levels, Complex(0.0, 0.0));
    for (std::size_t n = 0; n < n_levels; ++n) {
        Complex acc(0.0, 0.0);
        for (std::size_t s = 0; s < n_levels; ++s) {
            if (s == n) continue;
            const double gap = sys.frequency(n) - sys.frequency(s);
            for (const auto& mode : modeset.modes) {
                const Eigen::Vector3cd pol = mode.polarization.cast<Complex>();
                const Complex proj_ns =
                    (sys.dipole(n, s).transpose() * pol)(0);
                const Complex proj_sn =
                    (sys.dipole(s, n).transpose() * pol)(0);
                const double w = mode.omega;
                const double detune = w * w - gap * gap;
                const Complex d_plus(detune, tau * w * w * w);
                const Complex d_minus(detune, -tau * w * w * w);
                Complex weight = std::norm(mode.alpha) *
                                 (1.0 / d_minus + 1.0 / d_plus);
                if (include_counter_rotating) {
                    const Complex a2 = mode.alpha * mode.alpha;
                    weight += std::conj(a2) * std::polar(1.0, 2.0 * w * t) /
                                  d_minus +
                              a2 * std::polar(1.0, -2.0 * w * t) / d_plus;
                }
                acc += std::norm(lambda[s]) * gap * gap * gap * proj_ns *
                       proj_sn * (w * w) * weight;
            }
        }
        out[n] = coeff * acc * lambda[n];
    }
    return out;
}

CVec3 dipole_expectation(const LevelSystem& sys,
                         const fields::ModeSet& modeset,
                         const std::vector<Complex>& lambda, double t) {
    const std::size_t n_levels = sys.size();
    if (lambda.size() != n_levels)
        throw std::invalid_argument("dipole_expectation: lambda size mismatch");
    double norm = 0.0;
    for (const auto& l : lambda) norm += std::norm(l);
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("dipole_expectation: lambda not normalized");

    const auto& k = sys.constants();
    const double tau = (2.0 / 3.0) * coulomb_e2(k) / (k.m * k.c * k.c * k.c);
    CVec3 d = CVec3::Zero();
    for (const auto& mode : modeset.modes) {
        const double w = mode.omega;
        const double pref = (k.e * k.e / k.m) *
                            std::sqrt(2.0 * M_PI * k.hbar * w /
                                      (modeset.volume * k.eps0));
        const Complex up = std::conj(mode.alpha) * std::polar(1.0, w * t);
        const Complex down = mode.alpha * std::polar(1.0, -w * t);
        for (std::size_t p = 0; p < n_levels; ++p)
            for (std::size_t l = 0; l < n_levels; ++l) {
                const double gap = sys.frequency(p) - sys.frequency(l);
                const Complex pop = std::conj(lambda[p]) * lambda[l] *
                                    std::polar(1.0, gap * t);
                const Complex proj =
                    (sys.dipole(p, l).transpose() *
                     mode.polarization.cast<Complex>())(0);
                const double detune = w * w - gap * gap;
                const Complex d_plus(detune, tau * w * w * w);
                const Complex d_minus(detune, -tau * w * w * w);
                const Complex bracket = up / d_plus + down / d_minus;
                d += pref * pop * proj * bracket *
                     mode.polarization.cast<Complex>();
            }
    }
    return d;
}

double hydrogen_1s2p_dipole() {
    // <1s|z|2p_z> = (1/sqrt3) int_0^inf R_10 R_21 r^3 dr in Bohr units,
    // R_10 = 2 e^{-r}, R_21 = r e^{-r/2} / (2 sqrt6). Composite Simpson.
    const double r_max = 60.0;
    const std::size_t n = 60000;  // even
    const double h = r_max / static_cast<double>(n);
    auto integrand = [](double r) {
        const double r10 = 2.0 * std::exp(-r);
        const double r21 = r * std::exp(-0.5 * r) / (2.0 * std::sqrt(6.0));
        return r10 * r21 * r * r * r;
    };
    double acc = integrand(0.0) + integrand(r_max);
    for (std::size_t i = 1; i < n; ++i) {
        const double r = h * static_cast<double>(i);
        acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(r);
    }
    const double radial = acc * h / 3.0;
    return radial / std::sqrt(3.0);
}

}  // namespace dynlab::emission

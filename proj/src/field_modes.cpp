#include "dynlab/field_modes.hpp"

#include <cmath>
#include <stdexcept>

namespace dynlab::fields {

namespace {

// 2 Re(conj(alpha) e^{i phi}) for phi = omega t - q.r
double cos_bracket(const FieldMode& m, const Vec3& r, double t) {
    const double phi = m.omega * t - m.q.dot(r);
    return 2.0 * (std::conj(m.alpha) * std::polar(1.0, phi)).real();
}

// Im(conj(alpha) e^{i phi}); the i{a+ e - a e} bracket contributes
// -2 Im(conj(alpha) e^{i phi}) to a real field.
double sin_bracket(const FieldMode& m, const Vec3& r, double t) {
    const double phi = m.omega * t - m.q.dot(r);
    return (std::conj(m.alpha) * std::polar(1.0, phi)).imag();
}

}  // namespace

FieldMode::FieldMode(const Vec3& q_, const Vec3& pol, Complex alpha_, int n,
                     const PhysicalConstants& k)
    : q(q_), polarization(pol), omega(k.c * q_.norm()), alpha(alpha_),
      occupation(n) {
    if (q_.norm() <= 0.0)
        throw std::invalid_argument("FieldMode: zero wavevector");
    if (std::abs(pol.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("FieldMode: polarization must be unit length");
    if (std::abs(pol.dot(q_)) > 1e-9 * q_.norm())
        throw std::invalid_argument("FieldMode: polarization must be transverse");
    if (n < 0)
        throw std::invalid_argument("FieldMode: negative occupation");
}

ModeSet::ModeSet(std::vector<FieldMode> modes_, const PhysicalConstants& k,
                 double cell_volume_, std::size_t n_cells_)
    : modes(std::move(modes_)), constants(k), cell_volume(cell_volume_),
      n_cells(n_cells_) {
    if (cell_volume_ <= 0.0 || n_cells_ == 0)
        throw std::invalid_argument("ModeSet: invalid volume bookkeeping");
    volume = cell_volume_ * static_cast<double>(n_cells_);
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j)
            if ((modes[i].q - modes[j].q).norm() <=
                1e-12 * (modes[i].q.norm() + modes[j].q.norm()))
                throw std::invalid_argument("ModeSet: duplicate wavevector");
}

Vec3 displacement_field(const ModeSet& ms, const Vec3& r, double t) {
    const auto& k = ms.constants;
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(ms.n_cells));
    Vec3 u = Vec3::Zero();
    for (const auto& m : ms.modes) {
        const double pref =
            inv_sqrt_n * std::sqrt(k.hbar / (2.0 * k.charge_mass * m.omega));
        u += pref * cos_bracket(m, r, t) * m.polarization;
    }
    return u;
}

Vec3 polarization_field(const ModeSet& ms, const Vec3& r, double t) {
    // Same summation as the displacement, scaled by the pair charge density.
    return (2.0 * ms.constants.e / ms.cell_volume) *
           displacement_field(ms, r, t);
}

Vec3 electric_field(const ModeSet& ms, const Vec3& r, double t) {
    const auto& k = ms.constants;
    Vec3 e = Vec3::Zero();
    for (const auto& m : ms.modes) {
        const double pref =
            std::sqrt(2.0 * M_PI * k.hbar * m.omega / (ms.volume * k.eps0));
        e += pref * cos_bracket(m, r, t) * m.polarization;
    }
    return e;
}

Vec3 vector_potential(const ModeSet& ms, const Vec3& r, double t) {
    const auto& k = ms.constants;
    Vec3 a = Vec3::Zero();
    for (const auto& m : ms.modes) {
        const double pref =
            std::sqrt(2.0 * M_PI * k.hbar / (ms.volume * m.omega * k.eps0));
        a += pref * (-2.0 * sin_bracket(m, r, t)) * m.polarization;
    }
    return a;
}

Vec3 magnetic_field(const ModeSet& ms, const Vec3& r, double t) {
    const auto& k = ms.constants;
    Vec3 h = Vec3::Zero();
    for (const auto& m : ms.modes) {
        const double pref =
            std::sqrt(2.0 * M_PI * k.hbar * m.omega / (ms.volume * k.mu0));
        const Vec3 n_hat = m.q.normalized();
        h += pref * cos_bracket(m, r, t) * n_hat.cross(m.polarization);
    }
    return h;
}

Vec3 triple_product(const Vec3& v, const Vec3& n, const Vec3& I) {
    return n * v.dot(I) - I * v.dot(n);
}

Vec3 lorentz_force_density(const ModeSet& ms, const Vec3& charge_velocity,
                           const Vec3& r, double t) {
    const auto& k = ms.constants;
    return (k.e / k.c) * charge_velocity.cross(magnetic_field(ms, r, t));
}

Vec3 poynting_momentum_density(const ModeSet& ms, const Vec3& r, double t) {
    const auto& k = ms.constants;
    return electric_field(ms, r, t).cross(magnetic_field(ms, r, t)) /
           (4.0 * M_PI * k.c * k.c);
}

Vec3 mode_momentum_expectation(const ModeSet& ms) {
    const auto& k = ms.constants;
    Vec3 p = Vec3::Zero();
    for (const auto& m : ms.modes) {
        const double scale = k.hbar * m.omega / (ms.volume * k.c);
        p += scale * (static_cast<double>(m.occupation) + 0.5) *
             m.q.normalized();
    }
    return p;
}

double phase_velocity(double eps_rel, double mu_rel,
                      const PhysicalConstants& k) {
    if (eps_rel <= 0.0 || mu_rel <= 0.0)
        throw std::invalid_argument("phase_velocity: eps and mu must be positive");
    return k.c / std::sqrt(eps_rel * mu_rel);
}

FieldSnapshot evaluate_snapshot(const ModeSet& ms, const Vec3& r, double t) {
    FieldSnapshot snap;
    snap.u = displacement_field(ms, r, t);
    snap.P = polarization_field(ms, r, t);
    snap.E = electric_field(ms, r, t);
    snap.A = vector_potential(ms, r, t);
    snap.H = magnetic_field(ms, r, t);
    snap.S = poynting_momentum_density(ms, r, t);
    return snap;
}

}  // namespace dynlab::fields

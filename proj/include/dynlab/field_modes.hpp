#ifndef DYNLAB_FIELD_MODES_HPP
#define DYNLAB_FIELD_MODES_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <vector>

#include "dynlab/constants.hpp"

namespace dynlab::fields {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Complex = std::complex<double>;

/// One plane-wave mode: wavevector, transverse unit polarization, frequency
/// omega = C|q|, coherent amplitude alpha (classical stand-in for the
/// lowering operator) and an integer occupation for expectation values.
struct FieldMode {
    Vec3 q;
    Vec3 polarization;
    double omega;
    Complex alpha;
    int occupation;

    FieldMode(const Vec3& q, const Vec3& pol, Complex alpha, int n,
              const PhysicalConstants& k);
};

/// Mode list plus the lattice bookkeeping (Omega = N * Omega_0) entering
/// the prefactors. Immutable value; evaluators are pure.
struct ModeSet {
    std::vector<FieldMode> modes;
    PhysicalConstants constants;
    double volume;       // Omega
    double cell_volume;  // Omega_0
    std::size_t n_cells; // N

    ModeSet(std::vector<FieldMode> modes, const PhysicalConstants& k,
            double cell_volume, std::size_t n_cells);
};

/// All field vectors at one (r, t).
struct FieldSnapshot {
    Vec3 u, P, E, A, H, S;
};

// Operator brackets in the coherent representation:
//   {a+ e^{i phi} + a e^{-i phi}} -> 2 Re(conj(alpha) e^{i phi})
//   {a+ e^{i phi} - a e^{-i phi}} -> 2i Im(conj(alpha) e^{i phi})
// with phi = omega t - q.r.

Vec3 displacement_field(const ModeSet& ms, const Vec3& r, double t);
Vec3 polarization_field(const ModeSet& ms, const Vec3& r, double t);
Vec3 electric_field(const ModeSet& ms, const Vec3& r, double t);
Vec3 vector_potential(const ModeSet& ms, const Vec3& r, double t);
Vec3 magnetic_field(const ModeSet& ms, const Vec3& r, double t);

/// n (v.I) - I (v.n), the expansion of v x (n x I).
Vec3 triple_product(const Vec3& v, const Vec3& n, const Vec3& I);

/// (e/C) v x H with H evaluated from the mode set.
Vec3 lorentz_force_density(const ModeSet& ms, const Vec3& charge_velocity,
                           const Vec3& r, double t);

/// [E x H] / (4 pi C^2) evaluated pointwise.
Vec3 poynting_momentum_density(const ModeSet& ms, const Vec3& r, double t);

/// Number-state expectation sum_q n_hat (hbar omega / (Omega C)) (n + 1/2);
/// the oscillating a+a+ / aa terms vanish in number states.
Vec3 mode_momentum_expectation(const ModeSet& ms);

/// v = C / sqrt(eps_r * mu_r).
double phase_velocity(double eps_rel, double mu_rel,
                      const PhysicalConstants& k);

FieldSnapshot evaluate_snapshot(const ModeSet& ms, const Vec3& r, double t);

}  // namespace dynlab::fields

#endif

#ifndef DYNLAB_EMISSION_HPP
#define DYNLAB_EMISSION_HPP

#include <complex>
#include <utility>
#include <vector>

#include "dynlab/constants.hpp"
#include "dynlab/field_modes.hpp"

namespace dynlab::emission {

using Complex = std::complex<double>;
using CVec3 = Eigen::Vector3cd;
using Vec3 = Eigen::Vector3d;

/// Bound-electron level ladder: strictly increasing frequencies plus the
/// conjugate-symmetric matrix of position matrix elements r_ns (complex
/// 3-vectors, diagonal purely real).
class LevelSystem {
  public:
    LevelSystem(std::vector<double> frequencies,
                std::vector<CVec3> dipole_row_major,
                const PhysicalConstants& k);

    std::size_t size() const { return freqs_.size(); }
    double frequency(std::size_t n) const { return freqs_[n]; }
    const CVec3& dipole(std::size_t n, std::size_t s) const;
    /// <n|r_j|s><s|r_j|n> summed over components; real and nonnegative.
    double dipole_sq(std::size_t n, std::size_t s) const;
    const PhysicalConstants& constants() const { return k_; }

  private:
    std::vector<double> freqs_;
    std::vector<CVec3> dipole_;
    PhysicalConstants k_;
};

/// Expansion coefficients of the hybrid state at one instant.
struct TwoLevelState {
    std::vector<Complex> lambda;
    double time = 0.0;
};

/// Emission rate constant and the friction bookkeeping derived from a
/// level pair: A = (2/3)(e^2/(hbar C^3)) omega_c^3 |r12|^2 and the
/// friction time tau = (2/3) e^2/(m C^3).
struct EmissionParams {
    double A;
    double omega_c;
    double tau;
    double r12;
};

/// Needle-photon cross section and length: sigma_1 = pi (C/omega)^2 with
/// equal transverse dispersions (C/omega)^2/2, length C/A.
struct PhotonGeometry {
    double sigma1;
    double dx2;
    double dy2;
    double length;
};

EmissionParams emission_constant(const LevelSystem& sys, std::size_t n,
                                 std::size_t s);

/// P12 = (4/3)(e^2/(hbar C^3)) omega12^3 |r12|^2, per second.
double transition_probability(double omega12, double r12,
                              const PhysicalConstants& k);

/// I = P12 * hbar * omega12.
double emission_intensity(double omega12, double r12,
                          const PhysicalConstants& k);

PhotonGeometry photon_geometry(double omega, double A,
                               const PhysicalConstants& k);

/// Secular coefficient derivatives
/// ldot_n = -(2/3)(e^2/(hbar C^3)) sum_s l_n |l_s|^2 (w_n - w_s)^3 |r_ns|^2.
std::vector<Complex> secular_rhs(const LevelSystem& sys,
                                 const std::vector<Complex>& lambda);

/// Pre-secular form: full triple sum with oscillating phase factors
/// exp(i (w_k - w_l + w_n - w_s) t).
std::vector<Complex> full_rhs(const LevelSystem& sys,
                              const std::vector<Complex>& lambda, double t);

/// Fixed-step classical RK4 on ldot_1 = A l1 |l2|^2, ldot_2 = -A l2 |l1|^2
/// from lambda0 at t = 0 to t_end (either sign). Step magnitude must obey
/// dt <= 1e-3/A; lambda0 must be normalized within 1e-9.
std::vector<TwoLevelState> integrate_populations(const EmissionParams& params,
                                                 const TwoLevelState& lambda0,
                                                 double t_end, double dt);

/// Closed-form populations (|l1|^2, |l2|^2) = (logistic(2At), logistic(-2At)),
/// evaluated in the overflow-safe form with exponents clamped at +-400.
std::pair<double, double> analytic_populations(double t, double A);

/// |l1* l2| = 1 / (2 cosh(A t)), overflow-safe.
double hybrid_envelope(double t, double A);

/// Steady-state driven amplitude r(omega) = (e/m) E / (w^2 - w_c^2 + i tau w^3)
/// per polarization component.
CVec3 steady_state_radius(double omega, const EmissionParams& params,
                          const Vec3& e_amp, const PhysicalConstants& k);

/// Secular derivatives with per-mode resonance weights
///   w_q^2 [ |a|^2 (1/D- + 1/D+) + (CR) (a*^2 e^{2iwt}/D- + a^2 e^{-2iwt}/D+) ],
/// D+- = w_q^2 - (w_n - w_s)^2 +- i tau w_q^3, dipoles projected on the mode
/// polarization. With counter-rotating terms off the weight is real and the
/// derivative is proportional to the secular one.
std::vector<Complex> resonant_rhs(const LevelSystem& sys,
                                  const fields::ModeSet& modeset,
                                  const std::vector<Complex>& lambda, double t,
                                  bool include_counter_rotating);

/// Driven electric-dipole matrix element in the coherent representation,
/// resonance denominators per level pair, dipole approximation for the
/// exp(+-i q.r) factors.
CVec3 dipole_expectation(const LevelSystem& sys,
                         const fields::ModeSet& modeset,
                         const std::vector<Complex>& lambda, double t);

/// Reference dipole input: hydrogen <1s|z|2p_z> in Bohr radii by numerical
/// radial quadrature (exact value 128 sqrt(2) / 243).
double hydrogen_1s2p_dipole();

}  // namespace dynlab::emission

#endif

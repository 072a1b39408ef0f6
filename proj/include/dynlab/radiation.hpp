#ifndef DYNLAB_RADIATION_HPP
#define DYNLAB_RADIATION_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <vector>

#include "dynlab/constants.hpp"

namespace dynlab::radiation {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

enum class TrajectorySource { AnalyticSinusoid, Numeric };

/// Uniformly sampled r(t), v(t), a(t). Sinusoid sources keep their
/// parameters so third derivatives are analytic; numeric sources fall back
/// to 5-point finite-difference stencils on the acceleration samples.
struct OscillatorTrajectory {
    std::vector<double> times;
    std::vector<Vec3> r, v, a;
    TrajectorySource source = TrajectorySource::Numeric;
    // sinusoid parameters (valid when source == AnalyticSinusoid)
    Vec3 amplitude = Vec3::Zero();
    double omega = 0.0;
    double phase = 0.0;

    double dt() const;
    std::size_t size() const { return times.size(); }
    /// Third derivative of r at sample i (analytic or stencil; stencil uses
    /// one-sided forms within two samples of either end).
    Vec3 jerk(std::size_t i) const;
};

/// r(t) = amp cos(omega t + phase) sampled n times from t_start.
OscillatorTrajectory make_sinusoid_trajectory(const Vec3& amplitude,
                                              double omega, double phase,
                                              double t_start, double dt,
                                              std::size_t n_samples);

/// Lorentz friction force (2/3)(e^2/C^3) r''' at a sample; central stencil
/// indices require 2 <= at <= size-3 for numeric sources.
Vec3 friction_force(const OscillatorTrajectory& traj,
                    const PhysicalConstants& k, std::size_t at);

/// Time average of v . F_fr over the largest whole number of periods
/// (sinusoid sources; numeric sources average the full span). Equals
/// -(2/3)(e^2/C^3) <a.a> because the total-derivative term averages out.
double friction_work_average(const OscillatorTrajectory& traj,
                             const PhysicalConstants& k);

/// sigma_T = (8 pi / 3) (e^2 / (m C^2))^2 with the Coulomb-normalized e^2.
double thomson_cross_section(const PhysicalConstants& k);

/// (e/C) v . (v x H); identically zero up to roundoff.
double magnetic_work(const Vec3& v, const Vec3& h, const PhysicalConstants& k);

/// E(t) and A(t) sampled on the trajectory grid with E = -dA/dt.
struct FieldOnGrid {
    std::vector<Vec3> e;
    std::vector<Vec3> a;
};

struct InteractionBalance {
    double lhs;       // -e int v.A dt
    double rhs;       // -e int r.E dt
    double boundary;  // -e [r.A] between the endpoints
};

/// Integration-by-parts identity lhs = rhs + boundary of the interaction
/// Hamiltonian; trapezoid quadrature, whole-period grids give the tightest
/// balance.
InteractionBalance interaction_equivalence(const OscillatorTrajectory& traj,
                                           const FieldOnGrid& field,
                                           const PhysicalConstants& k);

struct FermiPotentialSeries {
    std::vector<double> v_m2;   // -(2 e^2 / (3 m C^3)) (r . E')
    std::vector<double> v_je;   // +(2 e^2 / (3 m C^3)) (v . E), tau (J.E) form
    std::vector<double> v_m4;   // -(2/3)(e^2 / C^3) (r . r''')
};

/// The three equivalent friction-potential presentations on the grid.
FermiPotentialSeries fermi_potential_forms(const OscillatorTrajectory& traj,
                                           const std::vector<Vec3>& e_field,
                                           const std::vector<Vec3>& e_dot,
                                           const PhysicalConstants& k);

/// Driven oscillator with radiation friction,
/// m r'' - m tau r''' + m omega_c^2 r = -e E_amp cos(omega t).
struct DriveSpec {
    Vec3 e_amp;
    double omega;
    double omega_c;
    double tau;
    double m;
    double e;
};

/// RK4 integration from rest with the friction term order-reduced via
/// r''' ~ d/dt(-omega_c^2 r - (e/m) E), which removes runaway solutions.
/// Requires dt * omega < 0.05 and tau * omega_c < 0.1. Samples with
/// t >= record_from are kept.
OscillatorTrajectory driven_trajectory(const DriveSpec& drive, double t_end,
                                       double dt, double record_from = 0.0);

/// Complex amplitude rho with r(t) ~ Re(rho e^{-i omega t}) recovered by
/// projecting the trailing whole drive periods; dt must divide the period.
CVec3 extract_steady_amplitude(const OscillatorTrajectory& traj, double omega);

/// Closed-form steady-state amplitude modulus
/// (e/m)|E| / sqrt((w^2-w_c^2)^2 + tau^2 w^6).
double steady_amplitude_modulus(const DriveSpec& drive, double omega);

struct DielectricTerm {
    double n_q;
    double omega_q;
};

struct DielectricSpec {
    std::vector<DielectricTerm> terms;
    double omega_c;
    double mass;
    double tau;
};

/// eps = 1 + sum_q 4 pi n_q (w_q - w_c) / (m [4 (w_q - w_c)^2 + tau^2 w_q^4]).
double dielectric_epsilon(const DielectricSpec& spec);

struct ScanRow {
    double omega;
    double amplitude;
};

/// Closed-form steady amplitude over an ascending frequency grid.
std::vector<ScanRow> resonance_scan(const DriveSpec& drive,
                                    const std::vector<double>& omega_grid);

/// Full width of the closed-form lineshape at half power, by bisection
/// around the peak; approaches tau * omega_c^2 for small tau * omega_c.
double resonance_half_power_width(const DriveSpec& drive);

}  // namespace dynlab::radiation

#endif

#ifndef DYNLAB_CONSTANTS_HPP
#define DYNLAB_CONSTANTS_HPP

#include <cstddef>

namespace dynlab {

/// Unit system selector. Natural units fix hbar = C = e = m = 1 and
/// eps0 = 1/(4*pi), so Coulomb-style and rationalized prefactors coincide.
/// SI uses CODATA 2018 values.
enum class UnitSystem { Natural, Si };

/// Physical constants in the active unit system. Immutable after
/// construction; every dimensional quantity in the library flows through
/// one of these.
struct PhysicalConstants {
    double e;            // elementary charge
    double m;            // electron mass
    double charge_mass;  // inertial mass of each lattice point charge (Theta)
    double hbar;         // reduced Planck constant
    double c;            // light speed
    double eps0;         // vacuum permittivity
    double mu0;          // vacuum permeability
};

PhysicalConstants make_constants(UnitSystem system);

/// Gaussian-equivalent squared charge e^2/(4 pi eps0). Friction, emission
/// and cross-section formulas are written with this combination: in natural
/// units it reduces to the bare e^2, in SI it carries the Coulomb prefactor.
double coulomb_e2(const PhysicalConstants& k);

/// Spring bookkeeping for a chain of paired point charges: intra-pair
/// spring (chi_tilde), inter-cell spring (chi), per-charge mass (Theta),
/// cell volume and cell count with total_volume = n_cells * cell_volume.
struct SpringParams {
    double inter_spring;   // chi
    double intra_spring;   // chi_tilde
    double charge_mass;    // Theta
    double cell_volume;    // Omega_0
    std::size_t n_cells;   // N
    double total_volume;   // Omega = N * Omega_0

    SpringParams(double chi, double chi_tilde, double theta,
                 double omega0, std::size_t n);
};

/// Internal (intra-pair) mode frequency sqrt(2*chi_tilde/Theta): two equal
/// masses on one spring, reduced mass Theta/2.
double internal_mode_frequency(const SpringParams& p);

/// Collective mode frequency sqrt(2*chi/Theta): a rigid pair of mass
/// 2*Theta against an effective inter-cell stiffness 4*chi.
double collective_mode_frequency(const SpringParams& p);

/// Frequency fixed by the charge of the pair and the cell volume,
/// Theta*omega^2 = (2e)^2/(4 pi Omega_0 eps0). Homogeneous of degree one
/// in e. Dimensionally meaningful in natural units only; SI evaluation is
/// consistency-unchecked.
double charge_frequency(const SpringParams& p, const PhysicalConstants& k);

}  // namespace dynlab

#endif

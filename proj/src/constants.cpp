#include "dynlab/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace dynlab {

PhysicalConstants make_constants(UnitSystem system) {
    PhysicalConstants k{};
    switch (system) {
        case UnitSystem::Natural:
            k.e = 1.0;
            k.m = 1.0;
            k.charge_mass = 1.0;
            k.hbar = 1.0;
            k.c = 1.0;
            k.eps0 = 1.0 / (4.0 * M_PI);
            k.mu0 = 4.0 * M_PI;
            return k;
        case UnitSystem::Si:
            // CODATA 2018. eps0 is derived as 1/(mu0 c^2) so that
            // c*sqrt(eps0*mu0) = 1 holds to machine precision; the derived
            // value agrees with the published 8.8541878128e-12 F/m to all
            // listed digits.
            k.e = 1.602176634e-19;
            k.m = 9.1093837015e-31;
            k.charge_mass = 9.1093837015e-31;
            k.hbar = 1.054571817e-34;
            k.c = 2.99792458e8;
            k.mu0 = 1.25663706212e-6;
            k.eps0 = 1.0 / (k.mu0 * k.c * k.c);
            return k;
    }
    throw std::invalid_argument("make_constants: unknown unit system tag");
}

double coulomb_e2(const PhysicalConstants& k) {
    return k.e * k.e / (4.0 * M_PI * k.eps0);
}

SpringParams::SpringParams(double chi, double chi_tilde, double theta,
                           double omega0, std::size_t n)
    : inter_spring(chi),
      intra_spring(chi_tilde),
      charge_mass(theta),
      cell_volume(omega0),
      n_cells(n),
      total_volume(static_cast<double>(n) * omega0) {
    if (chi < 0.0 || chi_tilde < 0.0)
        throw std::invalid_argument("SpringParams: negative spring constant");
    if (theta <= 0.0)
        throw std::invalid_argument("SpringParams: charge mass must be positive");
    if (omega0 <= 0.0)
        throw std::invalid_argument("SpringParams: cell volume must be positive");
    if (n < 1)
        throw std::invalid_argument("SpringParams: need at least one cell");
}

double internal_mode_frequency(const SpringParams& p) {
    return std::sqrt(2.0 * p.intra_spring / p.charge_mass);
}

double collective_mode_frequency(const SpringParams& p) {
    return std::sqrt(4.0 * p.inter_spring / (2.0 * p.charge_mass));
}

double charge_frequency(const SpringParams& p, const PhysicalConstants& k) {
    // Theta omega^2 = 4 e^2 / (4 pi Omega_0 eps0); the 4 e^2 is the squared
    // pair charge (2e)^2.
    return std::sqrt(k.e * k.e /
                     (M_PI * p.cell_volume * k.eps0 * p.charge_mass));
}

}  // namespace dynlab

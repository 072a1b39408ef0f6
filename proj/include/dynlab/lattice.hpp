#ifndef DYNLAB_LATTICE_HPP
#define DYNLAB_LATTICE_HPP

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "dynlab/constants.hpp"
#include "dynlab/spectral.hpp"

namespace dynlab::lattice {

enum class Boundary { Periodic };
enum class Branch { Acoustic, Optical };

/// One-dimensional periodic chain of cells, each holding a pair of opposite
/// point charges of mass Theta. The pair is bound by the intra spring
/// chi_tilde; each charge couples to both charges of the neighbouring cell
/// with stiffness chi/4, so the total inter-cell elasticity is chi. That
/// coupling is equivalent to a spring chi between cell centres plus an
/// on-site stiffening of the pair stretch, and it places the optical
/// eigenvalue at q = 0 at (2*chi_tilde + chi)/Theta.
struct LatticeConfig {
    std::size_t n_cells;
    double spacing;
    SpringParams springs;
    Boundary boundary = Boundary::Periodic;

    LatticeConfig(std::size_t n, double a, SpringParams s);
};

/// Displacements and velocities of the negative/positive charge in every
/// cell, plus elapsed time. Plain value type; stepping is a pure map.
struct ChainState {
    std::vector<double> u_minus, u_plus;
    std::vector<double> v_minus, v_plus;
    double time = 0.0;
};

struct ModeRow {
    double q;
    double omega_acoustic;
    double omega_optical;
};
using ModeTable = std::vector<ModeRow>;

struct SeedMode {
    double q;
    double amplitude;
    Branch branch;
};

/// Zero state, or a standing-wave normal mode: optical seeds displace the
/// pair antisymmetrically (+a/2, -a/2), acoustic seeds translate both
/// charges by the amplitude, modulated by cos(q x_j). q must lie in the
/// first Brillouin zone.
ChainState build_chain(const LatticeConfig& config,
                       const std::optional<SeedMode>& seed = std::nullopt);

/// Mass-weighted 2x2 force-constant matrix at wavevector q; eigenvalues are
/// omega^2 of the two branches, eigenvectors (1,1)/sqrt2 and (1,-1)/sqrt2.
Eigen::Matrix2d dynamical_matrix(const LatticeConfig& config, double q);

/// Largest eigenfrequency over the Brillouin zone; Verlet stability bound.
double max_frequency(const LatticeConfig& config);

/// Dispersion sampled on q_k = (k - floor(n/2)) * 2pi/(a n); always
/// contains the q = 0 row. Branches are classified by eigenvector symmetry
/// (centre-of-mass vs pair stretch), not by eigenvalue order.
ModeTable mode_frequencies(const LatticeConfig& config, std::size_t q_samples);

/// One velocity-Verlet step under the two-spring force law. Requires
/// dt * omega_max < 0.1.
ChainState verlet_step(const ChainState& state, const LatticeConfig& config,
                       double dt);

/// Kinetic plus both spring potentials.
double total_energy(const ChainState& state, const LatticeConfig& config);

/// Theta * sum of all velocities; conserved under periodic boundaries.
double chain_momentum(const ChainState& state, const LatticeConfig& config);

/// Dominant frequencies of the pair stretch u_plus - u_minus at one cell,
/// from a Hann-windowed DFT of a uniformly sampled trajectory of at least
/// 4096 states.
std::vector<spectral::Peak> measured_spectrum(
    const std::vector<ChainState>& trajectory, std::size_t cell);

}  // namespace dynlab::lattice

#endif

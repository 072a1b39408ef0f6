#include "dynlab/lattice.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dynlab::lattice {

namespace {

// Accelerations of every charge. Each charge sees the intra-pair spring and
// four chi/4 bonds to the charges of the two neighbouring cells.
void accelerations(const ChainState& s, const LatticeConfig& cfg,
                   std::vector<double>& a_minus, std::vector<double>& a_plus) {
    const std::size_t n = cfg.n_cells;
    const double chi_t = cfg.springs.intra_spring;
    const double chi4 = 0.25 * cfg.springs.inter_spring;
    const double inv_theta = 1.0 / cfg.springs.charge_mass;
    a_minus.resize(n);
    a_plus.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jl = (j + n - 1) % n;
        const std::size_t jr = (j + 1) % n;
        const double stretch = s.u_plus[j] - s.u_minus[j];
        const double nb_sum = s.u_plus[jl] + s.u_minus[jl] +
                              s.u_plus[jr] + s.u_minus[jr];
        const double f_plus =
            -chi_t * stretch - chi4 * (4.0 * s.u_plus[j] - nb_sum);
        const double f_minus =
            chi_t * stretch - chi4 * (4.0 * s.u_minus[j] - nb_sum);
        a_plus[j] = f_plus * inv_theta;
        a_minus[j] = f_minus * inv_theta;
    }
}

void check_brillouin(const LatticeConfig& cfg, double q) {
    const double q_edge = M_PI / cfg.spacing;
    if (std::abs(q) > q_edge * (1.0 + 1e-12))
        throw std::invalid_argument(
            "wavevector outside the first Brillouin zone");
}

}  // namespace

LatticeConfig::LatticeConfig(std::size_t n, double a, SpringParams s)
    : n_cells(n), spacing(a), springs(std::move(s)) {
    if (n < 2) throw std::invalid_argument("LatticeConfig: need n_cells >= 2");
    if (a <= 0.0) throw std::invalid_argument("LatticeConfig: spacing must be positive");
}

ChainState build_chain(const LatticeConfig& config,
                       const std::optional<SeedMode>& seed) {
    ChainState s;
    const std::size_t n = config.n_cells;
    s.u_minus.assign(n, 0.0);
    s.u_plus.assign(n, 0.0);
    s.v_minus.assign(n, 0.0);
    s.v_plus.assign(n, 0.0);
    if (!seed) return s;

    check_brillouin(config, seed->q);
    for (std::size_t j = 0; j < n; ++j) {
        const double phase =
            std::cos(seed->q * static_cast<double>(j) * config.spacing);
        if (seed->branch == Branch::Optical) {
            s.u_plus[j] = 0.5 * seed->amplitude * phase;
            s.u_minus[j] = -0.5 * seed->amplitude * phase;
        } else {
            s.u_plus[j] = seed->amplitude * phase;
            s.u_minus[j] = seed->amplitude * phase;
        }
    }
    return s;
}

Eigen::Matrix2d dynamical_matrix(const LatticeConfig& config, double q) {
    check_brillouin(config, q);
    const double chi = config.springs.inter_spring;
    const double chi_t = config.springs.intra_spring;
    const double theta = config.springs.charge_mass;
    const double c = std::cos(q * config.spacing);
    Eigen::Matrix2d d;
    d(0, 0) = d(1, 1) = (chi_t + 0.5 * chi * (1.0 - c) + 0.5 * chi) / theta;
    d(0, 1) = d(1, 0) = -(chi_t + 0.5 * chi * c) / theta;
    return d;
}

double max_frequency(const LatticeConfig& config) {
    const double chi = config.springs.inter_spring;
    const double chi_t = config.springs.intra_spring;
    const double theta = config.springs.charge_mass;
    // Optical branch is flat at (2 chi_t + chi)/Theta; acoustic tops out at
    // the zone edge value 2 chi/Theta.
    const double w2 = std::max((2.0 * chi_t + chi) / theta, 2.0 * chi / theta);
    return std::sqrt(w2);
}

ModeTable mode_frequencies(const LatticeConfig& config, std::size_t q_samples) {
    if (q_samples < 2)
        throw std::invalid_argument("mode_frequencies: need q_samples >= 2");
    ModeTable table;
    table.reserve(q_samples);
    const double dq =
        2.0 * M_PI / (config.spacing * static_cast<double>(q_samples));
    const auto half = static_cast<long>(q_samples / 2);
    for (std::size_t k = 0; k < q_samples; ++k) {
        const double q = dq * static_cast<double>(static_cast<long>(k) - half);
        const Eigen::Matrix2d d = dynamical_matrix(config, q);
        // Equal diagonals make the branch split exact for every q, including
        // degenerate crossings: (1,1)/sqrt2 carries the centre-of-mass
        // (acoustic) branch, (1,-1)/sqrt2 the pair stretch (optical).
        ModeRow row{q, std::sqrt(std::max(d(0, 0) + d(0, 1), 0.0)),
                    std::sqrt(std::max(d(0, 0) - d(0, 1), 0.0))};
        table.push_back(row);
    }
    return table;
}

ChainState verlet_step(const ChainState& state, const LatticeConfig& config,
                       double dt) {
    if (dt <= 0.0) throw std::invalid_argument("verlet_step: dt must be positive");
    if (dt * max_frequency(config) >= 0.1)
        throw std::invalid_argument("verlet_step: dt violates stability bound");
    const std::size_t n = config.n_cells;
    if (state.u_minus.size() != n || state.u_plus.size() != n ||
        state.v_minus.size() != n || state.v_plus.size() != n)
        throw std::invalid_argument("verlet_step: state size mismatch");

    std::vector<double> am, ap;
    accelerations(state, config, am, ap);

    ChainState next = state;
    for (std::size_t j = 0; j < n; ++j) {
        next.u_minus[j] += dt * state.v_minus[j] + 0.5 * dt * dt * am[j];
        next.u_plus[j] += dt * state.v_plus[j] + 0.5 * dt * dt * ap[j];
    }
    std::vector<double> am2, ap2;
    accelerations(next, config, am2, ap2);
    for (std::size_t j = 0; j < n; ++j) {
        next.v_minus[j] += 0.5 * dt * (am[j] + am2[j]);
        next.v_plus[j] += 0.5 * dt * (ap[j] + ap2[j]);
    }
    next.time = state.time + dt;
    return next;
}

double total_energy(const ChainState& state, const LatticeConfig& config) {
    const std::size_t n = config.n_cells;
    const double chi_t = config.springs.intra_spring;
    const double chi8 = 0.125 * config.springs.inter_spring;
    const double theta = config.springs.charge_mass;
    double kinetic = 0.0, potential = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        kinetic += 0.5 * theta *
                   (state.v_minus[j] * state.v_minus[j] +
                    state.v_plus[j] * state.v_plus[j]);
        const double stretch = state.u_plus[j] - state.u_minus[j];
        potential += 0.5 * chi_t * stretch * stretch;
        const std::size_t jr = (j + 1) % n;
        const double dpp = state.u_plus[j] - state.u_plus[jr];
        const double dpm = state.u_plus[j] - state.u_minus[jr];
        const double dmp = state.u_minus[j] - state.u_plus[jr];
        const double dmm = state.u_minus[j] - state.u_minus[jr];
        potential += chi8 * (dpp * dpp + dpm * dpm + dmp * dmp + dmm * dmm);
    }
    return kinetic + potential;
}

double chain_momentum(const ChainState& state, const LatticeConfig& config) {
    double v_sum = 0.0;
    for (std::size_t j = 0; j < config.n_cells; ++j)
        v_sum += state.v_minus[j] + state.v_plus[j];
    return config.springs.charge_mass * v_sum;
}

std::vector<spectral::Peak> measured_spectrum(
    const std::vector<ChainState>& trajectory, std::size_t cell) {
    if (trajectory.size() < 4096)
        throw std::invalid_argument("measured_spectrum: need >= 4096 samples");
    const double dt = trajectory[1].time - trajectory[0].time;
    if (dt <= 0.0)
        throw std::invalid_argument("measured_spectrum: non-increasing times");
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
        const double step = trajectory[i].time - trajectory[i - 1].time;
        if (std::abs(step - dt) > 1e-9 * std::abs(dt))
            throw std::invalid_argument("measured_spectrum: non-uniform sampling");
    }
    std::vector<double> stretch(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        if (cell >= trajectory[i].u_plus.size())
            throw std::out_of_range("measured_spectrum: cell index out of range");
        stretch[i] = trajectory[i].u_plus[cell] - trajectory[i].u_minus[cell];
    }
    return spectral::find_peaks(stretch, dt);
}

}  // namespace dynlab::lattice

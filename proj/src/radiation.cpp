#include "dynlab/radiation.hpp"

#include <cmath>
#include <stdexcept>

namespace dynlab::radiation {

namespace {

// First derivative of a sampled series, 4th-order stencils, one-sided at
// the edges.
Vec3 derivative_5pt(const std::vector<Vec3>& f, std::size_t i, double h) {
    const std::size_t n = f.size();
    if (n < 5) throw std::invalid_argument("derivative_5pt: need >= 5 samples");
    const double inv = 1.0 / (12.0 * h);
    if (i >= 2 && i + 2 < n)
        return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
    if (i < 2)
        return (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] +
                16.0 * f[i + 3] - 3.0 * f[i + 4]) * inv;
    return (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] -
            16.0 * f[i - 3] + 3.0 * f[i - 4]) * inv;
}

double friction_coefficient(const PhysicalConstants& k) {
    return (2.0 / 3.0) * coulomb_e2(k) / (k.c * k.c * k.c);
}

double trapezoid(const std::vector<double>& f, double h) {
    double acc = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
    return acc * h;
}

}  // namespace

double OscillatorTrajectory::dt() const {
    if (times.size() < 2)
        throw std::invalid_argument("OscillatorTrajectory: too few samples");
    return times[1] - times[0];
}

Vec3 OscillatorTrajectory::jerk(std::size_t i) const {
    if (i >= times.size())
        throw std::out_of_range("OscillatorTrajectory::jerk: index out of range");
    if (source == TrajectorySource::AnalyticSinusoid)
        return amplitude * omega * omega * omega *
               std::sin(omega * times[i] + phase);
    return derivative_5pt(a, i, dt());
}

OscillatorTrajectory make_sinusoid_trajectory(const Vec3& amplitude,
                                              double omega, double phase,
                                              double t_start, double dt,
                                              std::size_t n_samples) {
    if (omega <= 0.0 || dt <= 0.0 || n_samples < 2)
        throw std::invalid_argument("make_sinusoid_trajectory: bad parameters");
    OscillatorTrajectory traj;
    traj.source = TrajectorySource::AnalyticSinusoid;
    traj.amplitude = amplitude;
    traj.omega = omega;
    traj.phase = phase;
    traj.times.resize(n_samples);
    traj.r.resize(n_samples);
    traj.v.resize(n_samples);
    traj.a.resize(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double t = t_start + dt * static_cast<double>(i);
        const double arg = omega * t + phase;
        traj.times[i] = t;
        traj.r[i] = amplitude * std::cos(arg);
        traj.v[i] = -amplitude * omega * std::sin(arg);
        traj.a[i] = -amplitude * omega * omega * std::cos(arg);
    }
    return traj;
}

Vec3 friction_force(const OscillatorTrajectory& traj,
                    const PhysicalConstants& k, std::size_t at) {
    if (traj.source == TrajectorySource::Numeric &&
        (at < 2 || at + 2 >= traj.size()))
        throw std::out_of_range("friction_force: stencil out of range");
    if (at >= traj.size())
        throw std::out_of_range("friction_force: index out of range");
    return friction_coefficient(k) * traj.jerk(at);
}

double friction_work_average(const OscillatorTrajectory& traj,
                             const PhysicalConstants& k) {
    const std::size_t n = traj.size();
    if (n < 5) throw std::invalid_argument("friction_work_average: too few samples");
    const double h = traj.dt();
    const double span = h * static_cast<double>(n - 1);

    std::size_t first = 0, count = n;
    if (traj.source == TrajectorySource::AnalyticSinusoid) {
        const double period = 2.0 * M_PI / traj.omega;
        if (span < 5.0 * period * (1.0 - 1e-9))
            throw std::invalid_argument(
                "friction_work_average: span shorter than 5 periods");
        const double per_period = period / h;
        const auto m = static_cast<std::size_t>(std::llround(per_period));
        if (m >= 3 && std::abs(per_period - static_cast<double>(m)) <
                          1e-6 * per_period) {
            // Equal-weight mean over the largest half-open whole-period
            // window; spectrally accurate for the periodic integrand.
            const std::size_t whole = ((n - 1) / m) * m;
            first = 0;
            count = whole;
        }
    }
    const double coeff = friction_coefficient(k);
    double acc = 0.0;
    for (std::size_t i = first; i < first + count; ++i)
        acc += traj.v[i].dot(coeff * traj.jerk(i));
    return acc / static_cast<double>(count);
}

double thomson_cross_section(const PhysicalConstants& k) {
    const double radius = coulomb_e2(k) / (k.m * k.c * k.c);
    return (8.0 * M_PI / 3.0) * radius * radius;
}

double magnetic_work(const Vec3& v, const Vec3& h, const PhysicalConstants& k) {
    return (k.e / k.c) * v.dot(v.cross(h));
}

InteractionBalance interaction_equivalence(const OscillatorTrajectory& traj,
                                           const FieldOnGrid& field,
                                           const PhysicalConstants& k) {
    const std::size_t n = traj.size();
    if (field.e.size() != n || field.a.size() != n)
        throw std::invalid_argument("interaction_equivalence: grid mismatch");
    if (n < 5)
        throw std::invalid_argument("interaction_equivalence: too few samples");
    const double h = traj.dt();

    // Precondition: E = -dA/dt on the samples. The scale floor |A|/span
    // keeps a constant potential (E = 0, derivative pure roundoff) valid.
    double e_scale = 0.0, a_scale = 0.0;
    for (const auto& e : field.e) e_scale = std::max(e_scale, e.norm());
    for (const auto& a : field.a) a_scale = std::max(a_scale, a.norm());
    const double span = h * static_cast<double>(n - 1);
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const Vec3 fd = -derivative_5pt(field.a, i, h);
        worst = std::max(worst, (fd - field.e[i]).norm());
        e_scale = std::max(e_scale, fd.norm());
    }
    const double scale = std::max(e_scale, a_scale / span);
    if (scale > 0.0 && worst > 1e-6 * scale)
        throw std::invalid_argument(
            "interaction_equivalence: samples violate E = -dA/dt");

    std::vector<double> va(n), re(n);
    for (std::size_t i = 0; i < n; ++i) {
        va[i] = traj.v[i].dot(field.a[i]);
        re[i] = traj.r[i].dot(field.e[i]);
    }
    InteractionBalance out{};
    out.lhs = -k.e * trapezoid(va, h);
    out.rhs = -k.e * trapezoid(re, h);
    out.boundary = -k.e * (traj.r.back().dot(field.a.back()) -
                           traj.r.front().dot(field.a.front()));
    return out;
}

FermiPotentialSeries fermi_potential_forms(const OscillatorTrajectory& traj,
                                           const std::vector<Vec3>& e_field,
                                           const std::vector<Vec3>& e_dot,
                                           const PhysicalConstants& k) {
    const std::size_t n = traj.size();
    if (e_field.size() != n || e_dot.size() != n)
        throw std::invalid_argument("fermi_potential_forms: grid mismatch");
    const double e2 = coulomb_e2(k);
    const double c3 = k.c * k.c * k.c;
    const double tau_coeff = (2.0 / 3.0) * e2 / (k.m * c3);
    const double fr_coeff = (2.0 / 3.0) * e2 / c3;

    FermiPotentialSeries out;
    out.v_m2.resize(n);
    out.v_je.resize(n);
    out.v_m4.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.v_m2[i] = -tau_coeff * traj.r[i].dot(e_dot[i]);
        out.v_je[i] = tau_coeff * traj.v[i].dot(e_field[i]);
        out.v_m4[i] = -fr_coeff * traj.r[i].dot(traj.jerk(i));
    }
    return out;
}

OscillatorTrajectory driven_trajectory(const DriveSpec& drive, double t_end,
                                       double dt, double record_from) {
    if (dt <= 0.0 || t_end <= 0.0)
        throw std::invalid_argument("driven_trajectory: dt and t_end must be positive");
    if (dt * drive.omega >= 0.05)
        throw std::invalid_argument("driven_trajectory: dt violates dt*omega < 0.05");
    if (drive.tau * drive.omega_c >= 0.1)
        throw std::invalid_argument(
            "driven_trajectory: order reduction requires tau*omega_c < 0.1");
    if (drive.m <= 0.0)
        throw std::invalid_argument("driven_trajectory: mass must be positive");

    const double wc2 = drive.omega_c * drive.omega_c;
    const double em = drive.e / drive.m;
    const double w = drive.omega;
    const Vec3 e0 = drive.e_amp;
    const auto accel = [&](double t, const Vec3& r, const Vec3& v) {
        const Vec3 e_t = e0 * std::cos(w * t);
        const Vec3 e_dot = -e0 * w * std::sin(w * t);
        return Vec3(-wc2 * r - em * e_t -
                    drive.tau * (wc2 * v + em * e_dot));
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    OscillatorTrajectory traj;
    traj.source = TrajectorySource::Numeric;

    Vec3 r = Vec3::Zero(), v = Vec3::Zero();
    double t = 0.0;
    const auto record = [&](double tt, const Vec3& rr, const Vec3& vv) {
        if (tt >= record_from - 1e-12) {
            traj.times.push_back(tt);
            traj.r.push_back(rr);
            traj.v.push_back(vv);
            traj.a.push_back(accel(tt, rr, vv));
        }
    };
    record(t, r, v);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const Vec3 k1r = v, k1v = accel(t, r, v);
        const Vec3 k2r = v + 0.5 * dt * k1v,
                   k2v = accel(t + 0.5 * dt, r + 0.5 * dt * k1r,
                               v + 0.5 * dt * k1v);
        const Vec3 k3r = v + 0.5 * dt * k2v,
                   k3v = accel(t + 0.5 * dt, r + 0.5 * dt * k2r,
                               v + 0.5 * dt * k2v);
        const Vec3 k4r = v + dt * k3v,
                   k4v = accel(t + dt, r + dt * k3r, v + dt * k3v);
        r += (dt / 6.0) * (k1r + 2.0 * (k2r + k3r) + k4r);
        v += (dt / 6.0) * (k1v + 2.0 * (k2v + k3v) + k4v);
        t = dt * static_cast<double>(i + 1);
        record(t, r, v);
    }
    if (traj.times.size() < 2)
        throw std::invalid_argument("driven_trajectory: record window too small");
    return traj;
}

CVec3 extract_steady_amplitude(const OscillatorTrajectory& traj, double omega) {
    const std::size_t n = traj.size();
    if (n < 3 || omega <= 0.0)
        throw std::invalid_argument("extract_steady_amplitude: bad input");
    const double h = traj.dt();
    const double period = 2.0 * M_PI / omega;
    const double per_period = period / h;
    const auto m = static_cast<std::size_t>(std::llround(per_period));
    if (m < 3 || std::abs(per_period - static_cast<double>(m)) > 1e-6 * per_period)
        throw std::invalid_argument(
            "extract_steady_amplitude: dt must divide the drive period");
    const std::size_t whole = ((n - 1) / m) * m;
    if (whole == 0)
        throw std::invalid_argument(
            "extract_steady_amplitude: need at least one whole period");
    const std::size_t first = (n - 1) - whole;

    CVec3 acc = CVec3::Zero();
    for (std::size_t i = first; i < first + whole; ++i) {
        const std::complex<double> w =
            std::polar(1.0, omega * traj.times[i]);
        acc += traj.r[i].cast<std::complex<double>>() * w;
    }
    return 2.0 * acc / static_cast<double>(whole);
}

double steady_amplitude_modulus(const DriveSpec& drive, double omega) {
    const double detune = omega * omega - drive.omega_c * drive.omega_c;
    const double damp = drive.tau * omega * omega * omega;
    return (drive.e / drive.m) * drive.e_amp.norm() /
           std::sqrt(detune * detune + damp * damp);
}

double dielectric_epsilon(const DielectricSpec& spec) {
    if (spec.mass <= 0.0)
        throw std::invalid_argument("dielectric_epsilon: mass must be positive");
    double eps = 1.0;
    for (const auto& term : spec.terms) {
        if (term.n_q < 0.0 || term.omega_q <= 0.0)
            throw std::invalid_argument("dielectric_epsilon: invalid term");
        const double detune = term.omega_q - spec.omega_c;
        const double w4 = term.omega_q * term.omega_q * term.omega_q *
                          term.omega_q;
        eps += 4.0 * M_PI * term.n_q * detune /
               (spec.mass * (4.0 * detune * detune +
                             spec.tau * spec.tau * w4));
    }
    return eps;
}

std::vector<ScanRow> resonance_scan(const DriveSpec& drive,
                                    const std::vector<double>& omega_grid) {
    for (std::size_t i = 1; i < omega_grid.size(); ++i)
        if (!(omega_grid[i] > omega_grid[i - 1]))
            throw std::invalid_argument("resonance_scan: grid must ascend");
    std::vector<ScanRow> rows;
    rows.reserve(omega_grid.size());
    for (double w : omega_grid)
        rows.push_back({w, steady_amplitude_modulus(drive, w)});
    return rows;
}

double resonance_half_power_width(const DriveSpec& drive) {
    const auto power = [&](double w) {
        const double amp = steady_amplitude_modulus(drive, w);
        return amp * amp;
    };
    // Locate the peak by golden-section search around omega_c.
    double lo = 0.5 * drive.omega_c, hi = 1.5 * drive.omega_c;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = power(x1), f2 = power(x2);
    while (hi - lo > 1e-14 * drive.omega_c) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + gr * (hi - lo); f2 = power(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - gr * (hi - lo); f1 = power(x1);
        }
    }
    const double w_peak = 0.5 * (lo + hi);
    const double half = 0.5 * power(w_peak);

    const auto bisect = [&](double a, double b) {
        // power(a) and power(b) bracket the half level.
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (power(mid) > half) a = mid; else b = mid;
        }
        return 0.5 * (a + b);
    };
    double out = w_peak * 2.0;
    while (power(out) > half) out *= 2.0;
    double in = w_peak * 0.5;
    while (power(in) > half) in *= 0.5;
    const double w_hi = bisect(w_peak, out);
    const double w_lo = bisect(w_peak, in);
    return w_hi - w_lo;
}

}  // namespace dynlab::radiation

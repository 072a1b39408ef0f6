#include "dynlab/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>

#include "dynlab/csv.hpp"
#include "dynlab/emission.hpp"
#include "dynlab/field_modes.hpp"
#include "dynlab/lattice.hpp"
#include "dynlab/radiation.hpp"

namespace dynlab::run {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* command_name(Command c) {
    switch (c) {
        case Command::Verify: return "verify";
        case Command::Dispersion: return "dispersion";
        case Command::Emission: return "emission";
        case Command::Resonance: return "resonance";
        case Command::Dielectric: return "dielectric";
        case Command::Fields: return "fields";
        case Command::Sweep: return "sweep";
    }
    return "?";
}

namespace {

Command parse_command(const std::string& name) {
    for (Command c : {Command::Verify, Command::Dispersion, Command::Emission,
                      Command::Resonance, Command::Dielectric, Command::Fields,
                      Command::Sweep})
        if (name == command_name(c)) return c;
    throw ConfigError("unknown command: '" + name + "'");
}

double require_number(const ordered_json& params, const std::string& key) {
    if (!params.contains(key))
        throw ConfigError("missing required key: '" + key + "'");
    if (!params[key].is_number())
        throw ConfigError("key '" + key + "' must be a number");
    return params[key].get<double>();
}

double number_or(ordered_json& params, const std::string& key, double def) {
    if (!params.contains(key)) {
        params[key] = def;
        return def;
    }
    if (!params[key].is_number())
        throw ConfigError("key '" + key + "' must be a number");
    return params[key].get<double>();
}

std::size_t count_or(ordered_json& params, const std::string& key,
                     std::size_t def) {
    const double v = number_or(params, key, static_cast<double>(def));
    if (v < 0.0 || v != std::floor(v))
        throw ConfigError("key '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

void reject_unknown_keys(const ordered_json& params,
                         const std::set<std::string>& known) {
    for (const auto& item : params.items())
        if (!known.count(item.key()))
            throw ConfigError("unknown key: '" + item.key() + "'");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) /
                          static_cast<double>(n - 1);
    return out;
}

void append_check(RunReport& report, const std::string& name, double measured,
                  double tolerance) {
    report.checks.push_back(
        {name, measured, tolerance, measured <= tolerance});
}

// ---------------------------------------------------------------- commands

void run_dispersion(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    const double chi = p["chi"].get<double>();
    const double chi_tilde = p["chi_tilde"].get<double>();
    const double theta = p["theta"].get<double>();
    const double spacing = p["spacing"].get<double>();
    const auto q_samples = static_cast<std::size_t>(p["q_samples"].get<double>());
    const auto n_cells = static_cast<std::size_t>(p["n_cells"].get<double>());

    const SpringParams springs(chi, chi_tilde, theta, 1.0, n_cells);
    const lattice::LatticeConfig config(n_cells, spacing, springs);
    const auto table = lattice::mode_frequencies(config, q_samples);

    std::vector<std::vector<double>> rows;
    const lattice::ModeRow* q0 = nullptr;
    for (const auto& row : table) {
        rows.push_back({row.q, row.omega_acoustic, row.omega_optical});
        if (std::abs(row.q) < 1e-15) q0 = &row;
    }
    csv::write_table(rows, {"q", "omega_acoustic", "omega_optical"},
                     cfg.output_dir + "/dispersion.csv");
    report.produced_files.push_back("dispersion.csv");

    if (q0 != nullptr) {
        append_check(report, "dispersion_q0_acoustic_zero", q0->omega_acoustic,
                     1e-12);
        const double expected = (2.0 * chi_tilde + chi) / theta;
        append_check(report, "dispersion_q0_optical_matches_model",
                     std::abs(q0->omega_optical * q0->omega_optical / expected -
                              1.0),
                     1e-10);
    }
}

void run_emission(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    const double a_rate = p["A"].get<double>();
    const double t_min = p["t_min"].get<double>();
    const double t_max = p["t_max"].get<double>();
    const double dt = p["dt"].get<double>();

    emission::EmissionParams params{};
    params.A = a_rate;
    params.omega_c = 1.0;
    params.tau = 1.0;
    params.r12 = 1.0;

    emission::TwoLevelState center;
    center.lambda = {emission::Complex(1.0 / std::sqrt(2.0), 0.0),
                     emission::Complex(1.0 / std::sqrt(2.0), 0.0)};

    std::vector<emission::TwoLevelState> merged;
    if (t_min < 0.0) {
        auto backward =
            emission::integrate_populations(params, center, t_min, dt);
        merged.assign(backward.rbegin(), backward.rend());
        merged.pop_back();  // drop duplicate t = 0
    }
    if (t_max > 0.0) {
        auto forward =
            emission::integrate_populations(params, center, t_max, dt);
        merged.insert(merged.end(), forward.begin(), forward.end());
    } else {
        merged.push_back(center);
    }

    std::vector<std::vector<double>> rows;
    double worst_norm = 0.0, worst_logistic = 0.0, worst_envelope = 0.0;
    double env_at_zero = 0.0, best_abs_t = 1e300;
    for (const auto& s : merged) {
        const double p1 = std::norm(s.lambda[0]);
        const double p2 = std::norm(s.lambda[1]);
        const double env = std::abs(std::conj(s.lambda[0]) * s.lambda[1]);
        rows.push_back({s.time, s.lambda[0].real(), s.lambda[0].imag(),
                        s.lambda[1].real(), s.lambda[1].imag(), p1, p2, env});
        worst_norm = std::max(worst_norm, std::abs(p1 + p2 - 1.0));
        const auto ref = emission::analytic_populations(s.time, a_rate);
        worst_logistic = std::max(worst_logistic, std::abs(p1 - ref.first));
        worst_envelope = std::max(
            worst_envelope,
            std::abs(env - emission::hybrid_envelope(s.time, a_rate)));
        if (std::abs(s.time) < best_abs_t) {
            best_abs_t = std::abs(s.time);
            env_at_zero = env;
        }
    }
    csv::write_table(rows,
                     {"t", "re_l1", "im_l1", "re_l2", "im_l2", "p1", "p2",
                      "envelope"},
                     cfg.output_dir + "/emission.csv");
    report.produced_files.push_back("emission.csv");

    append_check(report, "emission_first_integral", worst_norm, 1e-10);
    append_check(report, "emission_population_vs_logistic", worst_logistic,
                 1e-8);
    append_check(report, "emission_envelope_vs_closed_form", worst_envelope,
                 1e-8);
    append_check(report, "emission_envelope_peak",
                 std::abs(env_at_zero - 0.5), 1e-8);
}

void run_resonance(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    radiation::DriveSpec drive{};
    drive.omega_c = p["omega_c"].get<double>();
    drive.tau = p["tau"].get<double>();
    drive.e_amp = radiation::Vec3(p["e_amp"].get<double>(), 0.0, 0.0);
    drive.m = 1.0;
    drive.e = 1.0;

    const auto n_points = static_cast<std::size_t>(p["n_points"].get<double>());
    const auto grid = linspace(p["omega_min"].get<double>(),
                               p["omega_max"].get<double>(), n_points);
    const auto scan = radiation::resonance_scan(drive, grid);

    std::vector<std::vector<double>> rows;
    std::size_t peak_idx = 0, nearest_idx = 0;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        rows.push_back({scan[i].omega, scan[i].amplitude});
        if (scan[i].amplitude > scan[peak_idx].amplitude) peak_idx = i;
        if (std::abs(scan[i].omega - drive.omega_c) <
            std::abs(scan[nearest_idx].omega - drive.omega_c))
            nearest_idx = i;
    }
    csv::write_table(rows, {"omega", "value"},
                     cfg.output_dir + "/resonance.csv");
    report.produced_files.push_back("resonance.csv");

    append_check(report, "resonance_peak_at_grid_point_nearest_omega_c",
                 std::abs(static_cast<double>(peak_idx) -
                          static_cast<double>(nearest_idx)),
                 0.5);
    const double width = radiation::resonance_half_power_width(drive);
    const double expected = drive.tau * drive.omega_c * drive.omega_c;
    append_check(report, "resonance_half_power_width",
                 std::abs(width / expected - 1.0), 1e-2);
}

void run_dielectric(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    radiation::DielectricSpec spec{};
    spec.omega_c = p["omega_c"].get<double>();
    spec.mass = p["mass"].get<double>();
    spec.tau = p["tau"].get<double>();
    const double n_q = p["n_q"].get<double>();
    const auto n_points = static_cast<std::size_t>(p["n_points"].get<double>());
    const auto grid = linspace(p["omega_min"].get<double>(),
                               p["omega_max"].get<double>(), n_points);

    std::vector<std::vector<double>> rows;
    std::size_t sign_violations = 0;
    for (double w : grid) {
        radiation::DielectricSpec one = spec;
        one.terms = {{n_q, w}};
        const double eps = radiation::dielectric_epsilon(one);
        rows.push_back({w, eps});
        const double detune = w - spec.omega_c;
        if (detune != 0.0 && (eps - 1.0) * detune < 0.0) ++sign_violations;
    }
    csv::write_table(rows, {"omega", "value"},
                     cfg.output_dir + "/dielectric.csv");
    report.produced_files.push_back("dielectric.csv");

    radiation::DielectricSpec vacuum = spec;
    append_check(report, "dielectric_vacuum_epsilon",
                 std::abs(radiation::dielectric_epsilon(vacuum) - 1.0), 1e-15);
    radiation::DielectricSpec at_res = spec;
    at_res.terms = {{n_q, spec.omega_c}};
    append_check(report, "dielectric_at_resonance_epsilon",
                 std::abs(radiation::dielectric_epsilon(at_res) - 1.0), 1e-15);
    append_check(report, "dielectric_sign_follows_detune",
                 static_cast<double>(sign_violations), 0.5);
}

void run_fields(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    const auto k = make_constants(cfg.unit_system);

    std::vector<fields::FieldMode> modes;
    for (const auto& jm : p["modes"]) {
        const auto q = jm["q"].get<std::vector<double>>();
        const auto pol = jm["pol"].get<std::vector<double>>();
        const auto alpha = jm["alpha"].get<std::vector<double>>();
        if (q.size() != 3 || pol.size() != 3 || alpha.size() != 2)
            throw ConfigError("fields: mode entries need q[3], pol[3], alpha[2]");
        const int n = jm.contains("n") ? jm["n"].get<int>() : 0;
        modes.emplace_back(fields::Vec3(q[0], q[1], q[2]),
                           fields::Vec3(pol[0], pol[1], pol[2]),
                           fields::Complex(alpha[0], alpha[1]), n, k);
    }
    const double cell_volume = p["cell_volume"].get<double>();
    const auto n_cells = static_cast<std::size_t>(p["n_cells"].get<double>());
    const fields::ModeSet ms(std::move(modes), k, cell_volume, n_cells);

    const double t_start = p["t_start"].get<double>();
    const double t_step = p["t_step"].get<double>();
    const auto t_count = static_cast<std::size_t>(p["t_count"].get<double>());
    std::vector<fields::Vec3> positions;
    for (const auto& jr : p["positions"]) {
        const auto r = jr.get<std::vector<double>>();
        if (r.size() != 3) throw ConfigError("fields: positions need 3 entries");
        positions.emplace_back(r[0], r[1], r[2]);
    }
    if (positions.empty()) throw ConfigError("fields: positions must not be empty");

    std::vector<std::string> schema = {"t", "r_x", "r_y", "r_z"};
    for (const char* f : {"u", "p", "e", "a", "h", "s"})
        for (const char* ax : {"_x", "_y", "_z"})
            schema.push_back(std::string(f) + ax);

    std::vector<std::vector<double>> rows;
    for (std::size_t it = 0; it < t_count; ++it) {
        const double t = t_start + t_step * static_cast<double>(it);
        for (const auto& r : positions) {
            const auto snap = fields::evaluate_snapshot(ms, r, t);
            std::vector<double> row = {t, r.x(), r.y(), r.z()};
            for (const auto* vec : {&snap.u, &snap.P, &snap.E, &snap.A,
                                    &snap.H, &snap.S})
                for (int i = 0; i < 3; ++i) row.push_back((*vec)(i));
            rows.push_back(std::move(row));
        }
    }
    csv::write_table(rows, schema, cfg.output_dir + "/fields.csv");
    report.produced_files.push_back("fields.csv");

    // Defining identity E = -dA/dt on the configured set, central difference.
    double w_max = 0.0;
    for (const auto& m : ms.modes) w_max = std::max(w_max, m.omega);
    const double h = 1e-4 * 2.0 * M_PI / w_max;
    double scale = 0.0, worst = 0.0;
    for (std::size_t it = 0; it < std::min<std::size_t>(t_count, 4); ++it) {
        const double t = t_start + t_step * static_cast<double>(it);
        for (const auto& r : positions) {
            const fields::Vec3 e = fields::electric_field(ms, r, t);
            const fields::Vec3 fd = -(fields::vector_potential(ms, r, t + h) -
                                      fields::vector_potential(ms, r, t - h)) /
                                    (2.0 * h);
            worst = std::max(worst, (fd - e).norm());
            scale = std::max(scale, e.norm());
        }
    }
    append_check(report, "fields_E_equals_minus_dA_dt",
                 scale > 0.0 ? worst / scale : 0.0, 1e-6);
}

void run_sweep(const RunConfig& cfg, RunReport& report) {
    const auto& p = cfg.params;
    const std::string sub_name = p["target"].get<std::string>();
    const std::string vary_key = p["vary"]["key"].get<std::string>();
    const auto values = p["vary"]["values"].get<std::vector<double>>();

    std::vector<RunConfig> subs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ordered_json j;
        j["command"] = sub_name;
        if (p.contains("base"))
            for (const auto& item : p["base"].items())
                j[item.key()] = item.value();
        j[vary_key] = values[i];
        char dir[32];
        std::snprintf(dir, sizeof(dir), "run_%03zu", i);
        j["output_dir"] = cfg.output_dir + "/" + dir;
        j["unit_system"] =
            cfg.unit_system == UnitSystem::Natural ? "natural" : "si";
        subs.push_back(config_from_json(j));
    }

    // Independent sub-runs, each confined to its own subdirectory.
    std::vector<std::future<RunReport>> futures;
    futures.reserve(subs.size());
    for (const auto& sub : subs)
        futures.push_back(std::async(std::launch::async,
                                     [sub] { return run_command(sub); }));
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const RunReport sub_report = futures[i].get();
        char dir[32];
        std::snprintf(dir, sizeof(dir), "run_%03zu", i);
        for (const auto& f : sub_report.produced_files)
            report.produced_files.push_back(std::string(dir) + "/" + f);
        report.produced_files.push_back(std::string(dir) + "/report.json");
        for (const auto& c : sub_report.checks)
            report.checks.push_back({std::string(dir) + "/" + c.name,
                                     c.measured, c.tolerance, c.pass});
    }
}

}  // namespace

namespace detail {

void dispatch(const RunConfig& config, RunReport& report) {
    switch (config.command) {
        case Command::Dispersion: run_dispersion(config, report); break;
        case Command::Emission: run_emission(config, report); break;
        case Command::Resonance: run_resonance(config, report); break;
        case Command::Dielectric: run_dielectric(config, report); break;
        case Command::Fields: run_fields(config, report); break;
        case Command::Sweep: run_sweep(config, report); break;
        case Command::Verify: break;
    }
}

}  // namespace detail

bool RunReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

ordered_json RunReport::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["produced_files"] = produced_files;
    ordered_json checks_json = ordered_json::array();
    for (const auto& c : checks) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["measured"] = c.measured;
        cj["tolerance"] = c.tolerance;
        cj["pass"] = c.pass;
        checks_json.push_back(cj);
    }
    j["checks"] = checks_json;
    j["all_passed"] = all_passed();
    j["wall_time_s"] = wall_time_s;
    return j;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

RunConfig config_from_json(const ordered_json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("command")) throw ConfigError("missing required key: 'command'");
    RunConfig cfg;
    cfg.command = parse_command(j["command"].get<std::string>());

    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("unit_system")) {
        const std::string tag = j["unit_system"].get<std::string>();
        if (tag == "natural") cfg.unit_system = UnitSystem::Natural;
        else if (tag == "si") cfg.unit_system = UnitSystem::Si;
        else throw ConfigError("unknown unit_system: '" + tag + "'");
    }

    ordered_json params;
    for (const auto& item : j.items())
        if (item.key() != "command" && item.key() != "output_dir" &&
            item.key() != "unit_system")
            params[item.key()] = item.value();

    switch (cfg.command) {
        case Command::Verify:
            reject_unknown_keys(params, {});
            break;
        case Command::Dispersion: {
            reject_unknown_keys(params, {"chi", "chi_tilde", "theta", "spacing",
                                         "q_samples", "n_cells"});
            require_number(params, "chi");
            require_number(params, "chi_tilde");
            number_or(params, "theta", 1.0);
            number_or(params, "spacing", 1.0);
            if (count_or(params, "q_samples", 64) < 2)
                throw ConfigError("dispersion: q_samples must be >= 2");
            if (count_or(params, "n_cells", 16) < 2)
                throw ConfigError("dispersion: n_cells must be >= 2");
            break;
        }
        case Command::Emission: {
            reject_unknown_keys(params,
                                {"A", "t_span", "t_min", "t_max", "dt"});
            const double a_rate = require_number(params, "A");
            if (a_rate <= 0.0) throw ConfigError("emission: A must be positive");
            const double span = number_or(params, "t_span", 20.0 / a_rate);
            number_or(params, "t_min", -0.5 * span);
            number_or(params, "t_max", 0.5 * span);
            const double dt = number_or(params, "dt", 1e-3 / a_rate);
            if (dt <= 0.0 || dt > 1e-3 / a_rate)
                throw ConfigError(
                    "emission: dt exceeds the step rule dt <= 1e-3/A");
            break;
        }
        case Command::Resonance: {
            reject_unknown_keys(params, {"omega_c", "tau", "e_amp", "omega_min",
                                         "omega_max", "n_points"});
            const double wc = number_or(params, "omega_c", 1.0);
            if (wc <= 0.0) throw ConfigError("resonance: omega_c must be positive");
            number_or(params, "tau", 1e-3 / wc);
            number_or(params, "e_amp", 1.0);
            number_or(params, "omega_min", 0.5 * wc);
            number_or(params, "omega_max", 2.0 * wc);
            if (count_or(params, "n_points", 201) < 2)
                throw ConfigError("resonance: n_points must be >= 2");
            break;
        }
        case Command::Dielectric: {
            reject_unknown_keys(params, {"omega_c", "mass", "tau", "n_q",
                                         "omega_min", "omega_max", "n_points"});
            const double wc = number_or(params, "omega_c", 1.0);
            number_or(params, "mass", 1.0);
            number_or(params, "tau", 1e-3);
            number_or(params, "n_q", 1e-3);
            number_or(params, "omega_min", 0.5 * wc);
            number_or(params, "omega_max", 1.5 * wc);
            if (count_or(params, "n_points", 100) < 2)
                throw ConfigError("dielectric: n_points must be >= 2");
            break;
        }
        case Command::Fields: {
            reject_unknown_keys(params,
                                {"modes", "cell_volume", "n_cells", "t_start",
                                 "t_step", "t_count", "positions"});
            if (!params.contains("modes")) {
                params["modes"] = ordered_json::array();
                params["modes"].push_back(
                    {{"q", {0.0, 0.0, 1.0}}, {"pol", {1.0, 0.0, 0.0}},
                     {"alpha", {0.5, 0.0}}, {"n", 0}});
            }
            if (!params["modes"].is_array() || params["modes"].empty())
                throw ConfigError("fields: modes must be a nonempty array");
            number_or(params, "cell_volume", 1.0);
            count_or(params, "n_cells", 1);
            number_or(params, "t_start", 0.0);
            number_or(params, "t_step", 0.1);
            if (count_or(params, "t_count", 16) < 1)
                throw ConfigError("fields: t_count must be >= 1");
            if (!params.contains("positions"))
                params["positions"] = ordered_json::array(
                    {{0.0, 0.0, 0.0}, {0.1, 0.2, 0.3}});
            break;
        }
        case Command::Sweep: {
            reject_unknown_keys(params, {"target", "base", "vary"});
            if (!params.contains("target"))
                throw ConfigError("missing required key: 'target'");
            const Command sub = parse_command(params["target"].get<std::string>());
            if (sub == Command::Sweep || sub == Command::Verify)
                throw ConfigError("sweep: target must be a plain experiment command");
            if (!params.contains("vary") || !params["vary"].contains("key") ||
                !params["vary"].contains("values"))
                throw ConfigError("missing required key: 'vary' {key, values}");
            if (!params["vary"]["values"].is_array() ||
                params["vary"]["values"].empty())
                throw ConfigError("sweep: vary.values must be a nonempty array");
            break;
        }
    }
    cfg.params = params;
    return cfg;
}

RunReport run_command(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir))
        throw ConfigError("output_dir not writable: " + config.output_dir);

    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    if (config.command == Command::Verify) {
        report = verify_report(config.output_dir);
    } else {
        report.command = command_name(config.command);
        report.inputs = config.params;
        detail::dispatch(config, report);
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    for (const auto& f : report.produced_files)
        if (!fs::exists(fs::path(config.output_dir) / f))
            throw std::runtime_error("produced file missing: " + f);

    std::ofstream out(fs::path(config.output_dir) / "report.json",
                      std::ios::binary);
    if (!out)
        throw ConfigError("output_dir not writable: " + config.output_dir);
    out << report.to_json().dump(2) << '\n';
    return report;
}

}  // namespace dynlab::run

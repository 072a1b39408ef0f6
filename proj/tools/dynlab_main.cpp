// Batch front end: <command> --config <path> [--output-dir <path>].
// Exit codes: 0 success, 1 check failure, 2 configuration/usage error.

#include <CLI11.hpp>
#include <clocale>
#include <cstdio>
#include <string>

#include "dynlab/run.hpp"

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");

    CLI::App app{"Lattice-vacuum oscillator laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    std::vector<CLI::App*> subs;
    for (const char* name :
         {"verify", "dispersion", "emission", "resonance", "dielectric",
          "fields", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--output-dir", output_dir,
                        "output directory (overrides the config)");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        dynlab::run::RunConfig cfg;
        const std::string sub_name = app.get_subcommands().at(0)->get_name();
        if (!config_path.empty()) {
            cfg = dynlab::run::load_config(config_path);
            if (dynlab::run::command_name(cfg.command) != sub_name)
                throw dynlab::run::ConfigError(
                    "config command '" +
                    std::string(dynlab::run::command_name(cfg.command)) +
                    "' does not match the CLI command '" + sub_name + "'");
        } else {
            nlohmann::ordered_json j;
            j["command"] = sub_name;
            cfg = dynlab::run::config_from_json(j);
        }
        if (!output_dir.empty()) cfg.output_dir = output_dir;

        const auto report = dynlab::run::run_command(cfg);
        for (const auto& c : report.checks)
            std::printf("[%s] %-45s measured %.3e  tol %.3e\n",
                        c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                        c.tolerance);
        std::printf("%s: %zu checks, %s (%.2f s), report in %s/report.json\n",
                    report.command.c_str(), report.checks.size(),
                    report.all_passed() ? "all passed" : "FAILURES",
                    report.wall_time_s, cfg.output_dir.c_str());
        return report.all_passed() ? 0 : 1;
    } catch (const dynlab::run::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

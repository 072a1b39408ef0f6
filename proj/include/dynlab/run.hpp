#ifndef DYNLAB_RUN_HPP
#define DYNLAB_RUN_HPP

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynlab/constants.hpp"

namespace dynlab::run {

enum class Command {
    Verify,
    Dispersion,
    Emission,
    Resonance,
    Dielectric,
    Fields,
    Sweep,
};

const char* command_name(Command c);

/// Configuration / usage problem; maps to process exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A validated run request: command, its parameter map (defaults applied),
/// output directory and unit system.
struct RunConfig {
    Command command = Command::Verify;
    nlohmann::ordered_json params;
    std::string output_dir = "out";
    UnitSystem unit_system = UnitSystem::Natural;
};

struct CheckResult {
    std::string name;
    double measured;
    double tolerance;
    bool pass;
};

struct RunReport {
    std::string command;
    nlohmann::ordered_json inputs;
    std::vector<std::string> produced_files;
    std::vector<CheckResult> checks;
    double wall_time_s = 0.0;

    bool all_passed() const;
    nlohmann::ordered_json to_json() const;
};

/// Parses and validates a JSON config file. Layout: {"command": "...",
/// optional "output_dir", optional "unit_system", remaining keys are the
/// command parameters}. Throws ConfigError on parse errors, unknown
/// commands, missing required keys, or step-rule violations.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::ordered_json& j);

/// Dispatches the command, writes its CSV outputs and report.json into
/// output_dir, and returns the report. Exit-code contract: 0 when every
/// check passed, 1 otherwise; ConfigError propagates as 2.
RunReport run_command(const RunConfig& config);

/// The deterministic verification suite behind the verify command: runs the
/// canonical experiment of every module, writes their CSVs into output_dir
/// and returns one CheckResult per invariant. No randomness anywhere.
RunReport verify_report(const std::string& output_dir);

namespace detail {
/// Command dispatch without directory setup, timing or report writing.
void dispatch(const RunConfig& config, RunReport& report);
}  // namespace detail

}  // namespace dynlab::run

#endif

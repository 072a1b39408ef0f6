#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynlab/csv.hpp"
#include "dynlab/run.hpp"

using namespace dynlab;
using namespace dynlab::run;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("dynlab_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("minimal emission config gets defaults") {
        nlohmann::ordered_json j;
        j["command"] = "emission";
        j["A"] = 0.667;
        j["t_span"] = 20.0;
        const auto cfg = config_from_json(j);
        CHECK(cfg.command == Command::Emission);
        CHECK(cfg.unit_system == UnitSystem::Natural);
        CHECK(cfg.params["t_min"].get<double>() == doctest::Approx(-10.0));
        CHECK(cfg.params["t_max"].get<double>() == doctest::Approx(10.0));
        CHECK(cfg.params["dt"].get<double>() ==
              doctest::Approx(1e-3 / 0.667).epsilon(1e-12));
    }

    SUBCASE("unknown command is rejected by name") {
        nlohmann::ordered_json j;
        j["command"] = "frobnicate";
        try {
            config_from_json(j);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("frobnicate") != std::string::npos);
        }
    }

    SUBCASE("missing required key is named") {
        nlohmann::ordered_json j;
        j["command"] = "emission";
        try {
            config_from_json(j);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("'A'") != std::string::npos);
        }
    }

    SUBCASE("step rule is enforced") {
        nlohmann::ordered_json j;
        j["command"] = "emission";
        j["A"] = 1.0;
        j["dt"] = 2e-3;  // above 1e-3/A
        try {
            config_from_json(j);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("step rule") != std::string::npos);
        }
    }

    SUBCASE("unknown parameter keys are rejected") {
        nlohmann::ordered_json j;
        j["command"] = "emission";
        j["A"] = 1.0;
        j["typo_key"] = 3.0;
        CHECK_THROWS_AS(config_from_json(j), ConfigError);
    }

    SUBCASE("config file round trip") {
        const auto dir = temp_dir("cfg");
        const auto path = dir / "emission.json";
        {
            std::ofstream out(path);
            out << R"({"command":"emission","A":0.5,"output_dir":")"
                << (dir / "out").string() << R"("})";
        }
        const auto cfg = load_config(path.string());
        CHECK(cfg.command == Command::Emission);
        CHECK(cfg.output_dir == (dir / "out").string());

        const auto bad = dir / "broken.json";
        {
            std::ofstream out(bad);
            out << "{not json";
        }
        CHECK_THROWS_AS(load_config(bad.string()), ConfigError);
        CHECK_THROWS_AS(load_config((dir / "absent.json").string()),
                        ConfigError);
    }
}

TEST_CASE("write_table") {
    const auto dir = temp_dir("csv");

    SUBCASE("empty row set yields a header-only file") {
        const auto path = (dir / "empty.csv").string();
        csv::write_table({}, {"a", "b"}, path);
        CHECK(read_file(path) == "a,b\n");
    }

    SUBCASE("three rows give four lines and byte-identical reruns") {
        const auto path1 = (dir / "t1.csv").string();
        const auto path2 = (dir / "t2.csv").string();
        const std::vector<std::vector<double>> rows = {
            {1.0, 2.0 / 3.0}, {-0.125, 1e-300}, {3.14159265358979, 42.0}};
        csv::write_table(rows, {"x", "y"}, path1);
        csv::write_table(rows, {"x", "y"}, path2);
        const auto text = read_file(path1);
        CHECK(text == read_file(path2));
        CHECK(std::count(text.begin(), text.end(), '\n') == 4);
        CHECK(text.find(',') != std::string::npos);
        CHECK(text.find(';') == std::string::npos);
    }

    SUBCASE("schema width mismatch and bad paths are rejected") {
        CHECK_THROWS_AS(csv::write_table({{1.0}}, {"a", "b"}, (dir / "x.csv").string()),
                        std::invalid_argument);
        CHECK_THROWS_AS(csv::write_table({}, {"a"}, (dir / "nodir" / "x.csv").string()),
                        std::runtime_error);
    }
}

TEST_CASE("emission command writes the documented trajectory table") {
    const auto dir = temp_dir("emission");
    nlohmann::ordered_json j;
    j["command"] = "emission";
    j["A"] = 2.0 / 3.0;
    j["t_min"] = -15.0;
    j["t_max"] = 15.0;
    j["output_dir"] = dir.string();
    const auto report = run_command(config_from_json(j));

    CHECK(report.all_passed());
    CHECK(fs::exists(dir / "emission.csv"));
    CHECK(fs::exists(dir / "report.json"));

    // Scan the CSV: p1 + p2 = 1 per row, envelope peaks at the row nearest 0.
    std::ifstream in(dir / "emission.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,re_l1,im_l1,re_l2,im_l2,p1,p2,envelope");
    double best_env = 0.0, best_abs_t = 1e300, max_env = 0.0;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, re1, im1, re2, im2, p1, p2, env;
        ss >> t >> re1 >> im1 >> re2 >> im2 >> p1 >> p2 >> env;
        CHECK(std::abs(p1 + p2 - 1.0) <= 1e-10);
        max_env = std::max(max_env, env);
        if (std::abs(t) < best_abs_t) {
            best_abs_t = std::abs(t);
            best_env = env;
        }
    }
    CHECK(best_env == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(max_env <= best_env + 1e-12);
}

TEST_CASE("dispersion command checks the frequency bookkeeping") {
    const auto dir = temp_dir("dispersion");
    nlohmann::ordered_json j;
    j["command"] = "dispersion";
    j["chi"] = 2.0;
    j["chi_tilde"] = 1.0;
    j["q_samples"] = 64;
    j["output_dir"] = dir.string();
    const auto report = run_command(config_from_json(j));
    CHECK(report.all_passed());

    std::ifstream in(dir / "dispersion.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "q,omega_acoustic,omega_optical");
    std::size_t rows = 0;
    bool has_q0 = false;
    double prev_q = -1e300;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double q, wa, wo;
        ss >> q >> wa >> wo;
        CHECK(q > prev_q);
        prev_q = q;
        ++rows;
        if (q == 0.0) {
            has_q0 = true;
            CHECK(std::abs(wo * wo - 2.0 * (2.0 * 1.0 / 1.0)) <= 1e-10);
        }
    }
    CHECK(rows == 64);
    CHECK(has_q0);
}

TEST_CASE("sweep fans out into isolated subdirectories") {
    const auto dir = temp_dir("sweep");
    nlohmann::ordered_json j;
    j["command"] = "sweep";
    j["output_dir"] = dir.string();
    j["target"] = "emission";
    j["base"] = {{"t_span", 10.0}};
    j["vary"] = {{"key", "A"}, {"values", {0.5, 1.0, 2.0}}};

    const auto report = run_command(config_from_json(j));
    CHECK(report.all_passed());
    for (const char* sub : {"run_000", "run_001", "run_002"}) {
        CHECK(fs::exists(dir / sub / "emission.csv"));
        CHECK(fs::exists(dir / sub / "report.json"));
    }

    // Each sub-run only touches its own subdirectory.
    std::size_t top_level_files = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) ++top_level_files;
    CHECK(top_level_files == 1);  // the aggregate report.json

    SUBCASE("sweeping a sweep is rejected") {
        nlohmann::ordered_json bad = j;
        bad["target"] = "sweep";
        CHECK_THROWS_AS(config_from_json(bad), ConfigError);
    }
}

TEST_CASE("verify command is deterministic") {
    const auto dir_a = temp_dir("verify_a");
    const auto dir_b = temp_dir("verify_b");
    nlohmann::ordered_json j;
    j["command"] = "verify";

    auto cfg = config_from_json(j);
    cfg.output_dir = dir_a.string();
    const auto report_a = run_command(cfg);
    CHECK(report_a.all_passed());
    cfg.output_dir = dir_b.string();
    const auto report_b = run_command(cfg);

    for (const auto& name : report_a.produced_files) {
        CHECK(fs::exists(dir_a / name));
        CHECK(read_file(dir_a / name) == read_file(dir_b / name));
    }
    REQUIRE(report_a.checks.size() == report_b.checks.size());
    for (std::size_t i = 0; i < report_a.checks.size(); ++i) {
        CHECK(report_a.checks[i].name == report_b.checks[i].name);
        CHECK(report_a.checks[i].measured == report_b.checks[i].measured);
    }
}

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "risem/error.hpp"
#include "risem/experiment.hpp"
#include "risem/presets.hpp"

using namespace risem;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("default rate grid") {
    const auto grid = default_rate_grid();
    REQUIRE(grid.size() == 50);
    CHECK(grid.front() == doctest::Approx(0.05));
    CHECK(grid.back() == doctest::Approx(10.0));
    for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}

TEST_CASE("preset catalog contents") {
    const auto& presets = list_presets();
    std::set<std::string> names;
    for (const auto& p : presets) names.insert(p.name);
    CHECK(names.size() == presets.size());
    for (const char* n : {"fig1a-N36-M1", "fig1a-N144-M4", "fig1b-N36", "fig1b-N100", "fig1b-N256", "fig1b-N100-iid",
                          "fig1c-lambda4", "fig1c-lambda8", "fig1c-lambda12", "fig1c-iid", "fig2a-N49", "fig2a-N100",
                          "fig2a-N196", "fig2b-N49", "fig2b-N100", "fig2b-N196"}) {
        CAPTURE(n);
        CHECK(names.count(n) == 1);
    }

    const auto& c1 = find_preset("fig1c-lambda8").spec.scenario;
    CHECK(c1.budget.direct_link);
    CHECK(c1.budget.beta_sd_db == -130.0);
    CHECK(c1.kappa == 3.0);
    CHECK(c1.geometry.d_h == doctest::Approx(0.1 / 8));

    const auto& c2 = find_preset("fig2b-N196").spec.scenario;
    CHECK(c2.budget.direct_link);
    CHECK(c2.budget.beta_sd_db == -135.0);
    const auto& gen = std::get<GeneralizedIid>(c2.variant);
    CHECK(gen.direct.num_waves == 1);
    CHECK(10.0 * std::log10(gen.direct.k_factor()) == doctest::Approx(5.0));
    CHECK(gen.ris_in == SpecularSpec{2, 1.0, 0.5, 1.0});
    CHECK(c2.element_count() == 196);

    const auto& b = find_preset("fig1b-N100").spec.scenario;
    CHECK(b.element_count() == 100);
    CHECK(b.m_antennas == 1);
    CHECK(b.geometry.d_h == doctest::Approx(0.1 / 8));
    CHECK(b.kappa == 1.0);
    CHECK(b.budget.beta1_db == -75.0);
    CHECK(b.budget.beta2_db == -75.0);
    CHECK_FALSE(b.budget.direct_link);
    CHECK(b.snr_budget_db == 124.0);
    CHECK(b.sample_count == 100000);

    CHECK_THROWS_AS(find_preset("fig9"), ConfigError);
}

TEST_CASE("every preset round-trips through the config format") {
    for (const auto& p : list_presets()) {
        CAPTURE(p.name);
        CHECK_NOTHROW(p.spec.validate());
        CHECK(experiment_spec_from_json(to_json_string(p.spec)) == p.spec);
        CHECK(scenario_from_json(to_json_string(p.spec.scenario)) == p.spec.scenario);
    }
}

TEST_CASE("spec json rejects unknown keys and bad values") {
    auto text = to_json_string(find_preset("fig1b-N36").spec);
    auto j = nlohmann::json::parse(text);
    j["surprise"] = 1;
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);

    j = nlohmann::json::parse(text);
    j["scenario"]["geometry"]["extra"] = 1;
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);

    j = nlohmann::json::parse(text);
    j["rate_grid"] = {1.0, 0.5};
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);

    j = nlohmann::json::parse(text);
    j["rate_grid"] = {-1.0, 0.5};
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);

    j = nlohmann::json::parse(text);
    j["seed"] = "one";
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);

    CHECK_THROWS_AS(experiment_spec_from_json("{"), ConfigError);
}

TEST_CASE("preset specs cannot be altered through the config file") {
    auto j = nlohmann::json::parse(to_json_string(find_preset("fig1b-N36").spec));
    j["scenario"]["kappa"] = 2.0;
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);
    j = nlohmann::json::parse(to_json_string(find_preset("fig1b-N36").spec));
    j["scenario"]["sample_count"] = 5000;
    CHECK_NOTHROW(experiment_spec_from_json(j.dump()));
    j["preset_name"] = "fig9";
    CHECK_THROWS_AS(experiment_spec_from_json(j.dump()), ConfigError);
}

TEST_CASE("preset overrides") {
    const auto s = resolve_preset("fig1a-N36-M1", {7, 500, NmseDomain::Log10, 2});
    CHECK(s.seed == 7);
    CHECK(s.scenario.sample_count == 500);
    CHECK(s.nmse_domain == NmseDomain::Log10);
    CHECK(s.scenario.m_antennas == 2);
    CHECK_NOTHROW(check_preset_consistency(s));
    CHECK_THROWS_AS(resolve_preset("fig1b-N36", {std::nullopt, std::nullopt, std::nullopt, 2}), ConfigError);
    CHECK_THROWS_AS(resolve_preset("fig1b-N36", {std::nullopt, 0, std::nullopt, std::nullopt}), ConfigError);
}

TEST_CASE("run_experiment is deterministic and well formed") {
    const auto spec = resolve_preset("fig1b-N36", {3, 5000, std::nullopt, std::nullopt});
    const auto a = run_experiment(spec);
    const auto b = run_experiment(spec);
    CHECK(report_json(a) == report_json(b));
    CHECK(a.sample_count == 5000);
    REQUIRE(a.curves.size() == 3);
    CHECK(a.curves[0].method == OutageMethod::MonteCarlo);
    CHECK(a.curves[1].method == OutageMethod::MixtureAnalytic);
    CHECK(a.curves[2].method == OutageMethod::GammaMom);
    for (const auto& c : a.curves) {
        CHECK(c.rate_grid == spec.rate_grid);
        CHECK(c.is_valid());
    }
    CHECK(a.nmse_table.size() == 2);
    CHECK(a.nmse_of(OutageMethod::MixtureAnalytic) <= 1.0);
    CHECK(a.config_digest == config_digest(spec.scenario));

    const auto j = nlohmann::json::parse(report_json(a));
    for (const char* key : {"config", "config_digest", "fitted", "em_trace", "curves", "nmse", "gamma_mom"}) {
        CAPTURE(key);
        CHECK(j.contains(key));
    }
    CHECK(experiment_spec_from_json(j["config"].dump()) == spec);

    auto other = spec;
    other.seed = 4;
    CHECK(report_json(run_experiment(other)) != report_json(a));
}

TEST_CASE("write_report emits json and csv files") {
    const auto spec = resolve_preset("fig2a-N49", {1, 2000, std::nullopt, std::nullopt});
    const auto report = run_experiment(spec);
    const auto dir = std::filesystem::temp_directory_path() / "risem_write_report_test";
    std::filesystem::remove_all(dir);
    write_report(report, dir);
    CHECK(slurp(dir / "report.json") == report_json(report));
    CHECK(std::filesystem::exists(dir / "timing.json"));
    for (const char* m : {"monte-carlo", "mixture-analytic", "gamma-mom"}) {
        const auto csv = slurp(dir / (std::string("curve_") + m + ".csv"));
        CHECK(csv.rfind("r_th,op,ci_halfwidth,method\n", 0) == 0);
        CHECK(csv.find('\r') == std::string::npos);
        CHECK_FALSE(std::regex_search(csv, std::regex(R"(\d[eE][+-]?\d)")));
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("stage errors carry the stage name") {
    auto spec = resolve_preset("fig1b-N36", {1, 5000, std::nullopt, std::nullopt});
    spec.rate_grid = {};
    try {
        (void)run_experiment(spec);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("config") != std::string::npos);
    }
}

TEST_CASE("every preset runs within the scaled time budget") {
    // 60 s at t = 1e5 scales to 6 s at t = 1e4.
    for (const auto& p : list_presets()) {
        CAPTURE(p.name);
        const auto spec = resolve_preset(p.name, {1, 10000, std::nullopt, std::nullopt});
        const auto start = std::chrono::steady_clock::now();
        const auto report = run_experiment(spec);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(seconds < 6.0);
        CHECK(report.sample_count == 10000);
    }
}

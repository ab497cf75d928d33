#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "risem/em.hpp"
#include "risem/outage.hpp"
#include "risem/scenario.hpp"

namespace risem {

/// 50 equally spaced targets on [0.05, 10] b/s/Hz.
std::vector<double> default_rate_grid();

struct ExperimentSpec {
    ScenarioConfig scenario;
    std::vector<double> rate_grid = default_rate_grid();
    std::uint64_t seed = 1;
    std::optional<std::string> preset_name;
    /// Extra comparison curves; only OutageMethod::GammaMom is meaningful.
    std::vector<OutageMethod> baselines;
    NmseDomain nmse_domain = NmseDomain::Linear;

    /// Scenario validity, strictly increasing positive rate grid, known
    /// baselines. Throws ConfigError.
    void validate() const;

    bool operator==(const ExperimentSpec&) const = default;
};

/// JSON document mirroring ExperimentSpec field for field.
std::string to_json_string(const ExperimentSpec& spec);
/// Parses, validates and (for preset specs) checks that the scenario matches
/// the named preset. Unknown keys are rejected.
ExperimentSpec experiment_spec_from_json(std::string_view text);

struct StageTiming {
    double simulate_ms = 0.0;
    double fit_ms = 0.0;
    double evaluate_ms = 0.0;
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::uint64_t config_digest = 0;
    std::size_t sample_count = 0;
    double mean_square = 0.0;  // E[h^2] of the training set
    FitResult fit{};
    std::optional<GammaFit> gamma{};
    /// Monte Carlo reference first, then mixture-analytic, then baselines.
    std::vector<OutageCurve> curves{};
    /// NMSE of each non-reference curve against the Monte Carlo curve.
    std::vector<std::pair<OutageMethod, double>> nmse_table{};
    StageTiming timing{};

    const OutageCurve& curve(OutageMethod method) const;
    double nmse_of(OutageMethod method) const;
};

/// simulate -> fit -> evaluate. Deterministic in (spec, seed): the channel
/// uses stream (seed, 0) and the EM initialization stream (seed, 1).
/// Errors are rethrown as ConfigError / NumericalError prefixed with the
/// failing stage.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// report.json body: everything except wall-clock timing, so equal inputs
/// give byte-identical text.
std::string report_json(const ExperimentReport& report);
std::string timing_json(const ExperimentReport& report);

/// Writes report.json, timing.json and curve_<method>.csv into dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace risem

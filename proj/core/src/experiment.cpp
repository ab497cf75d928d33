#include "risem/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json_io.hpp"
#include "risem/channel.hpp"
#include "risem/error.hpp"
#include "risem/presets.hpp"
#include "summation.hpp"

namespace risem {
namespace {

using detail::Json;

constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kFitStream = 1;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

// Runs one pipeline stage, prefixing any failure with the stage name.
template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(name) + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(std::string(name) + ": " + e.what());
    }
}

Json spec_to_json(const ExperimentSpec& spec) {
    Json baselines = Json::array();
    for (auto b : spec.baselines) baselines.push_back(std::string(to_string(b)));
    return {{"scenario", detail::to_json(spec.scenario)},
            {"rate_grid", spec.rate_grid},
            {"seed", spec.seed},
            {"preset_name", spec.preset_name ? Json(*spec.preset_name) : Json(nullptr)},
            {"baselines", baselines},
            {"nmse_domain", std::string(to_string(spec.nmse_domain))}};
}

Json curve_to_json(const OutageCurve& curve) {
    return {{"method", std::string(to_string(curve.method))},
            {"r_th", curve.rate_grid},
            {"op", curve.op_values},
            {"ci_halfwidth", curve.ci_halfwidth}};
}

Json k_factor_json(const SpecularSpec& s) {
    const double k = s.k_factor();
    return std::isfinite(k) ? Json(k) : Json(nullptr);
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<double> default_rate_grid() {
    constexpr std::size_t kPoints = 50;
    constexpr double kLow = 0.05;
    constexpr double kHigh = 10.0;
    std::vector<double> grid(kPoints);
    for (std::size_t k = 0; k < kPoints; ++k) {
        grid[k] = kLow + (kHigh - kLow) * static_cast<double>(k) / (kPoints - 1.0);
    }
    return grid;
}

void ExperimentSpec::validate() const {
    scenario.validate();
    if (rate_grid.empty()) throw ConfigError("rate_grid must not be empty");
    for (std::size_t k = 0; k < rate_grid.size(); ++k) {
        if (!(rate_grid[k] > 0.0) || !std::isfinite(rate_grid[k])) {
            throw ConfigError("rate_grid values must be positive and finite");
        }
        if (k > 0 && !(rate_grid[k] > rate_grid[k - 1])) {
            throw ConfigError("rate_grid must be strictly increasing");
        }
    }
    for (auto b : baselines) {
        if (b != OutageMethod::GammaMom) {
            throw ConfigError("baselines may only contain gamma-mom");
        }
    }
}

std::string to_json_string(const ExperimentSpec& spec) { return spec_to_json(spec).dump(2); }

ExperimentSpec experiment_spec_from_json(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    detail::check_keys(j, "config",
                       {"scenario", "rate_grid", "seed", "preset_name", "baselines", "nmse_domain"},
                       {"scenario"});
    ExperimentSpec spec;
    spec.scenario = detail::scenario_from_json(j.at("scenario"));
    if (j.contains("rate_grid")) {
        spec.rate_grid = detail::read<std::vector<double>>(j, "config", "rate_grid");
    }
    if (j.contains("seed")) spec.seed = detail::read<std::uint64_t>(j, "config", "seed");
    if (j.contains("preset_name") && !j.at("preset_name").is_null()) {
        spec.preset_name = detail::read<std::string>(j, "config", "preset_name");
    }
    if (j.contains("baselines")) {
        for (const auto& name : detail::read<std::vector<std::string>>(j, "config", "baselines")) {
            spec.baselines.push_back(outage_method_from_string(name));
        }
    }
    if (j.contains("nmse_domain")) {
        spec.nmse_domain =
            nmse_domain_from_string(detail::read<std::string>(j, "config", "nmse_domain"));
    }
    spec.validate();
    check_preset_consistency(spec);
    return spec;
}

const OutageCurve& ExperimentReport::curve(OutageMethod method) const {
    for (const auto& c : curves) {
        if (c.method == method) return c;
    }
    throw ConfigError("report has no '" + std::string(to_string(method)) + "' curve");
}

double ExperimentReport::nmse_of(OutageMethod method) const {
    for (const auto& [m, v] : nmse_table) {
        if (m == method) return v;
    }
    throw ConfigError("report has no NMSE for '" + std::string(to_string(method)) + "'");
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    stage("config", [&] {
        spec.validate();
        check_preset_consistency(spec);
    });

    ExperimentReport report{.spec = spec};
    report.config_digest = config_digest(spec.scenario);
    const double rho_db = spec.scenario.snr_budget_db;

    auto t0 = std::chrono::steady_clock::now();
    const ChannelSampleSet samples = stage("simulate", [&] {
        return simulate_equivalent_channel(RngStream(spec.seed, kChannelStream), spec.scenario);
    });
    report.timing.simulate_ms = elapsed_ms(t0);
    report.sample_count = samples.samples.size();
    detail::CompensatedSum sq;
    for (double h : samples.samples) sq.add(h * h);
    report.mean_square = sq.value() / static_cast<double>(samples.samples.size());

    t0 = std::chrono::steady_clock::now();
    report.fit = stage("fit", [&] {
        RngStream rng(spec.seed, kFitStream);
        return fit(samples.samples, rng);
    });
    report.timing.fit_ms = elapsed_ms(t0);

    t0 = std::chrono::steady_clock::now();
    stage("evaluate", [&] {
        report.curves.push_back(empirical_outage_curve(samples.samples, rho_db, spec.rate_grid));
        report.curves.push_back(mixture_outage_curve(report.fit.mixture, rho_db, spec.rate_grid));
        for (auto b : spec.baselines) {
            if (b == OutageMethod::GammaMom && !report.gamma) {
                report.gamma = gamma_mom_baseline(samples.samples);
                report.curves.push_back(gamma_outage_curve(*report.gamma, rho_db, spec.rate_grid));
            }
        }
        const OutageCurve& reference = report.curves.front();
        for (std::size_t k = 1; k < report.curves.size(); ++k) {
            report.nmse_table.emplace_back(report.curves[k].method,
                                           nmse(reference, report.curves[k], spec.nmse_domain));
        }
    });
    report.timing.evaluate_ms = elapsed_ms(t0);
    return report;
}

std::string report_json(const ExperimentReport& report) {
    const auto& c = report.fit.mixture.components;
    const auto& trace = report.fit.trace;
    Json fitted = {{"omega1", c[0].weight}, {"m1", c[0].shape}, {"Omega1", c[0].spread},
                   {"omega2", c[1].weight}, {"m2", c[1].shape}, {"Omega2", c[1].spread},
                   {"iterations", trace.iterations}, {"converged", trace.converged}};
    Json em = {{"iterations", trace.iterations},
               {"converged", trace.converged},
               {"rel_change_spread", trace.rel_change_spread},
               {"rel_change_shape", trace.rel_change_shape},
               {"underflow_samples", trace.underflow_samples},
               {"log_likelihood", trace.log_likelihood_history.empty()
                                      ? Json(nullptr)
                                      : Json(trace.log_likelihood_history.back())}};
    Json curves = Json::array();
    for (const auto& curve : report.curves) curves.push_back(curve_to_json(curve));
    Json nmse_table = Json::object();
    for (const auto& [method, value] : report.nmse_table) {
        nmse_table[std::string(to_string(method))] = value;
    }

    Json out = {{"config", spec_to_json(report.spec)},
                {"config_digest", hex64(report.config_digest)},
                {"samples", {{"count", report.sample_count}, {"mean_square", report.mean_square}}},
                {"fitted", fitted},
                {"em_trace", em},
                {"curves", curves},
                {"nmse", {{"domain", std::string(to_string(report.spec.nmse_domain))},
                          {"reference", "monte-carlo"},
                          {"values", nmse_table}}}};
    if (report.gamma) {
        out["gamma_mom"] = {{"shape", report.gamma->shape}, {"scale", report.gamma->scale}};
    }
    if (const auto* gen = std::get_if<GeneralizedIid>(&report.spec.scenario.variant)) {
        out["implied_k_factor"] = {{"ris_in", k_factor_json(gen->ris_in)},
                                   {"ris_out", k_factor_json(gen->ris_out)},
                                   {"direct", k_factor_json(gen->direct)}};
    }
    return out.dump(2) + "\n";
}

std::string timing_json(const ExperimentReport& report) {
    Json t = {{"simulate_ms", report.timing.simulate_ms},
              {"fit_ms", report.timing.fit_ms},
              {"evaluate_ms", report.timing.evaluate_ms}};
    return t.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
    write_file(dir / "report.json", report_json(report));
    write_file(dir / "timing.json", timing_json(report));
    for (const auto& curve : report.curves) {
        write_file(dir / ("curve_" + std::string(to_string(curve.method)) + ".csv"),
                   to_csv(curve));
    }
}

}  // namespace risem

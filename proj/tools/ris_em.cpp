// ris-em: simulate the RIS equivalent channel, fit the Nakagami-m mixture and
// compare outage curves.
//
//   ris-em list-presets
//   ris-em preset <name> [--seed S] [--samples T] [--out-dir D] [--nmse-domain linear|log10]
//   ris-em run <config.json> [same flags]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure
// (component collapse, EM non-convergence).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "risem/error.hpp"
#include "risem/experiment.hpp"
#include "risem/presets.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::string out_dir = "out";
    std::optional<std::string> nmse_domain;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "64-bit seed for all random streams");
    cmd->add_option("--samples", flags.samples, "number of channel realizations t")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out-dir", flags.out_dir, "directory for report.json and curve CSVs");
    cmd->add_option("--nmse-domain", flags.nmse_domain, "NMSE domain")
        ->check(CLI::IsMember({"linear", "log10"}));
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw risem::ConfigError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int execute(const risem::ExperimentSpec& spec, const std::string& out_dir) {
    const risem::ExperimentReport report = risem::run_experiment(spec);
    risem::write_report(report, out_dir);

    const auto& fitted = report.fit.mixture.components;
    std::printf("fitted: w=(%.6g, %.6g) m=(%.6g, %.6g) Omega=(%.6g, %.6g)\n", fitted[0].weight,
                fitted[1].weight, fitted[0].shape, fitted[1].shape, fitted[0].spread,
                fitted[1].spread);
    std::printf("EM: %zu iterations, %s\n", report.fit.trace.iterations,
                report.fit.trace.converged ? "converged" : "NOT converged");
    for (const auto& [method, value] : report.nmse_table) {
        std::printf("NMSE[%s] (%s) = %.6f\n", std::string(risem::to_string(method)).c_str(),
                    std::string(risem::to_string(spec.nmse_domain)).c_str(), value);
    }
    std::printf("timing: simulate %.0f ms, fit %.0f ms, evaluate %.0f ms\n",
                report.timing.simulate_ms, report.timing.fit_ms, report.timing.evaluate_ms);
    std::printf("wrote %s\n", out_dir.c_str());
    if (!report.fit.trace.converged) {
        std::fprintf(stderr, "error: EM did not converge within the iteration budget\n");
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS equivalent-channel simulation and Nakagami-m mixture fitting"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list-presets", "print the preset catalog");

    CommonFlags preset_flags;
    std::string preset_name;
    std::optional<std::size_t> antennas;
    bool print_config = false;
    auto* preset_cmd = app.add_subcommand("preset", "run a named figure configuration");
    preset_cmd->add_option("name", preset_name, "preset name (see list-presets)")->required();
    preset_cmd->add_option("--antennas", antennas, "transmit antennas M (fig1a presets only)")
        ->check(CLI::PositiveNumber);
    preset_cmd->add_flag("--print-config", print_config,
                         "print the resolved config.json and exit");
    add_common(preset_cmd, preset_flags);

    CommonFlags run_flags;
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config.json file");
    run_cmd->add_option("config", config_path, "experiment configuration (JSON)")->required();
    add_common(run_cmd, run_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*list_cmd) {
            for (const auto& p : risem::list_presets()) {
                std::printf("%-16s %s\n", p.name.c_str(), p.description.c_str());
            }
            return kExitOk;
        }
        if (*preset_cmd) {
            risem::PresetOverrides overrides;
            overrides.seed = preset_flags.seed;
            overrides.samples = preset_flags.samples;
            overrides.antennas = antennas;
            if (preset_flags.nmse_domain) {
                overrides.nmse_domain = risem::nmse_domain_from_string(*preset_flags.nmse_domain);
            }
            const risem::ExperimentSpec spec = risem::resolve_preset(preset_name, overrides);
            if (print_config) {
                std::printf("%s\n", risem::to_json_string(spec).c_str());
                return kExitOk;
            }
            return execute(spec, preset_flags.out_dir);
        }
        risem::ExperimentSpec spec = risem::experiment_spec_from_json(read_text(config_path));
        if (run_flags.seed) spec.seed = *run_flags.seed;
        if (run_flags.samples) spec.scenario.sample_count = *run_flags.samples;
        if (run_flags.nmse_domain) {
            spec.nmse_domain = risem::nmse_domain_from_string(*run_flags.nmse_domain);
        }
        return execute(spec, run_flags.out_dir);
    } catch (const risem::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const risem::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
}

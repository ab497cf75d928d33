#include "risem/presets.hpp"

#include <algorithm>

#include "risem/error.hpp"

namespace risem {
namespace {

constexpr double kWavelength = 0.1;  // 3 GHz carrier
constexpr double kRhoDb = 124.0;     // 30 dBm over 10 MHz, 10 dB noise figure

ScenarioConfig correlated_base(std::size_t side, double spacing, bool correlated) {
    ScenarioConfig c;
    c.geometry = RisGeometry::square(side, spacing, kWavelength);
    c.budget = LinkBudget{-75.0, -75.0, -130.0, false};
    c.m_antennas = 1;
    c.kappa = 1.0;
    c.variant = CorrelatedRayleigh{correlated};
    c.snr_budget_db = kRhoDb;
    c.sample_count = 100000;
    return c;
}

ScenarioConfig generalized_base(std::size_t side, bool direct) {
    ScenarioConfig c;
    c.geometry = RisGeometry::square(side, kWavelength / 2.0, kWavelength);
    c.budget = LinkBudget{-55.0, -55.0, -135.0, direct};
    c.m_antennas = 1;
    c.kappa = 1.0;
    const SpecularSpec twdp{2, 1.0, 0.5, 1.0};
    const SpecularSpec direct_spec =
        direct ? SpecularSpec::from_k_factor(1, 5.0, 0.5, 1.0) : SpecularSpec::rayleigh(1.0);
    c.variant = GeneralizedIid{twdp, twdp, direct_spec};
    c.snr_budget_db = kRhoDb;
    c.sample_count = 100000;
    return c;
}

PresetInfo make(std::string name, std::string description, ScenarioConfig scenario) {
    ExperimentSpec spec;
    spec.scenario = std::move(scenario);
    spec.preset_name = name;
    spec.baselines = {OutageMethod::GammaMom};
    return PresetInfo{std::move(name), std::move(description), std::move(spec)};
}

std::vector<PresetInfo> build_catalog() {
    std::vector<PresetInfo> out;
    const double lambda8 = kWavelength / 8.0;

    for (std::size_t side : {6, 12}) {
        for (std::size_t m : {1, 2, 4}) {
            ScenarioConfig c = correlated_base(side, lambda8, true);
            c.m_antennas = m;
            const std::size_t n = side * side;
            out.push_back(make("fig1a-N" + std::to_string(n) + "-M" + std::to_string(m),
                               "correlated Rayleigh, no direct link, N=" + std::to_string(n) +
                                   ", M=" + std::to_string(m) + ", d=lambda/8, kappa=1",
                               c));
        }
    }
    for (std::size_t side : {6, 10, 16}) {
        const std::size_t n = side * side;
        out.push_back(make("fig1b-N" + std::to_string(n),
                           "correlated Rayleigh, no direct link, N=" + std::to_string(n) +
                               ", M=1, d=lambda/8, kappa=1",
                           correlated_base(side, lambda8, true)));
        out.push_back(make("fig1b-N" + std::to_string(n) + "-iid",
                           "i.i.d. Rayleigh reference, no direct link, N=" + std::to_string(n) +
                               ", M=1, kappa=1",
                           correlated_base(side, lambda8, false)));
    }
    for (int divisor : {4, 8, 12}) {
        ScenarioConfig c = correlated_base(10, kWavelength / divisor, true);
        c.budget.direct_link = true;
        c.kappa = 3.0;
        out.push_back(make("fig1c-lambda" + std::to_string(divisor),
                           "correlated Rayleigh with direct link (beta_sd=-130 dB), N=100, M=1, "
                           "d=lambda/" + std::to_string(divisor) + ", kappa=3",
                           c));
    }
    {
        ScenarioConfig c = correlated_base(10, lambda8, false);
        c.budget.direct_link = true;
        c.kappa = 3.0;
        out.push_back(make("fig1c-iid",
                           "i.i.d. Rayleigh with direct link (beta_sd=-130 dB), N=100, M=1, kappa=3",
                           c));
    }
    for (bool direct : {false, true}) {
        for (std::size_t side : {7, 10, 14}) {
            const std::size_t n = side * side;
            out.push_back(make(std::string(direct ? "fig2b" : "fig2a") + "-N" + std::to_string(n),
                               std::string("multi-wave links (L=2, V1=1, alpha=0.5, Omega0=1), ") +
                                   (direct ? "Rician direct link (K=5 dB, beta_sd=-135 dB)"
                                           : "no direct link") +
                                   ", N=" + std::to_string(n) + ", d=lambda/2, kappa=1",
                               generalized_base(side, direct)));
        }
    }
    return out;
}

bool is_fig1a(std::string_view name) { return name.starts_with("fig1a-"); }

}  // namespace

const std::vector<PresetInfo>& list_presets() {
    static const std::vector<PresetInfo> catalog = build_catalog();
    return catalog;
}

const PresetInfo& find_preset(std::string_view name) {
    const auto& catalog = list_presets();
    const auto it = std::find_if(catalog.begin(), catalog.end(),
                                 [&](const PresetInfo& p) { return p.name == name; });
    if (it == catalog.end()) throw ConfigError("unknown preset '" + std::string(name) + "'");
    return *it;
}

ExperimentSpec resolve_preset(std::string_view name, const PresetOverrides& overrides) {
    ExperimentSpec spec = find_preset(name).spec;
    if (overrides.seed) spec.seed = *overrides.seed;
    if (overrides.samples) spec.scenario.sample_count = *overrides.samples;
    if (overrides.nmse_domain) spec.nmse_domain = *overrides.nmse_domain;
    if (overrides.antennas) {
        if (!is_fig1a(name)) {
            throw ConfigError("preset '" + std::string(name) +
                              "' does not accept an antenna override (fig1a presets only)");
        }
        spec.scenario.m_antennas = *overrides.antennas;
    }
    spec.validate();
    return spec;
}

void check_preset_consistency(const ExperimentSpec& spec) {
    if (!spec.preset_name) return;
    const PresetInfo& preset = find_preset(*spec.preset_name);
    ScenarioConfig expected = preset.spec.scenario;
    expected.sample_count = spec.scenario.sample_count;
    if (is_fig1a(preset.name)) expected.m_antennas = spec.scenario.m_antennas;
    if (!(expected == spec.scenario)) {
        throw ConfigError("scenario differs from preset '" + preset.name +
                          "'; presets do not accept scenario overrides");
    }
}

}  // namespace risem

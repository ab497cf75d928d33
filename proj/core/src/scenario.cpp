#include "risem/scenario.hpp"

#include <cmath>
#include <limits>

#include "json_io.hpp"
#include "risem/error.hpp"

namespace risem {
namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

RisGeometry RisGeometry::square(std::size_t side, double spacing, double wavelength) {
    return RisGeometry{side, side, spacing, spacing, wavelength};
}

void RisGeometry::validate() const {
    require(n_h >= 1 && n_v >= 1, "geometry: n_h and n_v must be at least 1");
    require(finite(d_h) && finite(d_v) && d_h > 0.0 && d_v > 0.0,
            "geometry: element spacing d_h, d_v must be positive");
    require(finite(wavelength) && wavelength > 0.0, "geometry: wavelength must be positive");
}

void LinkBudget::validate() const {
    for (double db : {beta1_db, beta2_db, beta_sd_db}) {
        require(finite(db) && db_to_linear(db) > 0.0,
                "budget: attenuations must be finite dB values with positive linear power");
    }
}

double SpecularSpec::specular_power() const noexcept {
    if (num_waves == 0) return 0.0;
    return v1 * v1 * (1.0 + (num_waves - 1.0) * alpha * alpha);
}

double SpecularSpec::k_factor() const noexcept {
    const double specular = specular_power();
    if (omega0 == 0.0) return specular == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return specular / omega0;
}

void SpecularSpec::validate() const {
    require(finite(v1) && v1 >= 0.0, "specular: v1 must be non-negative");
    require(finite(omega0) && omega0 >= 0.0, "specular: omega0 must be non-negative");
    require(finite(alpha) && alpha > 0.0 && alpha < 1.0, "specular: alpha must lie in (0, 1)");
    require(mean_power() > 0.0, "specular: link carries no power");
}

SpecularSpec SpecularSpec::rayleigh(double omega0) { return SpecularSpec{0, 0.0, 0.5, omega0}; }

SpecularSpec SpecularSpec::from_k_factor(unsigned num_waves, double k_db, double alpha,
                                         double omega0) {
    SpecularSpec s{num_waves, 0.0, alpha, omega0};
    if (num_waves > 0) {
        const double spread = 1.0 + (num_waves - 1.0) * alpha * alpha;
        s.v1 = std::sqrt(db_to_linear(k_db) * omega0 / spread);
    }
    return s;
}

void ScenarioConfig::validate() const {
    geometry.validate();
    budget.validate();
    require(m_antennas >= 1, "scenario: m_antennas must be at least 1");
    require(finite(kappa) && kappa >= 0.0, "scenario: kappa must be finite and non-negative");
    require(finite(snr_budget_db), "scenario: snr_budget_db must be finite");
    require(sample_count >= 1, "scenario: sample_count must be at least 1");
    if (const auto* g = std::get_if<GeneralizedIid>(&variant)) {
        g->ris_in.validate();
        g->ris_out.validate();
        g->direct.validate();
    }
}

std::string to_json_string(const ScenarioConfig& config) {
    return detail::to_json(config).dump();
}

ScenarioConfig scenario_from_json(std::string_view text) {
    detail::Json j;
    try {
        j = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return detail::scenario_from_json(j);
}

std::uint64_t config_digest(const ScenarioConfig& config) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (unsigned char c : to_json_string(config)) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

namespace detail {

void check_keys(const Json& object, std::string_view where,
                std::initializer_list<std::string_view> allowed,
                std::initializer_list<std::string_view> required) {
    if (!object.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
    for (auto r : required) {
        if (!object.contains(std::string(r))) {
            throw ConfigError(std::string(where) + ": missing key '" + std::string(r) + "'");
        }
    }
}

Json to_json(const RisGeometry& g) {
    return {{"n_h", g.n_h}, {"n_v", g.n_v}, {"d_h", g.d_h}, {"d_v", g.d_v},
            {"wavelength", g.wavelength}};
}

Json to_json(const LinkBudget& b) {
    return {{"beta1_db", b.beta1_db}, {"beta2_db", b.beta2_db}, {"beta_sd_db", b.beta_sd_db},
            {"direct_link", b.direct_link}};
}

Json to_json(const SpecularSpec& s) {
    return {{"num_waves", s.num_waves}, {"v1", s.v1}, {"alpha", s.alpha}, {"omega0", s.omega0}};
}

Json to_json(const ScenarioConfig& c) {
    Json variant;
    if (const auto* corr = std::get_if<CorrelatedRayleigh>(&c.variant)) {
        variant = {{"type", "correlated_rayleigh"},
                   {"spatially_correlated", corr->spatially_correlated}};
    } else {
        const auto& gen = std::get<GeneralizedIid>(c.variant);
        variant = {{"type", "generalized_iid"},
                   {"spec_ris_in", to_json(gen.ris_in)},
                   {"spec_ris_out", to_json(gen.ris_out)},
                   {"spec_direct", to_json(gen.direct)}};
    }
    return {{"geometry", to_json(c.geometry)},
            {"budget", to_json(c.budget)},
            {"m_antennas", c.m_antennas},
            {"kappa", c.kappa},
            {"variant", variant},
            {"snr_budget_db", c.snr_budget_db},
            {"sample_count", c.sample_count}};
}

RisGeometry geometry_from_json(const Json& j) {
    check_keys(j, "geometry", {"n_h", "n_v", "d_h", "d_v", "wavelength"},
               {"n_h", "n_v", "d_h", "d_v", "wavelength"});
    RisGeometry g;
    g.n_h = read<std::size_t>(j, "geometry", "n_h");
    g.n_v = read<std::size_t>(j, "geometry", "n_v");
    g.d_h = read<double>(j, "geometry", "d_h");
    g.d_v = read<double>(j, "geometry", "d_v");
    g.wavelength = read<double>(j, "geometry", "wavelength");
    return g;
}

LinkBudget budget_from_json(const Json& j) {
    check_keys(j, "budget", {"beta1_db", "beta2_db", "beta_sd_db", "direct_link"},
               {"beta1_db", "beta2_db", "beta_sd_db", "direct_link"});
    LinkBudget b;
    b.beta1_db = read<double>(j, "budget", "beta1_db");
    b.beta2_db = read<double>(j, "budget", "beta2_db");
    b.beta_sd_db = read<double>(j, "budget", "beta_sd_db");
    b.direct_link = read<bool>(j, "budget", "direct_link");
    return b;
}

SpecularSpec specular_from_json(const Json& j, std::string_view where) {
    check_keys(j, where, {"num_waves", "v1", "alpha", "omega0"},
               {"num_waves", "v1", "alpha", "omega0"});
    SpecularSpec s;
    s.num_waves = read<unsigned>(j, where, "num_waves");
    s.v1 = read<double>(j, where, "v1");
    s.alpha = read<double>(j, where, "alpha");
    s.omega0 = read<double>(j, where, "omega0");
    return s;
}

ScenarioConfig scenario_from_json(const Json& j) {
    check_keys(j, "scenario",
               {"geometry", "budget", "m_antennas", "kappa", "variant", "snr_budget_db",
                "sample_count"},
               {"geometry", "budget", "m_antennas", "kappa", "variant", "snr_budget_db"});
    ScenarioConfig c;
    c.geometry = geometry_from_json(j.at("geometry"));
    c.budget = budget_from_json(j.at("budget"));
    c.m_antennas = read<std::size_t>(j, "scenario", "m_antennas");
    c.kappa = read<double>(j, "scenario", "kappa");
    c.snr_budget_db = read<double>(j, "scenario", "snr_budget_db");
    if (j.contains("sample_count")) c.sample_count = read<std::size_t>(j, "scenario", "sample_count");

    const Json& v = j.at("variant");
    if (!v.is_object() || !v.contains("type")) {
        throw ConfigError("scenario.variant: expected an object with a 'type' key");
    }
    const auto type = read<std::string>(v, "scenario.variant", "type");
    if (type == "correlated_rayleigh") {
        check_keys(v, "scenario.variant", {"type", "spatially_correlated"}, {"type"});
        CorrelatedRayleigh corr;
        if (v.contains("spatially_correlated")) {
            corr.spatially_correlated = read<bool>(v, "scenario.variant", "spatially_correlated");
        }
        c.variant = corr;
    } else if (type == "generalized_iid") {
        check_keys(v, "scenario.variant", {"type", "spec_ris_in", "spec_ris_out", "spec_direct"},
                   {"type", "spec_ris_in", "spec_ris_out", "spec_direct"});
        c.variant = GeneralizedIid{specular_from_json(v.at("spec_ris_in"), "spec_ris_in"),
                                   specular_from_json(v.at("spec_ris_out"), "spec_ris_out"),
                                   specular_from_json(v.at("spec_direct"), "spec_direct")};
    } else {
        throw ConfigError("scenario.variant: unknown type '" + type + "'");
    }
    c.validate();
    return c;
}

}  // namespace detail
}  // namespace risem

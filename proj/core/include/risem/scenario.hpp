#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace risem {

/// Power-domain dB to linear.
double db_to_linear(double db);

/// Rectangular RIS: n_h elements per row, n_v per column, element pitch
/// d_h x d_v metres, carrier wavelength in metres.
struct RisGeometry {
    std::size_t n_h = 1;
    std::size_t n_v = 1;
    double d_h = 0.0;
    double d_v = 0.0;
    double wavelength = 0.1;

    std::size_t element_count() const noexcept { return n_h * n_v; }
    double element_area() const noexcept { return d_h * d_v; }
    void validate() const;

    /// Square n x n array with equal spacing.
    static RisGeometry square(std::size_t side, double spacing, double wavelength = 0.1);

    bool operator==(const RisGeometry&) const = default;
};

/// Average link attenuations in dB.
///
/// For the correlated Rayleigh variant beta1_db and beta2_db are the
/// combined element-area gains A*beta1 and A*beta2. For the generalized
/// variant they are the bare beta values and the S->RIS link is scaled by
/// the element area from the geometry.
struct LinkBudget {
    double beta1_db = -75.0;
    double beta2_db = -75.0;
    double beta_sd_db = -130.0;
    bool direct_link = false;

    void validate() const;
    bool operator==(const LinkBudget&) const = default;
};

/// Multi-wave fading: num_waves specular components of amplitude v1,
/// alpha*v1, alpha*v1, ... with uniform phases plus diffuse CN(0, omega0).
struct SpecularSpec {
    unsigned num_waves = 0;
    double v1 = 0.0;
    double alpha = 0.5;
    double omega0 = 1.0;

    double amplitude(unsigned wave) const noexcept { return wave == 0 ? v1 : alpha * v1; }
    /// Omega_L = v1^2 (1 + (L-1) alpha^2), zero for L = 0.
    double specular_power() const noexcept;
    /// K_L = Omega_L / Omega_0 (infinite when there is no diffuse part).
    double k_factor() const noexcept;
    double mean_power() const noexcept { return omega0 + specular_power(); }
    void validate() const;

    static SpecularSpec rayleigh(double omega0 = 1.0);
    /// Resolves v1 from K (dB) so that Omega_L / Omega_0 = K.
    static SpecularSpec from_k_factor(unsigned num_waves, double k_db, double alpha,
                                      double omega0);

    bool operator==(const SpecularSpec&) const = default;
};

/// Spatially correlated Rayleigh links sharing one sinc correlation matrix.
/// spatially_correlated = false replaces that matrix with the identity.
struct CorrelatedRayleigh {
    bool spatially_correlated = true;
    bool operator==(const CorrelatedRayleigh&) const = default;
};

/// Independent multi-wave links.
struct GeneralizedIid {
    SpecularSpec ris_in;   // S -> RIS (G)
    SpecularSpec ris_out;  // RIS -> D (h2)
    SpecularSpec direct;   // S -> D
    bool operator==(const GeneralizedIid&) const = default;
};

using ScenarioVariant = std::variant<CorrelatedRayleigh, GeneralizedIid>;

struct ScenarioConfig {
    RisGeometry geometry;
    LinkBudget budget;
    std::size_t m_antennas = 1;
    /// Von Mises concentration of the residual phase errors.
    double kappa = 1.0;
    ScenarioVariant variant = CorrelatedRayleigh{};
    /// P_T / sigma^2 in dB.
    double snr_budget_db = 124.0;
    std::size_t sample_count = 100000;

    std::size_t element_count() const noexcept { return geometry.element_count(); }
    bool is_correlated_rayleigh() const noexcept {
        return std::holds_alternative<CorrelatedRayleigh>(variant);
    }
    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Canonical JSON text (sorted keys, no whitespace).
std::string to_json_string(const ScenarioConfig& config);
/// Parses and validates; unknown keys are rejected with ConfigError.
ScenarioConfig scenario_from_json(std::string_view text);

/// 64-bit FNV-1a over the canonical JSON text.
std::uint64_t config_digest(const ScenarioConfig& config);

}  // namespace risem

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "risem/channel.hpp"
#include "risem/nakagami.hpp"

namespace risem {

enum class OutageMethod { MixtureAnalytic, MonteCarlo, GammaMom };

std::string_view to_string(OutageMethod method) noexcept;
/// Accepts "mixture-analytic", "monte-carlo", "gamma-mom".
OutageMethod outage_method_from_string(std::string_view name);

/// OP versus target rate. ci_halfwidth is zero for analytic curves.
struct OutageCurve {
    std::vector<double> rate_grid;
    std::vector<double> op_values;
    std::vector<double> ci_halfwidth;
    OutageMethod method = OutageMethod::MonteCarlo;

    std::size_t size() const noexcept { return rate_grid.size(); }
    /// Non-decreasing OP within [0, 1] and consistent lengths.
    bool is_valid() const noexcept;
};

/// SNR threshold 2^r_th - 1.
double rate_to_snr_threshold(double r_th) noexcept;

/// OP = sum_i w_i P(m_i, m_i (2^r_th - 1) / (Omega_i rho)).
double outage_analytic(const NakagamiMixture& mixture, double rho_db, double r_th);

struct EmpiricalOutage {
    double op = 0.0;
    /// Wilson 95% half-width; with no outages, the one-sided 95% upper bound.
    double ci_halfwidth = 0.0;
    std::size_t outages = 0;
    std::size_t trials = 0;
};

/// Fraction of samples with log2(1 + rho h^2) < r_th.
EmpiricalOutage outage_empirical(std::span<const double> samples, double rho_db, double r_th);
EmpiricalOutage outage_empirical(const ChannelSampleSet& samples, double rho_db, double r_th);

/// Wilson score interval half-width for k successes in n trials.
double wilson_halfwidth(std::size_t k, std::size_t n) noexcept;

OutageCurve mixture_outage_curve(const NakagamiMixture& mixture, double rho_db,
                                 std::span<const double> rate_grid);
OutageCurve empirical_outage_curve(std::span<const double> samples, double rho_db,
                                   std::span<const double> rate_grid);

enum class NmseDomain { Linear, Log10 };

std::string_view to_string(NmseDomain domain) noexcept;
NmseDomain nmse_domain_from_string(std::string_view name);

/// 1 - sum (ref - cand)^2 / sum (ref - mean(ref))^2 over the OP values.
/// The log10 domain drops grid points where either curve is zero. Throws
/// ConfigError for mismatched grids and NumericalError for a constant
/// reference.
double nmse(const OutageCurve& reference, const OutageCurve& candidate,
            NmseDomain domain = NmseDomain::Linear);

/// Two-moment Gamma fit to h^2.
struct GammaFit {
    double shape = 1.0;  // k = mean^2 / var
    double scale = 1.0;  // theta = var / mean

    /// P(k, (2^r_th - 1) / (rho theta)).
    double outage(double rho_db, double r_th) const;
};

/// Throws NumericalError when h^2 has zero sample variance or fewer than
/// two samples are given.
GammaFit gamma_mom_baseline(std::span<const double> samples);
OutageCurve gamma_outage_curve(const GammaFit& fit, double rho_db,
                               std::span<const double> rate_grid);

/// CSV with header "r_th,op,ci_halfwidth,method", fixed-point values,
/// LF line endings.
std::string to_csv(const OutageCurve& curve);

/// Shortest round-trip decimal (non-exponent) representation.
std::string format_decimal(double value);

}  // namespace risem

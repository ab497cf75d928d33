#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "risem/rng.hpp"
#include "risem/sampling.hpp"
#include "risem/scenario.hpp"

namespace risem {

/// One draw of every link: G is N x M (column q holds g_q), h2 has N
/// entries and hsd has M entries (all zero when the direct path is blocked).
struct LinkRealization {
    Eigen::MatrixXcd g;
    Eigen::VectorXcd h2;
    Eigen::VectorXcd hsd;
};

/// t realizations of the equivalent magnitude channel, stored by
/// realization index, plus the identity of the stream that produced them.
struct ChannelSampleSet {
    std::vector<double> samples;
    std::uint64_t config_digest = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
};

/// sinc(w) = sin(pi w) / (pi w), sinc(0) = 1, and exactly 0 at nonzero integers.
double sinc(double w);

/// Isotropic-scattering correlation: entry (a, b) is sinc(2 |u_a - u_b| / lambda)
/// with element a at column a mod n_h and row a / n_h of the array.
CorrelationMatrix build_correlation_matrix(const RisGeometry& geometry);

/// Correlation used by a correlated-Rayleigh scenario (identity when the
/// variant disables spatial correlation).
CorrelationMatrix scenario_correlation(const ScenarioConfig& config);

LinkRealization draw_correlated_rayleigh_links(RngStream& rng, const ScenarioConfig& config,
                                               const CorrelationMatrix& corr);
LinkRealization draw_correlated_rayleigh_links(RngStream& rng, const ScenarioConfig& config);

/// Every coefficient is sqrt(beta) * (sum_l V_l exp(j theta_l) + Z); the
/// S->RIS coefficients additionally carry the element area.
LinkRealization draw_generalized_links(RngStream& rng, const ScenarioConfig& config);

/// Scalar multi-wave coefficient with unit beta.
Complex draw_multiwave_coefficient(RngStream& rng, const SpecularSpec& spec);

/// RIS phases phi_n = arg(hsd_q) - arg(g_qn) - arg(h2_n) + Theta_n with
/// Theta_n ~ VonMises(0, kappa). reference_antenna is zero-based.
std::vector<double> apply_phase_design(RngStream& rng, const LinkRealization& links, double kappa,
                                       std::size_t reference_antenna = 0);

/// || h2^T diag(exp(j phi)) G + hsd^T ||: the received amplitude under MRT.
double equivalent_magnitude(const LinkRealization& links, std::span<const double> phases);

/// Draws config.sample_count realizations. Realization j uses rng.split(j),
/// so output is independent of the worker count (RIS_EM_THREADS).
ChannelSampleSet simulate_equivalent_channel(const RngStream& rng, const ScenarioConfig& config);

/// gamma = 10^(rho_db / 10) * h^2.
double snr_from_magnitude(double h, double rho_db);

}  // namespace risem

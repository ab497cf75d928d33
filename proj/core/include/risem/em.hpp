#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "risem/error.hpp"
#include "risem/nakagami.hpp"
#include "risem/rng.hpp"

namespace risem {

/// Posterior membership of each sample in each component (2 x t).
struct Responsibilities {
    std::array<std::vector<double>, 2> tau;
    /// Samples where both weighted densities were zero; they get (0.5, 0.5).
    std::size_t underflow_count = 0;
    /// Mixture log-likelihood of the parameters the E-step was run with.
    double log_likelihood = 0.0;

    std::size_t size() const noexcept { return tau[0].size(); }
};

struct EmTrace {
    std::size_t iterations = 0;
    /// |Omega_new - Omega_old| / Omega_old per component, last iteration.
    std::array<double, 2> rel_change_spread{};
    /// |m_new - m_old| / m_old per component, last iteration.
    std::array<double, 2> rel_change_shape{};
    /// Log-likelihood before every M-step, followed by that of the result.
    std::vector<double> log_likelihood_history;
    bool converged = false;
    std::size_t underflow_samples = 0;
};

struct FitOptions {
    double epsilon = 1e-3;
    std::size_t max_iter = 500;
};

struct FitResult {
    NakagamiMixture mixture;
    EmTrace trace;
};

/// A component's responsibility mass fell below 1e-6 * t.
class ComponentCollapseError : public NumericalError {
public:
    ComponentCollapseError(std::size_t component, std::array<double, 2> weights);
    std::size_t component() const noexcept { return component_; }
    /// Weights computed by the M-step before the check fired.
    const std::array<double, 2>& weights() const noexcept { return weights_; }

private:
    std::size_t component_;
    std::array<double, 2> weights_;
};

/// EM failure carrying the trace accumulated up to the failure.
class FitError : public NumericalError {
public:
    FitError(const std::string& what, EmTrace trace);
    const EmTrace& trace() const noexcept { return trace_; }

private:
    EmTrace trace_;
};

inline constexpr double kMinShape = 0.5;
inline constexpr double kMaxShape = 200.0;

/// Closed-form approximation m = (1 + sqrt(1 + 4 delta / 3)) / (4 delta) of
/// the Nakagami shape MLE, clamped to [0.5, 200]; delta <= 0 maps to the
/// upper bound.
double shape_from_delta(double delta) noexcept;

/// Exact shape MLE: the root of log m - digamma(m) = delta on [0.5, 200],
/// by Newton iteration started from shape_from_delta. Clamped at the ends.
double shape_from_log_moment_gap(double delta);

/// Responsibility-weighted Nakagami statistics of one component:
/// mass = sum w_j, spread = sum w_j h_j^2 / mass,
/// delta = log(spread) - sum' w_j log h_j^2 / sum' w_j (sums over h_j > 0),
/// shape = shape_from_log_moment_gap(delta). spread/delta are NaN when mass is 0.
struct WeightedNakagamiEstimate {
    double mass = 0.0;
    double spread = 0.0;
    double delta = 0.0;
    double shape = kMaxShape;
};

WeightedNakagamiEstimate estimate_weighted_nakagami(std::span<const double> samples,
                                                    std::span<const double> weights);

/// Single-population Nakagami MLE (Omega = mean h^2, m from
/// delta = log Omega - mean log h^2) copied into both components with
/// Omega scaled by 0.9 and 1.1; weights (u, 1 - u) with u ~ U[0.2, 0.8].
/// Zero samples are left out of the log mean. Throws NumericalError for
/// fewer than 10 samples, negative or non-finite samples, or a degenerate
/// (constant) sample set.
NakagamiMixture mle_initialize(std::span<const double> samples, RngStream& rng);

/// tau_ij = w_i phi_i(h_j) / sum_l w_l phi_l(h_j), evaluated in the log domain.
Responsibilities e_step(std::span<const double> samples, const NakagamiMixture& mixture);

/// Weighted Nakagami re-estimation. Throws ComponentCollapseError when a
/// component's mass is below 1e-6 * t.
NakagamiMixture m_step(std::span<const double> samples, const Responsibilities& resp);

/// Alternates E and M steps from mle_initialize until every relative change
/// of Omega_i and m_i is below epsilon, or max_iter iterations ran. Samples
/// are processed in sorted order, so the result does not depend on input
/// order. Components are returned sorted by ascending spread.
/// Throws FitError (with trace) on component collapse.
FitResult fit(std::span<const double> samples, RngStream& rng, const FitOptions& options = {});

/// Flat record {omega1, m1, Omega1, omega2, m2, Omega2, iterations, converged}.
std::string fit_record_json(const FitResult& result);
/// Inverse of fit_record_json; the trace only carries iterations/converged.
FitResult fit_record_from_json(std::string_view text);

}  // namespace risem

#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace risem {

/// log of the Nakagami-m density 2 m^m r^(2m-1) exp(-m r^2 / Omega) / (Gamma(m) Omega^m).
/// No domain checks; r = 0 yields the limit (-inf for m > 1/2).
double nakagami_log_pdf(double r, double shape, double spread) noexcept;

/// Nakagami-m density. Throws ConfigError unless r >= 0, shape >= 0.5 and
/// spread > 0.
double nakagami_component_pdf(double r, double shape, double spread);

/// P(m, m r^2 / Omega), the regularized lower incomplete gamma function.
double nakagami_cdf(double r, double shape, double spread);

struct NakagamiComponent {
    double weight = 0.5;
    double shape = 1.0;   // m
    double spread = 1.0;  // Omega = E[h^2]

    bool operator==(const NakagamiComponent&) const = default;
};

/// Two-component Nakagami-m mixture.
struct NakagamiMixture {
    std::array<NakagamiComponent, 2> components{};

    /// Throws ConfigError if weights are outside [0, 1] or do not sum to 1
    /// within 1e-9, or a shape/spread is invalid.
    void validate() const;

    double log_pdf(double r) const noexcept;
    double pdf(double r) const noexcept;
    double cdf(double r) const;

    /// Components ordered by ascending spread.
    NakagamiMixture sorted() const;

    bool operator==(const NakagamiMixture&) const = default;
};

/// sum_i w_i P(m_i, m_i r^2 / Omega_i).
double mixture_cdf(const NakagamiMixture& mixture, double r);

/// Sum of log mixture densities, -inf if any sample has zero density.
double log_likelihood(const NakagamiMixture& mixture, std::span<const double> samples);

}  // namespace risem

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "risem/rng.hpp"

namespace risem {

using Complex = std::complex<double>;

/// Real symmetric correlation matrix with unit diagonal and a lazily
/// computed factor S such that S * S^T reproduces the matrix.
///
/// The factor comes from a symmetric eigen-decomposition. Negative
/// eigenvalues are clamped to zero and eigen-directions whose eigenvalue is
/// below 1e-12 / N are dropped, so S is N x rank and the per-entry
/// reproduction error stays below 1e-10. Copies share the cached factor.
class CorrelationMatrix {
public:
    /// Validates symmetry, unit diagonal and the [-1, 1] range.
    /// Throws ConfigError on violation.
    explicit CorrelationMatrix(Eigen::MatrixXd entries);

    /// N x N identity; sampling skips the matrix product entirely.
    static CorrelationMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    double operator()(std::size_t a, std::size_t b) const { return entries_(a, b); }
    bool is_identity() const noexcept { return identity_; }

    /// N x rank factor. Throws NumericalError if the eigen solver fails.
    const Eigen::MatrixXd& factor() const;

    /// Number of retained eigen-directions.
    std::size_t rank() const { return static_cast<std::size_t>(factor().cols()); }

private:
    struct FactorCache;

    CorrelationMatrix(Eigen::MatrixXd entries, bool identity);

    Eigen::MatrixXd entries_;
    bool identity_ = false;
    std::shared_ptr<FactorCache> cache_;
};

/// n i.i.d. CN(0, 1) draws: independent real and imaginary parts, each with
/// variance 1/2.
std::vector<Complex> sample_standard_complex_gaussian(RngStream& rng, std::size_t n);

/// Writes n CN(0, 1) draws into out (which must have size n).
void fill_standard_complex_gaussian(RngStream& rng, std::complex<double>* out, std::size_t n);

/// Draw x ~ CN(0, scale * R) as sqrt(scale) * S * z.
Eigen::VectorXcd sample_correlated_complex_gaussian(RngStream& rng, const CorrelationMatrix& corr,
                                                    double scale);

/// Zero-mean Von Mises angles on (-pi, pi] with concentration kappa
/// (Best-Fisher rejection). kappa = 0 gives the uniform circle.
/// Throws ConfigError for negative or non-finite kappa.
std::vector<double> sample_von_mises(RngStream& rng, double kappa, std::size_t n);

/// Single Von Mises draw; kappa must already be validated.
double draw_von_mises(RngStream& rng, double kappa);

}  // namespace risem

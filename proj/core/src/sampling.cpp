#include "risem/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "risem/error.hpp"

namespace risem {

struct CorrelationMatrix::FactorCache {
    std::once_flag once;
    Eigen::MatrixXd factor;
};

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries)
    : CorrelationMatrix(std::move(entries), false) {
    const Eigen::Index n = entries_.rows();
    if (n == 0 || entries_.cols() != n) {
        throw ConfigError("correlation matrix must be square and non-empty");
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        if (entries_(a, a) != 1.0) {
            throw ConfigError("correlation matrix diagonal must be exactly 1");
        }
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double v = entries_(a, b);
            if (!(v >= -1.0 && v <= 1.0)) {
                throw ConfigError("correlation entry outside [-1, 1] at (" + std::to_string(a) +
                                  ", " + std::to_string(b) + ")");
            }
            if (v != entries_(b, a)) {
                throw ConfigError("correlation matrix is not symmetric");
            }
        }
    }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries, bool identity)
    : entries_(std::move(entries)), identity_(identity), cache_(std::make_shared<FactorCache>()) {}

CorrelationMatrix CorrelationMatrix::identity(std::size_t n) {
    if (n == 0) throw ConfigError("correlation matrix must be non-empty");
    const auto dim = static_cast<Eigen::Index>(n);
    return CorrelationMatrix(Eigen::MatrixXd::Identity(dim, dim), true);
}

const Eigen::MatrixXd& CorrelationMatrix::factor() const {
    std::call_once(cache_->once, [this] {
        const Eigen::Index n = entries_.rows();
        if (identity_) {
            cache_->factor = Eigen::MatrixXd::Identity(n, n);
            return;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_);
        if (solver.info() != Eigen::Success) {
            throw NumericalError("eigen-decomposition of correlation matrix did not converge");
        }
        const Eigen::VectorXd& values = solver.eigenvalues();
        const double floor = 1e-12 / static_cast<double>(n);
        // eigenvalues are ascending
        Eigen::Index first = 0;
        while (first < n && values(first) <= floor) ++first;
        const Eigen::Index kept = n - first;
        cache_->factor = solver.eigenvectors().rightCols(kept) *
                         values.tail(kept).cwiseSqrt().asDiagonal();
    });
    return cache_->factor;
}

void fill_standard_complex_gaussian(RngStream& rng, Complex* out, std::size_t n) {
    // |z|^2 ~ Exp(1) with uniform phase is exactly CN(0, 1).
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = std::sqrt(-std::log(rng.uniform_positive()));
        const double angle = 2.0 * std::numbers::pi * rng.uniform();
        out[i] = std::polar(radius, angle);
    }
}

std::vector<Complex> sample_standard_complex_gaussian(RngStream& rng, std::size_t n) {
    std::vector<Complex> out(n);
    fill_standard_complex_gaussian(rng, out.data(), n);
    return out;
}

Eigen::VectorXcd sample_correlated_complex_gaussian(RngStream& rng, const CorrelationMatrix& corr,
                                                    double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("correlated Gaussian scale must be positive and finite");
    }
    const double amplitude = std::sqrt(scale);
    const auto n = static_cast<Eigen::Index>(corr.size());
    if (corr.is_identity()) {
        Eigen::VectorXcd x(n);
        fill_standard_complex_gaussian(rng, x.data(), corr.size());
        return amplitude * x;
    }
    const Eigen::MatrixXd& s = corr.factor();
    Eigen::VectorXcd z(s.cols());
    fill_standard_complex_gaussian(rng, z.data(), static_cast<std::size_t>(s.cols()));
    Eigen::VectorXcd x(n);
    x.real() = s * z.real();
    x.imag() = s * z.imag();
    return amplitude * x;
}

double draw_von_mises(RngStream& rng, double kappa) {
    constexpr double pi = std::numbers::pi;
    if (kappa < 1e-8) {
        // uniform on (-pi, pi]
        return pi - 2.0 * pi * rng.uniform();
    }
    if (kappa > 1e6) {
        // Best-Fisher's envelope parameter cancels catastrophically here; the
        // wrapped normal with variance 1/kappa differs by O(1/kappa^2).
        const double radius = std::sqrt(-2.0 * std::log(rng.uniform_positive()));
        const double theta = radius * std::cos(2.0 * pi * rng.uniform()) / std::sqrt(kappa);
        return std::remainder(theta, 2.0 * pi);
    }
    double s;
    if (kappa < 1e-5) {
        s = 1.0 / kappa + kappa;
    } else {
        const double r = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
        const double rho = (r - std::sqrt(2.0 * r)) / (2.0 * kappa);
        s = (1.0 + rho * rho) / (2.0 * rho);
    }
    double w;
    for (;;) {
        const double z = std::cos(pi * rng.uniform());
        w = (1.0 + s * z) / (s + z);
        const double y = kappa * (s - w);
        const double v = rng.uniform_positive();
        if (y * (2.0 - y) - v >= 0.0) break;
        if (std::log(y / v) + 1.0 - y >= 0.0) break;
    }
    w = std::clamp(w, -1.0, 1.0);
    const double theta = std::acos(w);
    if (rng.uniform() < 0.5) {
        return theta == pi ? pi : -theta;
    }
    return theta;
}

std::vector<double> sample_von_mises(RngStream& rng, double kappa, std::size_t n) {
    if (!(kappa >= 0.0) || std::isinf(kappa)) {
        throw ConfigError("Von Mises concentration must be finite and non-negative");
    }
    std::vector<double> out(n);
    for (auto& theta : out) theta = draw_von_mises(rng, kappa);
    return out;
}

}  // namespace risem

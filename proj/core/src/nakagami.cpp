#include "risem/nakagami.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "risem/error.hpp"
#include "summation.hpp"

namespace risem {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

double nakagami_log_pdf(double r, double shape, double spread) noexcept {
    const double log_r_term =
        (r == 0.0) ? (shape == 0.5 ? 0.0 : kNegInf) : (2.0 * shape - 1.0) * std::log(r);
    return std::numbers::ln2 + shape * std::log(shape / spread) - boost::math::lgamma(shape) +
           log_r_term - shape * r * r / spread;
}

double nakagami_component_pdf(double r, double shape, double spread) {
    if (!(r >= 0.0) || !(shape >= 0.5) || !(spread > 0.0) || !std::isfinite(shape) ||
        !std::isfinite(spread)) {
        throw ConfigError("Nakagami density requires r >= 0, m >= 0.5 and Omega > 0");
    }
    if (std::isinf(r)) return 0.0;
    return std::exp(nakagami_log_pdf(r, shape, spread));
}

double nakagami_cdf(double r, double shape, double spread) {
    if (!(r >= 0.0)) throw ConfigError("Nakagami CDF requires r >= 0");
    if (r == 0.0) return 0.0;
    if (std::isinf(r)) return 1.0;
    return boost::math::gamma_p(shape, shape * r * r / spread);
}

void NakagamiMixture::validate() const {
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.weight >= 0.0 && c.weight <= 1.0)) {
            throw ConfigError("mixture weight outside [0, 1]");
        }
        if (!(c.shape >= 0.5) || !std::isfinite(c.shape)) {
            throw ConfigError("mixture shape must be finite and >= 0.5");
        }
        if (!(c.spread > 0.0) || !std::isfinite(c.spread)) {
            throw ConfigError("mixture spread must be finite and positive");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mixture weights must sum to 1");
}

double NakagamiMixture::log_pdf(double r) const noexcept {
    double acc = kNegInf;
    for (const auto& c : components) {
        if (c.weight == 0.0) continue;
        acc = log_add(acc, std::log(c.weight) + nakagami_log_pdf(r, c.shape, c.spread));
    }
    return acc;
}

double NakagamiMixture::pdf(double r) const noexcept { return std::exp(log_pdf(r)); }

double NakagamiMixture::cdf(double r) const { return mixture_cdf(*this, r); }

NakagamiMixture NakagamiMixture::sorted() const {
    NakagamiMixture out = *this;
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const auto& a, const auto& b) { return a.spread < b.spread; });
    return out;
}

double mixture_cdf(const NakagamiMixture& mixture, double r) {
    double total = 0.0;
    for (const auto& c : mixture.components) {
        if (c.weight == 0.0) continue;
        total += c.weight * nakagami_cdf(r, c.shape, c.spread);
    }
    return std::clamp(total, 0.0, 1.0);
}

double log_likelihood(const NakagamiMixture& mixture, std::span<const double> samples) {
    detail::CompensatedSum sum;
    for (double r : samples) {
        const double lp = mixture.log_pdf(r);
        if (lp == kNegInf) return kNegInf;
        sum.add(lp);
    }
    return sum.value();
}

}  // namespace risem

#include "risem/outage.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "risem/error.hpp"
#include "summation.hpp"

namespace risem {
namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr double kZ95OneSided = 1.6448536269514722;

void require_rate(double r_th) {
    if (!(r_th >= 0.0) || !std::isfinite(r_th)) {
        throw ConfigError("target rate must be finite and non-negative");
    }
}

}  // namespace

std::string_view to_string(OutageMethod method) noexcept {
    switch (method) {
        case OutageMethod::MixtureAnalytic: return "mixture-analytic";
        case OutageMethod::MonteCarlo: return "monte-carlo";
        case OutageMethod::GammaMom: return "gamma-mom";
    }
    return "unknown";
}

OutageMethod outage_method_from_string(std::string_view name) {
    if (name == "mixture-analytic") return OutageMethod::MixtureAnalytic;
    if (name == "monte-carlo") return OutageMethod::MonteCarlo;
    if (name == "gamma-mom") return OutageMethod::GammaMom;
    throw ConfigError("unknown outage method '" + std::string(name) + "'");
}

bool OutageCurve::is_valid() const noexcept {
    if (op_values.size() != rate_grid.size() || ci_halfwidth.size() != rate_grid.size()) {
        return false;
    }
    for (std::size_t k = 0; k < op_values.size(); ++k) {
        if (!(op_values[k] >= 0.0 && op_values[k] <= 1.0)) return false;
        if (k > 0 && (rate_grid[k] <= rate_grid[k - 1] || op_values[k] < op_values[k - 1])) {
            return false;
        }
    }
    return true;
}

double rate_to_snr_threshold(double r_th) noexcept { return std::expm1(r_th * std::numbers::ln2); }

double outage_analytic(const NakagamiMixture& mixture, double rho_db, double r_th) {
    require_rate(r_th);
    const double x = rate_to_snr_threshold(r_th) / db_to_linear(rho_db);
    return mixture_cdf(mixture, std::sqrt(x));
}

double wilson_halfwidth(std::size_t k, std::size_t n) noexcept {
    if (n == 0) return 1.0;
    const double nn = static_cast<double>(n);
    if (k == 0) return kZ95OneSided * kZ95OneSided / (nn + kZ95OneSided * kZ95OneSided);
    const double p = static_cast<double>(k) / nn;
    const double z2 = kZ95 * kZ95;
    return kZ95 / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
}

EmpiricalOutage outage_empirical(std::span<const double> samples, double rho_db, double r_th) {
    require_rate(r_th);
    if (samples.empty()) throw ConfigError("empirical outage needs at least one sample");
    const double threshold = rate_to_snr_threshold(r_th);
    const double rho = db_to_linear(rho_db);
    EmpiricalOutage out;
    out.trials = samples.size();
    for (double h : samples) {
        if (rho * h * h < threshold) ++out.outages;
    }
    out.op = static_cast<double>(out.outages) / static_cast<double>(out.trials);
    out.ci_halfwidth = wilson_halfwidth(out.outages, out.trials);
    return out;
}

EmpiricalOutage outage_empirical(const ChannelSampleSet& samples, double rho_db, double r_th) {
    return outage_empirical(std::span<const double>(samples.samples), rho_db, r_th);
}

OutageCurve mixture_outage_curve(const NakagamiMixture& mixture, double rho_db,
                                 std::span<const double> rate_grid) {
    OutageCurve curve{{rate_grid.begin(), rate_grid.end()}, {}, {}, OutageMethod::MixtureAnalytic};
    curve.op_values.reserve(rate_grid.size());
    for (double r : rate_grid) curve.op_values.push_back(outage_analytic(mixture, rho_db, r));
    curve.ci_halfwidth.assign(rate_grid.size(), 0.0);
    return curve;
}

OutageCurve empirical_outage_curve(std::span<const double> samples, double rho_db,
                                   std::span<const double> rate_grid) {
    if (samples.empty()) throw ConfigError("empirical outage needs at least one sample");
    const double rho = db_to_linear(rho_db);
    std::vector<double> snr(samples.size());
    std::transform(samples.begin(), samples.end(), snr.begin(),
                   [rho](double h) { return rho * h * h; });
    std::sort(snr.begin(), snr.end());

    OutageCurve curve{{rate_grid.begin(), rate_grid.end()}, {}, {}, OutageMethod::MonteCarlo};
    for (double r : rate_grid) {
        require_rate(r);
        const auto below = static_cast<std::size_t>(
            std::lower_bound(snr.begin(), snr.end(), rate_to_snr_threshold(r)) - snr.begin());
        curve.op_values.push_back(static_cast<double>(below) / static_cast<double>(snr.size()));
        curve.ci_halfwidth.push_back(wilson_halfwidth(below, snr.size()));
    }
    return curve;
}

std::string_view to_string(NmseDomain domain) noexcept {
    return domain == NmseDomain::Linear ? "linear" : "log10";
}

NmseDomain nmse_domain_from_string(std::string_view name) {
    if (name == "linear") return NmseDomain::Linear;
    if (name == "log10") return NmseDomain::Log10;
    throw ConfigError("unknown NMSE domain '" + std::string(name) + "' (expected linear or log10)");
}

double nmse(const OutageCurve& reference, const OutageCurve& candidate, NmseDomain domain) {
    if (reference.rate_grid != candidate.rate_grid ||
        reference.op_values.size() != reference.rate_grid.size() ||
        candidate.op_values.size() != candidate.rate_grid.size()) {
        throw ConfigError("NMSE needs curves on identical rate grids");
    }
    std::vector<double> ref, cand;
    for (std::size_t k = 0; k < reference.op_values.size(); ++k) {
        double a = reference.op_values[k];
        double b = candidate.op_values[k];
        if (domain == NmseDomain::Log10) {
            if (!(a > 0.0) || !(b > 0.0)) continue;
            a = std::log10(a);
            b = std::log10(b);
        }
        ref.push_back(a);
        cand.push_back(b);
    }
    if (ref.empty()) throw NumericalError("NMSE: no usable grid points");
    if (std::all_of(ref.begin(), ref.end(), [&](double a) { return a == ref.front(); })) {
        throw NumericalError("NMSE: reference curve is constant");
    }

    detail::CompensatedSum mean_acc;
    for (double a : ref) mean_acc.add(a);
    const double mean = mean_acc.value() / static_cast<double>(ref.size());
    detail::CompensatedSum residual, spread;
    for (std::size_t k = 0; k < ref.size(); ++k) {
        residual.add((ref[k] - cand[k]) * (ref[k] - cand[k]));
        spread.add((ref[k] - mean) * (ref[k] - mean));
    }
    if (!(spread.value() > 0.0)) throw NumericalError("NMSE: reference curve is constant");
    return 1.0 - residual.value() / spread.value();
}

double GammaFit::outage(double rho_db, double r_th) const {
    require_rate(r_th);
    const double x = rate_to_snr_threshold(r_th) / (db_to_linear(rho_db) * scale);
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(shape, x);
}

GammaFit gamma_mom_baseline(std::span<const double> samples) {
    if (samples.size() < 2) throw NumericalError("Gamma moment matching needs two or more samples");
    if (std::all_of(samples.begin(), samples.end(),
                    [&](double h) { return h * h == samples.front() * samples.front(); })) {
        throw NumericalError("Gamma moment matching: h^2 has zero variance");
    }
    detail::CompensatedSum sum;
    for (double h : samples) sum.add(h * h);
    const double n = static_cast<double>(samples.size());
    const double mean = sum.value() / n;
    detail::CompensatedSum dev;
    for (double h : samples) dev.add((h * h - mean) * (h * h - mean));
    const double var = dev.value() / (n - 1.0);
    if (!(var > 0.0) || !(mean > 0.0)) {
        throw NumericalError("Gamma moment matching: h^2 has zero variance");
    }
    return GammaFit{mean * mean / var, var / mean};
}

OutageCurve gamma_outage_curve(const GammaFit& fit, double rho_db,
                               std::span<const double> rate_grid) {
    OutageCurve curve{{rate_grid.begin(), rate_grid.end()}, {}, {}, OutageMethod::GammaMom};
    for (double r : rate_grid) curve.op_values.push_back(fit.outage(rho_db, r));
    curve.ci_halfwidth.assign(rate_grid.size(), 0.0);
    return curve;
}

std::string format_decimal(double value) {
    std::array<char, 512> buf{};
    const auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    if (ec != std::errc{}) {
        throw NumericalError("value cannot be written in decimal notation");
    }
    return std::string(buf.data(), end);
}

std::string to_csv(const OutageCurve& curve) {
    std::string out = "r_th,op,ci_halfwidth,method\n";
    const std::string_view method = to_string(curve.method);
    for (std::size_t k = 0; k < curve.size(); ++k) {
        out += format_decimal(curve.rate_grid[k]);
        out += ',';
        out += format_decimal(curve.op_values[k]);
        out += ',';
        out += format_decimal(curve.ci_halfwidth[k]);
        out += ',';
        out += method;
        out += '\n';
    }
    return out;
}

}  // namespace risem

#include "risem/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/math/tools/roots.hpp>

#include "json_io.hpp"
#include "summation.hpp"

namespace risem {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-sample quantities reused by every EM iteration.
struct PreparedSamples {
    std::span<const double> h;
    std::vector<double> log_h;  // -inf for zero samples
};

PreparedSamples prepare(std::span<const double> samples) {
    PreparedSamples p{samples, std::vector<double>(samples.size())};
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double h = samples[j];
        if (!(h >= 0.0) || !std::isfinite(h)) {
            throw NumericalError("samples must be finite and non-negative");
        }
        p.log_h[j] = h > 0.0 ? std::log(h) : kNegInf;
    }
    return p;
}

struct ComponentTerms {
    double log_weight;
    double constant;  // ln 2 + m ln(m / Omega) - ln Gamma(m)
    double shape;
    double rate;      // m / Omega
};

ComponentTerms terms(const NakagamiComponent& c) {
    return {c.weight > 0.0 ? std::log(c.weight) : kNegInf,
            std::numbers::ln2 + c.shape * std::log(c.shape / c.spread) -
                boost::math::lgamma(c.shape),
            c.shape, c.shape / c.spread};
}

double weighted_log_density(const ComponentTerms& t, double h, double log_h) {
    if (t.log_weight == kNegInf) return kNegInf;
    double log_r_term;
    if (h > 0.0) {
        log_r_term = (2.0 * t.shape - 1.0) * log_h;
    } else {
        log_r_term = t.shape == 0.5 ? 0.0 : kNegInf;
    }
    return t.log_weight + t.constant + log_r_term - t.rate * h * h;
}

Responsibilities e_step_prepared(const PreparedSamples& p, const NakagamiMixture& mixture) {
    const std::size_t t = p.h.size();
    Responsibilities r;
    r.tau[0].resize(t);
    r.tau[1].resize(t);
    const ComponentTerms c0 = terms(mixture.components[0]);
    const ComponentTerms c1 = terms(mixture.components[1]);
    detail::CompensatedSum ll;
    bool ll_finite = true;
    for (std::size_t j = 0; j < t; ++j) {
        const double a = weighted_log_density(c0, p.h[j], p.log_h[j]);
        const double b = weighted_log_density(c1, p.h[j], p.log_h[j]);
        if (a == kNegInf && b == kNegInf) {
            r.tau[0][j] = 0.5;
            r.tau[1][j] = 0.5;
            ++r.underflow_count;
            ll_finite = false;
            continue;
        }
        const double hi = std::max(a, b);
        const double lse = hi + std::log1p(std::exp(std::min(a, b) - hi));
        const double t0 = std::exp(a - lse);
        r.tau[0][j] = t0;
        r.tau[1][j] = 1.0 - t0;
        ll.add(lse);
    }
    r.log_likelihood = ll_finite ? ll.value() : kNegInf;
    return r;
}

WeightedNakagamiEstimate estimate_prepared(const PreparedSamples& p,
                                           std::span<const double> weights) {
    if (weights.size() != p.h.size()) {
        throw ConfigError("weight vector does not match the sample count");
    }
    detail::CompensatedSum mass, sq, positive_mass, log_sq;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double w = weights[j];
        const double h = p.h[j];
        mass.add(w);
        sq.add(w * h * h);
        if (h > 0.0) {
            positive_mass.add(w);
            log_sq.add(w * 2.0 * p.log_h[j]);
        }
    }
    WeightedNakagamiEstimate e;
    e.mass = mass.value();
    e.spread = sq.value() / e.mass;
    e.delta = std::log(e.spread) - log_sq.value() / positive_mass.value();
    e.shape = shape_from_log_moment_gap(e.delta);
    return e;
}

NakagamiMixture m_step_prepared(const PreparedSamples& p, const Responsibilities& resp) {
    const std::size_t t = p.h.size();
    if (resp.tau[0].size() != t || resp.tau[1].size() != t) {
        throw ConfigError("responsibility matrix does not match the sample count");
    }
    const std::array<WeightedNakagamiEstimate, 2> est = {estimate_prepared(p, resp.tau[0]),
                                                          estimate_prepared(p, resp.tau[1])};
    const double total = est[0].mass + est[1].mass;
    const std::array<double, 2> weights = {est[0].mass / total, est[1].mass / total};
    for (std::size_t i = 0; i < 2; ++i) {
        if (!(est[i].mass >= 1e-6 * static_cast<double>(t)) || !(est[i].spread > 0.0) ||
            std::isnan(est[i].delta)) {
            throw ComponentCollapseError(i, weights);
        }
    }
    NakagamiMixture next;
    for (std::size_t i = 0; i < 2; ++i) {
        next.components[i] = {weights[i], est[i].shape, est[i].spread};
    }
    next.components[1].weight = 1.0 - next.components[0].weight;
    return next;
}

double relative_change(double next, double prev) { return std::abs(next - prev) / prev; }

}  // namespace

ComponentCollapseError::ComponentCollapseError(std::size_t component,
                                               std::array<double, 2> weights)
    : NumericalError("mixture component " + std::to_string(component + 1) +
                     " collapsed (responsibility mass below 1e-6 * t)"),
      component_(component),
      weights_(weights) {}

FitError::FitError(const std::string& what, EmTrace trace)
    : NumericalError(what), trace_(std::move(trace)) {}

double shape_from_delta(double delta) noexcept {
    if (!(delta > 0.0) || !std::isfinite(delta)) return kMaxShape;
    const double m = (1.0 + std::sqrt(1.0 + 4.0 * delta / 3.0)) / (4.0 * delta);
    return std::clamp(m, kMinShape, kMaxShape);
}

double shape_from_log_moment_gap(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) return kMaxShape;
    // log m - psi(m) is strictly decreasing in m.
    auto gap = [](double m) { return std::log(m) - boost::math::digamma(m); };
    if (delta >= gap(kMinShape)) return kMinShape;
    if (delta <= gap(kMaxShape)) return kMaxShape;
    auto f = [&](double m) {
        return std::make_pair(gap(m) - delta, 1.0 / m - boost::math::trigamma(m));
    };
    std::uintmax_t max_iter = 100;
    return boost::math::tools::newton_raphson_iterate(f, shape_from_delta(delta), kMinShape,
                                                      kMaxShape, 50, max_iter);
}

WeightedNakagamiEstimate estimate_weighted_nakagami(std::span<const double> samples,
                                                    std::span<const double> weights) {
    return estimate_prepared(prepare(samples), weights);
}

NakagamiMixture mle_initialize(std::span<const double> samples, RngStream& rng) {
    if (samples.size() < 10) throw NumericalError("MLE initialization needs at least 10 samples");
    const PreparedSamples p = prepare(samples);
    if (std::none_of(samples.begin(), samples.end(), [](double h) { return h > 0.0; })) {
        throw NumericalError("MLE initialization: all samples are zero");
    }
    const std::vector<double> ones(samples.size(), 1.0);
    const WeightedNakagamiEstimate e = estimate_prepared(p, ones);
    if (!(e.delta > 0.0) || !std::isfinite(e.delta)) {
        throw NumericalError("MLE initialization: degenerate sample set (log-moment gap is zero)");
    }
    const double u = 0.2 + 0.6 * rng.uniform();
    NakagamiMixture init;
    init.components[0] = {u, e.shape, 0.9 * e.spread};
    init.components[1] = {1.0 - u, e.shape, 1.1 * e.spread};
    return init;
}

Responsibilities e_step(std::span<const double> samples, const NakagamiMixture& mixture) {
    mixture.validate();
    return e_step_prepared(prepare(samples), mixture);
}

NakagamiMixture m_step(std::span<const double> samples, const Responsibilities& resp) {
    return m_step_prepared(prepare(samples), resp);
}

FitResult fit(std::span<const double> samples, RngStream& rng, const FitOptions& options) {
    if (!(options.epsilon > 0.0)) throw ConfigError("EM tolerance must be positive");
    std::vector<double> ordered(samples.begin(), samples.end());
    std::sort(ordered.begin(), ordered.end());
    const NakagamiMixture init = mle_initialize(ordered, rng);
    const PreparedSamples p = prepare(ordered);

    EmTrace trace;
    NakagamiMixture current = init;
    NakagamiMixture best = init;
    double best_ll = kNegInf;

    auto track = [&](const NakagamiMixture& params, double ll) {
        trace.log_likelihood_history.push_back(ll);
        if (trace.log_likelihood_history.size() == 1 || ll > best_ll) {
            best = params;
            best_ll = ll;
        }
    };

    for (std::size_t k = 0; k < options.max_iter; ++k) {
        const Responsibilities resp = e_step_prepared(p, current);
        trace.underflow_samples = resp.underflow_count;
        track(current, resp.log_likelihood);

        NakagamiMixture next;
        try {
            next = m_step_prepared(p, resp);
        } catch (const ComponentCollapseError& e) {
            throw FitError(e.what(), trace);
        }
        for (std::size_t i = 0; i < 2; ++i) {
            trace.rel_change_spread[i] =
                relative_change(next.components[i].spread, current.components[i].spread);
            trace.rel_change_shape[i] =
                relative_change(next.components[i].shape, current.components[i].shape);
        }
        current = next;
        ++trace.iterations;

        const bool small = std::all_of(trace.rel_change_spread.begin(),
                                       trace.rel_change_spread.end(),
                                       [&](double v) { return v < options.epsilon; }) &&
                           std::all_of(trace.rel_change_shape.begin(),
                                       trace.rel_change_shape.end(),
                                       [&](double v) { return v < options.epsilon; });
        if (small) {
            trace.converged = true;
            break;
        }
    }
    track(current, e_step_prepared(p, current).log_likelihood);

    return FitResult{best.sorted(), std::move(trace)};
}

std::string fit_record_json(const FitResult& result) {
    const auto& c = result.mixture.components;
    detail::Json j = {{"omega1", c[0].weight}, {"m1", c[0].shape},  {"Omega1", c[0].spread},
                      {"omega2", c[1].weight}, {"m2", c[1].shape},  {"Omega2", c[1].spread},
                      {"iterations", result.trace.iterations},
                      {"converged", result.trace.converged}};
    return j.dump();
}

FitResult fit_record_from_json(std::string_view text) {
    detail::Json j;
    try {
        j = detail::Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("fit record: invalid JSON: ") + e.what());
    }
    constexpr std::string_view where = "fit record";
    detail::check_keys(j, where,
                       {"omega1", "m1", "Omega1", "omega2", "m2", "Omega2", "iterations",
                        "converged"},
                       {"omega1", "m1", "Omega1", "omega2", "m2", "Omega2", "iterations",
                        "converged"});
    FitResult r;
    r.mixture.components[0] = {detail::read<double>(j, where, "omega1"),
                               detail::read<double>(j, where, "m1"),
                               detail::read<double>(j, where, "Omega1")};
    r.mixture.components[1] = {detail::read<double>(j, where, "omega2"),
                               detail::read<double>(j, where, "m2"),
                               detail::read<double>(j, where, "Omega2")};
    r.mixture.validate();
    r.trace.iterations = detail::read<std::size_t>(j, where, "iterations");
    r.trace.converged = detail::read<bool>(j, where, "converged");
    return r;
}

}  // namespace risem

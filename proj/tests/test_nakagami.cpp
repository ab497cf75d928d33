#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "risem/error.hpp"
#include "risem/nakagami.hpp"

using namespace risem;

namespace {
NakagamiMixture mixture(double w1, double m1, double o1, double m2, double o2) {
    return NakagamiMixture{{NakagamiComponent{w1, m1, o1}, NakagamiComponent{1.0 - w1, m2, o2}}};
}
}  // namespace

TEST_CASE("component pdf closed-form values") {
    CHECK(nakagami_component_pdf(1.0, 1.0, 1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    CHECK(nakagami_component_pdf(1.0, 1.0, 1.0) == doctest::Approx(0.735759).epsilon(1e-6));
    for (double r : {1e-3, 1e-5, 1e-7}) CHECK(nakagami_component_pdf(r, 1.0, 1.0) / r == doctest::Approx(2.0).epsilon(1e-5));
    for (double m : {0.5, 0.8, 2.7, 10.0}) {
        for (double r : {0.1, 0.9, 2.5}) {
            CHECK(nakagami_component_pdf(r, m, 3.1) == doctest::Approx(oracle::nakagami_pdf_direct(r, m, 3.1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("component pdf is stable for large shapes") {
    const double v = nakagami_component_pdf(1.0, 200.0, 1.0);
    CHECK(std::isfinite(v));
    // Near-Gaussian with standard deviation ~ 1/(2 sqrt(m)).
    CHECK(v == doctest::Approx(2.0 * std::sqrt(200.0) / std::sqrt(2.0 * std::numbers::pi)).epsilon(2e-3));
    CHECK(std::isfinite(nakagami_log_pdf(50.0, 200.0, 1.0)));
}

TEST_CASE("component pdf integrates to one") {
    const double area = oracle::integrate([](double r) { return nakagami_component_pdf(r, 2.7, 3.1); }, 0.0,
                                          std::numeric_limits<double>::infinity());
    CHECK(std::abs(area - 1.0) < 1e-6);
}

TEST_CASE("component pdf rejects invalid arguments") {
    CHECK_THROWS_AS(nakagami_component_pdf(-1.0, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(nakagami_component_pdf(1.0, 0.4, 1.0), ConfigError);
    CHECK_THROWS_AS(nakagami_component_pdf(1.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("mixture cdf closed-form values") {
    const auto single = mixture(1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(mixture_cdf(single, 0.0) == 0.0);
    CHECK(mixture_cdf(single, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(mixture_cdf(single, 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(std::abs(mixture_cdf(single, 1e6) - 1.0) < 1e-12);
    const auto mixed = mixture(0.3, 0.7, 0.4, 5.0, 4.0);
    CHECK(std::abs(mixture_cdf(mixed, 1e6) - 1.0) < 1e-12);
}

TEST_CASE("mixture cdf matches quadrature of the pdf at random points") {
    const auto mix = mixture(0.35, 0.8, 0.6, 4.5, 3.0);
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> point(0.0, 4.0);
    for (int i = 0; i < 20; ++i) {
        const double r = point(gen);
        CAPTURE(r);
        const double quad = oracle::integrate([&](double x) { return mix.pdf(x); }, 0.0, r);
        CHECK(std::abs(mixture_cdf(mix, r) - quad) < 1e-8);
    }
}

TEST_CASE("mixture pdf integrates to one") {
    for (const auto& mix : {mixture(0.5, 0.5, 1.0, 200.0, 7.0), mixture(0.2, 2.7, 3.1, 1.0, 1e-3),
                            mixture(0.9, 30.0, 1e-12, 0.6, 5e-12)}) {
        const double a = std::sqrt(std::min(mix.components[0].spread, mix.components[1].spread));
        const double b = std::sqrt(std::max(mix.components[0].spread, mix.components[1].spread));
        auto pdf = [&](double r) { return mix.pdf(r); };
        const double area = oracle::integrate(pdf, 0.0, a, 1e-10) + oracle::integrate(pdf, a, b, 1e-10) +
                            oracle::integrate(pdf, b, 30.0 * b, 1e-10);
        CHECK(std::abs(area - 1.0) < 1e-6);
    }
}

TEST_CASE("mixture validation and sorting") {
    CHECK_NOTHROW(mixture(0.3, 1.0, 1.0, 2.0, 2.0).validate());
    NakagamiMixture bad = mixture(0.3, 1.0, 1.0, 2.0, 2.0);
    bad.components[1].weight = 0.8;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK_THROWS_AS(mixture(0.3, 0.2, 1.0, 2.0, 2.0).validate(), ConfigError);
    CHECK_THROWS_AS(mixture(1.2, 1.0, 1.0, 2.0, 2.0).validate(), ConfigError);

    const auto s = mixture(0.3, 1.0, 5.0, 2.0, 2.0).sorted();
    CHECK(s.components[0].spread == 2.0);
    CHECK(s.components[0].weight == doctest::Approx(0.7));
    CHECK(s.components[1].spread == 5.0);
}

TEST_CASE("log likelihood") {
    const auto single = mixture(1.0, 1.0, 1.0, 1.0, 1.0);
    const std::vector<double> one{1.0};
    CHECK(log_likelihood(single, one) == doctest::Approx(std::log(2.0 * std::exp(-1.0))));
    CHECK(log_likelihood(single, one) == doctest::Approx(-0.306853).epsilon(1e-6));

    const auto mix = mixture(0.4, 1.3, 0.5, 3.0, 2.0);
    auto h = oracle::nakagami_samples(2.0, 1.0, 500, 1);
    const double ll = log_likelihood(mix, h);
    auto doubled = h;
    doubled.insert(doubled.end(), h.begin(), h.end());
    CHECK(log_likelihood(mix, doubled) == doctest::Approx(2.0 * ll).epsilon(1e-12));

    double direct = 0.0;
    for (double r : h) {
        direct += std::log(0.4 * oracle::nakagami_pdf_direct(r, 1.3, 0.5) + 0.6 * oracle::nakagami_pdf_direct(r, 3.0, 2.0));
    }
    CHECK(ll == doctest::Approx(direct).epsilon(1e-12));

    const std::vector<double> with_zero{1.0, 0.0};
    CHECK(log_likelihood(mixture(0.5, 2.0, 1.0, 3.0, 1.0), with_zero) == -std::numeric_limits<double>::infinity());
}

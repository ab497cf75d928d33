#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "risem/error.hpp"
#include "risem/outage.hpp"

using namespace risem;

namespace {

NakagamiMixture mixture(double w1, double m1, double o1, double m2, double o2) {
    return NakagamiMixture{{NakagamiComponent{w1, m1, o1}, NakagamiComponent{1.0 - w1, m2, o2}}};
}

OutageCurve curve(std::vector<double> op) {
    OutageCurve c;
    for (std::size_t k = 0; k < op.size(); ++k) c.rate_grid.push_back(0.5 * static_cast<double>(k + 1));
    c.op_values = std::move(op);
    c.ci_halfwidth.assign(c.op_values.size(), 0.0);
    return c;
}

}  // namespace

TEST_CASE("analytic outage closed form") {
    const auto single = mixture(1.0, 1.0, 1.0, 1.0, 1.0);
    CHECK(outage_analytic(single, 0.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(outage_analytic(single, 0.0, 1.0) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(outage_analytic(single, 0.0, 1e-12) < 1e-11);
    CHECK(outage_analytic(single, 0.0, 1e-300) >= 0.0);
}

TEST_CASE("analytic outage equals the mixture cdf at the threshold magnitude") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const auto mix = mixture(u(gen), 0.5 + 10 * u(gen), 0.1 + 3 * u(gen), 0.5 + 50 * u(gen), 0.1 + 8 * u(gen));
        const double rho_db = -10.0 + 40.0 * u(gen);
        const double r = 0.05 + 9.95 * u(gen);
        const double rho = std::pow(10.0, rho_db / 10.0);
        CHECK(std::abs(outage_analytic(mix, rho_db, r) - mixture_cdf(mix, std::sqrt((std::pow(2.0, r) - 1.0) / rho))) <=
              1e-12);
    }
}

TEST_CASE("analytic outage is monotone") {
    const auto mix = mixture(0.4, 1.3, 1e-12, 6.0, 3e-12);
    double prev = 0.0;
    for (double r = 0.1; r < 6.0; r += 0.1) {
        const double op = outage_analytic(mix, 124.0, r);
        if (prev > 0.0 && prev < 1.0) CHECK(op > prev);
        prev = op;
    }
    CHECK(outage_analytic(mix, 120.0, 2.0) > outage_analytic(mix, 124.0, 2.0));
}

TEST_CASE("empirical outage trivial cases") {
    const std::vector<double> zeros(100, 0.0);
    CHECK(outage_empirical(zeros, 0.0, 1.0).op == 1.0);
    const std::vector<double> ones(100, 1.0);
    const auto none = outage_empirical(ones, 0.0, 0.0);
    CHECK(none.op == 0.0);
    CHECK(none.outages == 0);
    CHECK(none.trials == 100);
    // One-sided 95% bound z^2 / (n + z^2).
    const double z = 1.6448536269514722;
    CHECK(none.ci_halfwidth == doctest::Approx(z * z / (100.0 + z * z)));
}

TEST_CASE("empirical outage of rayleigh samples matches the exponential law") {
    const auto h = oracle::nakagami_samples(1.0, 1.0, 1000000, 2);
    const auto e = outage_empirical(h, 0.0, 1.0);
    CHECK(std::abs(e.op - 0.6321) < 0.0015);
    CHECK(e.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(e.op * (1 - e.op) / 1e6)).epsilon(1e-3));
}

TEST_CASE("wilson interval") {
    // k = 30, n = 100, z = 1.96: half-width of the Wilson score interval.
    const double z = 1.959963984540054;
    const double p = 0.3, n = 100.0;
    const double expected = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    CHECK(wilson_halfwidth(30, 100) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(wilson_halfwidth(100, 100) > 0.0);
}

TEST_CASE("empirical curve agrees with point evaluations") {
    const auto h = oracle::nakagami_samples(2.0, 1e-12, 20000, 3);
    const std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 4.0};
    const auto c = empirical_outage_curve(h, 124.0, grid);
    CHECK(c.method == OutageMethod::MonteCarlo);
    CHECK(c.is_valid());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto e = outage_empirical(h, 124.0, grid[k]);
        CHECK(c.op_values[k] == e.op);
        CHECK(c.ci_halfwidth[k] == e.ci_halfwidth);
    }
}

TEST_CASE("analytic and empirical outage agree on the fitted population") {
    const auto h = oracle::nakagami_samples(1.7, 2e-12, 200000, 4);
    const auto mix = mixture(1.0, 1.7, 2e-12, 1.7, 2e-12);
    const double t = static_cast<double>(h.size());
    for (double r = 0.2; r < 6.0; r += 0.2) {
        const double a = outage_analytic(mix, 124.0, r);
        if (a < 10.0 / t) continue;
        const auto e = outage_empirical(h, 124.0, r);
        CHECK(std::abs(a - e.op) <= 3.0 * e.ci_halfwidth + 0.15 * a);
    }
}

TEST_CASE("nmse") {
    const auto ref = curve({0.1, 0.2, 0.3});
    CHECK(nmse(ref, ref) == 1.0);
    CHECK(nmse(ref, curve({0.1, 0.2, 0.4})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nmse(ref, curve({0.2, 0.2, 0.2})) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(nmse(ref, curve({0.3, 0.2, 0.1})) < 0.0);
    CHECK_THROWS_AS(nmse(curve({0.2, 0.2, 0.2}), ref), NumericalError);
    CHECK_THROWS_AS(nmse(ref, curve({0.1, 0.2})), ConfigError);
    auto shifted = ref;
    shifted.rate_grid[1] = 0.7;
    CHECK_THROWS_AS(nmse(ref, shifted), ConfigError);
}

TEST_CASE("nmse is invariant to consistent reordering") {
    const auto ref = curve({1e-4, 1e-3, 0.02, 0.3, 0.9});
    const auto cand = curve({2e-4, 8e-4, 0.03, 0.25, 0.95});
    OutageCurve r2 = ref, c2 = cand;
    const std::vector<std::size_t> perm{3, 0, 4, 2, 1};
    for (std::size_t k = 0; k < perm.size(); ++k) {
        r2.op_values[k] = ref.op_values[perm[k]];
        c2.op_values[k] = cand.op_values[perm[k]];
    }
    CHECK(nmse(r2, c2) == doctest::Approx(nmse(ref, cand)).epsilon(1e-14));
}

TEST_CASE("log-domain nmse drops zeros") {
    const auto ref = curve({0.0, 1e-3, 1e-2, 1e-1});
    const auto cand = curve({1e-6, 1e-3, 1e-2, 1e-1});
    CHECK(nmse(ref, cand, NmseDomain::Log10) == 1.0);
    const auto worse = curve({1e-6, 2e-3, 1e-2, 1e-1});
    const double lr[] = {-3.0, -2.0, -1.0};
    const double lc[] = {std::log10(2e-3), -2.0, -1.0};
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 3; ++k) {
        num += (lr[k] - lc[k]) * (lr[k] - lc[k]);
        den += (lr[k] + 2.0) * (lr[k] + 2.0);
    }
    CHECK(nmse(ref, worse, NmseDomain::Log10) == doctest::Approx(1.0 - num / den).epsilon(1e-12));
    CHECK(nmse_domain_from_string("log10") == NmseDomain::Log10);
    CHECK(to_string(NmseDomain::Linear) == "linear");
    CHECK_THROWS_AS(nmse_domain_from_string("db"), ConfigError);
}

TEST_CASE("gamma moment matching") {
    std::mt19937_64 gen(5);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> h(1000000);
    for (auto& x : h) x = std::sqrt(ex(gen));
    const auto fit = gamma_mom_baseline(h);
    CHECK(std::abs(fit.shape - 1.0) < 0.01);
    CHECK(std::abs(fit.scale - 1.0) < 0.01);

    std::gamma_distribution<double> g(3.0, 2.0);
    for (auto& x : h) x = std::sqrt(g(gen));
    const auto fit3 = gamma_mom_baseline(h);
    CHECK(std::abs(fit3.shape - 3.0) < 0.02);
    CHECK(std::abs(fit3.scale - 2.0) < 0.02);
    // P(3, x / 2) at x = 1: 1 - e^{-1/2} (1 + 1/2 + 1/8).
    CHECK(GammaFit{3.0, 2.0}.outage(0.0, 1.0) == doctest::Approx(1.0 - std::exp(-0.5) * (1.0 + 0.5 + 0.125)).epsilon(1e-13));

    CHECK_THROWS_AS(gamma_mom_baseline(std::vector<double>(10, 0.5)), NumericalError);
    CHECK_THROWS_AS(gamma_mom_baseline(std::vector<double>{0.5}), NumericalError);
}

TEST_CASE("gamma outage curve") {
    const std::vector<double> grid{0.5, 1.0, 2.0};
    const auto c = gamma_outage_curve(GammaFit{2.0, 1.5}, 3.0, grid);
    CHECK(c.method == OutageMethod::GammaMom);
    CHECK(c.is_valid());
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(c.op_values[k] == GammaFit{2.0, 1.5}.outage(3.0, grid[k]));
}

TEST_CASE("mixture outage curve") {
    const std::vector<double> grid{0.5, 1.0, 2.0};
    const auto mix = mixture(0.3, 1.0, 1.0, 3.0, 2.0);
    const auto c = mixture_outage_curve(mix, 0.0, grid);
    CHECK(c.method == OutageMethod::MixtureAnalytic);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(c.op_values[k] == outage_analytic(mix, 0.0, grid[k]));
        CHECK(c.ci_halfwidth[k] == 0.0);
    }
}

TEST_CASE("curve validity") {
    CHECK(curve({0.1, 0.2, 0.2}).is_valid());
    CHECK_FALSE(curve({0.1, 0.3, 0.2}).is_valid());
    CHECK_FALSE(curve({0.1, 0.2, 1.2}).is_valid());
    auto c = curve({0.1});
    c.ci_halfwidth.clear();
    CHECK_FALSE(c.is_valid());
}

TEST_CASE("csv output") {
    OutageCurve c;
    c.rate_grid = {0.05, 1.0};
    c.op_values = {0.0, 1.5e-7};
    c.ci_halfwidth = {0.25, 0.0};
    c.method = OutageMethod::GammaMom;
    CHECK(to_csv(c) == "r_th,op,ci_halfwidth,method\n0.05,0,0.25,gamma-mom\n1,0.00000015,0,gamma-mom\n");
    CHECK(format_decimal(1e-20) == "0.00000000000000000001");
    CHECK(format_decimal(0.1) == "0.1");
    CHECK(std::stod(format_decimal(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("method names") {
    for (auto m : {OutageMethod::MixtureAnalytic, OutageMethod::MonteCarlo, OutageMethod::GammaMom}) {
        CHECK(outage_method_from_string(to_string(m)) == m);
    }
    CHECK(to_string(OutageMethod::MonteCarlo) == "monte-carlo");
    CHECK_THROWS_AS(outage_method_from_string("gamma"), ConfigError);
}

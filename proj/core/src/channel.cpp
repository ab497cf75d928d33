#include "risem/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "risem/error.hpp"
#include "risem/parallel.hpp"

namespace risem {

double sinc(double w) {
    if (w == 0.0) return 1.0;
    // Integral arguments up to rounding of the distance computation are exact zeros.
    if (std::abs(w - std::round(w)) <= 16.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) {
        return 0.0;
    }
    const double x = std::numbers::pi * w;
    return std::sin(x) / x;
}

CorrelationMatrix build_correlation_matrix(const RisGeometry& geometry) {
    geometry.validate();
    const std::size_t n = geometry.element_count();
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd r(dim, dim);
    for (std::size_t a = 0; a < n; ++a) {
        r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = 1.0;
        const double ya = static_cast<double>(a % geometry.n_h) * geometry.d_h;
        const double za = static_cast<double>(a / geometry.n_h) * geometry.d_v;
        for (std::size_t b = a + 1; b < n; ++b) {
            const double yb = static_cast<double>(b % geometry.n_h) * geometry.d_h;
            const double zb = static_cast<double>(b / geometry.n_h) * geometry.d_v;
            const double v = sinc(2.0 * std::hypot(ya - yb, za - zb) / geometry.wavelength);
            r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
            r(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = v;
        }
    }
    return CorrelationMatrix(std::move(r));
}

CorrelationMatrix scenario_correlation(const ScenarioConfig& config) {
    const auto* corr = std::get_if<CorrelatedRayleigh>(&config.variant);
    if (corr == nullptr) throw ConfigError("scenario is not a correlated Rayleigh variant");
    if (!corr->spatially_correlated) return CorrelationMatrix::identity(config.element_count());
    return build_correlation_matrix(config.geometry);
}

LinkRealization draw_correlated_rayleigh_links(RngStream& rng, const ScenarioConfig& config,
                                               const CorrelationMatrix& corr) {
    if (!config.is_correlated_rayleigh()) {
        throw ConfigError("draw_correlated_rayleigh_links needs a correlated Rayleigh scenario");
    }
    const std::size_t n = config.element_count();
    if (corr.size() != n) throw ConfigError("correlation matrix size does not match the RIS");
    const auto m = static_cast<Eigen::Index>(config.m_antennas);

    LinkRealization links;
    links.h2 = sample_correlated_complex_gaussian(rng, corr, db_to_linear(config.budget.beta2_db));
    links.g.resize(static_cast<Eigen::Index>(n), m);
    const double g_scale = db_to_linear(config.budget.beta1_db);
    for (Eigen::Index q = 0; q < m; ++q) {
        links.g.col(q) = sample_correlated_complex_gaussian(rng, corr, g_scale);
    }
    links.hsd = Eigen::VectorXcd::Zero(m);
    if (config.budget.direct_link) {
        fill_standard_complex_gaussian(rng, links.hsd.data(), config.m_antennas);
        links.hsd *= std::sqrt(db_to_linear(config.budget.beta_sd_db));
    }
    return links;
}

LinkRealization draw_correlated_rayleigh_links(RngStream& rng, const ScenarioConfig& config) {
    return draw_correlated_rayleigh_links(rng, config, scenario_correlation(config));
}

Complex draw_multiwave_coefficient(RngStream& rng, const SpecularSpec& spec) {
    Complex sum{0.0, 0.0};
    for (unsigned l = 0; l < spec.num_waves; ++l) {
        sum += std::polar(spec.amplitude(l), 2.0 * std::numbers::pi * rng.uniform());
    }
    Complex diffuse;
    fill_standard_complex_gaussian(rng, &diffuse, 1);
    return sum + std::sqrt(spec.omega0) * diffuse;
}

LinkRealization draw_generalized_links(RngStream& rng, const ScenarioConfig& config) {
    const auto* gen = std::get_if<GeneralizedIid>(&config.variant);
    if (gen == nullptr) throw ConfigError("draw_generalized_links needs a generalized scenario");
    const auto n = static_cast<Eigen::Index>(config.element_count());
    const auto m = static_cast<Eigen::Index>(config.m_antennas);

    LinkRealization links;
    const double h2_amp = std::sqrt(db_to_linear(config.budget.beta2_db));
    links.h2.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        links.h2(i) = h2_amp * draw_multiwave_coefficient(rng, gen->ris_out);
    }
    const double g_amp =
        std::sqrt(config.geometry.element_area() * db_to_linear(config.budget.beta1_db));
    links.g.resize(n, m);
    for (Eigen::Index q = 0; q < m; ++q) {
        for (Eigen::Index i = 0; i < n; ++i) {
            links.g(i, q) = g_amp * draw_multiwave_coefficient(rng, gen->ris_in);
        }
    }
    links.hsd = Eigen::VectorXcd::Zero(m);
    if (config.budget.direct_link) {
        const double sd_amp = std::sqrt(db_to_linear(config.budget.beta_sd_db));
        for (Eigen::Index q = 0; q < m; ++q) {
            links.hsd(q) = sd_amp * draw_multiwave_coefficient(rng, gen->direct);
        }
    }
    return links;
}

std::vector<double> apply_phase_design(RngStream& rng, const LinkRealization& links, double kappa,
                                       std::size_t reference_antenna) {
    const auto q = static_cast<Eigen::Index>(reference_antenna);
    if (q >= links.g.cols() || q >= links.hsd.size()) {
        throw ConfigError("reference antenna index out of range");
    }
    // arg(0) = 0, so a blocked direct path contributes no phase offset.
    const double direct_phase = std::arg(links.hsd(q));
    std::vector<double> phases = sample_von_mises(rng, kappa, static_cast<std::size_t>(links.h2.size()));
    for (Eigen::Index i = 0; i < links.h2.size(); ++i) {
        phases[static_cast<std::size_t>(i)] +=
            direct_phase - std::arg(links.g(i, q)) - std::arg(links.h2(i));
    }
    return phases;
}

double equivalent_magnitude(const LinkRealization& links, std::span<const double> phases) {
    const Eigen::Index n = links.h2.size();
    if (static_cast<Eigen::Index>(phases.size()) != n) {
        throw ConfigError("phase vector length does not match the RIS");
    }
    Eigen::VectorXcd reflected(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        reflected(i) = links.h2(i) * std::polar(1.0, phases[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXcd composite = links.g.transpose() * reflected + links.hsd;
    return composite.norm();
}

ChannelSampleSet simulate_equivalent_channel(const RngStream& rng, const ScenarioConfig& config) {
    config.validate();
    ChannelSampleSet out;
    out.config_digest = config_digest(config);
    out.seed = rng.seed();
    out.stream_id = rng.stream_id();
    out.samples.assign(config.sample_count, 0.0);

    const bool correlated = config.is_correlated_rayleigh();
    std::optional<CorrelationMatrix> corr;
    if (correlated) {
        corr.emplace(scenario_correlation(config));
        corr->factor();  // factor once before fanning out
    }

    parallel_for(config.sample_count, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            RngStream local = rng.split(j);
            const LinkRealization links = correlated
                                              ? draw_correlated_rayleigh_links(local, config, *corr)
                                              : draw_generalized_links(local, config);
            const std::vector<double> phases = apply_phase_design(local, links, config.kappa);
            out.samples[j] = equivalent_magnitude(links, phases);
        }
    }, 0, 256);
    return out;
}

double snr_from_magnitude(double h, double rho_db) {
    if (!(h >= 0.0)) throw ConfigError("magnitude must be non-negative");
    return db_to_linear(rho_db) * h * h;
}

}  // namespace risem

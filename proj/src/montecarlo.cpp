#include "see/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "see/diffusion.hpp"
#include "see/rng.hpp"

namespace see::mc {

using spectral::SpectralVector;

SamplerConfig SamplerConfig::make(std::uint64_t seed, long long samples, long long steps) {
    if (samples < 1) throw std::invalid_argument("SamplerConfig: samples must be >= 1");
    if (steps < 1) throw std::invalid_argument("SamplerConfig: steps must be >= 1");
    return SamplerConfig{seed, samples, steps};
}

std::vector<SpectralVector> sample_exact(const spectral::OperatorParams& p,
                                         const moments::MomentQuery& query,
                                         const SamplerConfig& cfg) {
    // noise variance of the e_1 coefficient (unweighted: q = 0)
    moments::MomentQuery raw = query;
    raw.q = 0.0;
    const double sigma2 = moments::second_moment_exact(p, raw).noise_variance;
    const double sigma = std::sqrt(sigma2);

    SpectralVector deterministic;
    if (query.n <= 1)
        deterministic = spectral::semigroup_apply(p, query.t, query.tuple.back());

    const rng::GaussianStream stream(cfg.seed);
    const SpectralVector e1 = SpectralVector::basis(1);
    std::vector<SpectralVector> draws;
    draws.reserve(static_cast<std::size_t>(cfg.samples));
    for (long long i = 0; i < cfg.samples; ++i) {
        const double g = sigma * stream.normal(static_cast<std::uint64_t>(i));
        draws.push_back(spectral::combine(1.0, deterministic, g, e1));
    }
    return draws;
}

SamplePath simulate_exponential_euler(const spectral::OperatorParams& p,
                                      const SpectralVector& x, double t,
                                      const SamplerConfig& cfg, std::uint64_t path_index) {
    if (!(t > 0.0) || t > p.T)
        throw std::invalid_argument("simulate_exponential_euler: t must lie in (0, T]");
    const long long steps = cfg.steps;
    const double h = t / static_cast<double>(steps);
    const double sqrt_h = std::sqrt(h);
    const rng::GaussianStream stream(cfg.seed);
    const SpectralVector e1 = SpectralVector::basis(1);

    SamplePath path;
    path.times.reserve(static_cast<std::size_t>(steps) + 1);
    path.states.reserve(static_cast<std::size_t>(steps) + 1);
    path.times.push_back(0.0);
    path.states.push_back(x);
    SpectralVector state = x;
    for (long long k = 0; k < steps; ++k) {
        const double dw = sqrt_h * stream.normal(path_index, static_cast<std::uint64_t>(k));
        const double b = diffusion::eval_B(state).scalar;
        state = spectral::semigroup_apply(p, h, spectral::combine(1.0, state, b * dw, e1));
        path.times.push_back(static_cast<double>(k + 1) * t / static_cast<double>(steps));
        path.states.push_back(state);
    }
    return path;
}

MomentEstimate estimate_moment(const spectral::OperatorParams& p,
                               std::span<const SpectralVector> samples, double q) {
    if (samples.size() < 2)
        throw std::invalid_argument("estimate_moment: needs at least 2 samples");
    std::vector<double> values;
    values.reserve(samples.size());
    double sum = 0.0, comp = 0.0;
    for (const auto& s : samples) {
        const double norm = spectral::hr_norm(p, -q, s);
        values.push_back(norm * norm);
        const double y = values.back() - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / static_cast<double>(values.size());
    double var = 0.0, vcomp = 0.0;
    for (double v : values) {
        const double y = (v - mean) * (v - mean) - vcomp;
        const double t = var + y;
        vcomp = (t - var) - y;
        var = t;
    }
    var /= static_cast<double>(values.size() - 1);
    return MomentEstimate{mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace see::mc

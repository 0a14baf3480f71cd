#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "see/moments.hpp"
#include "see/spectral.hpp"

namespace see::mc {

struct SamplerConfig {
    std::uint64_t seed = 0;
    long long samples = 1;
    long long steps = 1;

    static SamplerConfig make(std::uint64_t seed, long long samples, long long steps = 1);
};

struct SamplePath {
    std::vector<double> times;
    std::vector<spectral::SpectralVector> states;
};

/// I.i.d. draws of X^{n,u}_t, exact in law: the deterministic part
/// 1_{0,1}(n) e^{tA} u_n plus G e_1 with G ~ N(0, sigma^2), sigma^2 the
/// Ito-isometry noise variance at q = 0.  Reproducible for a fixed seed.
std::vector<spectral::SpectralVector> sample_exact(const spectral::OperatorParams& p,
                                                   const moments::MomentQuery& query,
                                                   const SamplerConfig& cfg);

/// Exponential-Euler path on the uniform grid t_k = k t / steps:
///   X_{k+1} = e^{hA} (X_k + B(X_k) dW_k),  dW_k ~ N(0, h).
/// A cross-check of the exact machinery, not a convergence claim.
SamplePath simulate_exponential_euler(const spectral::OperatorParams& p,
                                      const spectral::SpectralVector& x, double t,
                                      const SamplerConfig& cfg, std::uint64_t path_index = 0);

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Sample mean and standard error of ||.||^2_{H_{-q}} over the draws.
MomentEstimate estimate_moment(const spectral::OperatorParams& p,
                               std::span<const spectral::SpectralVector> samples, double q);

}  // namespace see::mc

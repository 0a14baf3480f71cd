#pragma once

#include <span>
#include <vector>

#include "see/setpart.hpp"
#include "see/spectral.hpp"

namespace see::diffusion {

/// Values of B and of its derivatives all lie in span{e_1}; only the e_1
/// coefficient is carried.
struct DiffusionValue {
    double scalar = 0.0;
};

/// B(v) = sqrt(1 + ||P v||_H^2) e_1.
DiffusionValue eval_B(const spectral::SpectralVector& v);

/// n-th derivative of B at v0 in directions args = (v_1, ..., v_n), summed
/// over the partitions of {1..n}: blocks of size >= 3 vanish, singleton
/// blocks pair P v0 against v_min, pair blocks pair P v_max against v_min,
/// each partition weighted by prod_{i<#blocks} (1 - 2i) over the power
/// (1 + ||P v0||^2)^{#blocks - 1/2}.
DiffusionValue eval_derivative_closed(const spectral::SpectralVector& v0,
                                      std::span<const spectral::SpectralVector> args);

/// Same, with the partition family supplied by the caller (it must be the
/// full family over n = args.size()).
DiffusionValue eval_derivative_closed(const spectral::SpectralVector& v0,
                                      std::span<const spectral::SpectralVector> args,
                                      const setpart::PartitionFamily& partitions);

/// Step-size ladder for the mixed central difference; entries decreasing.
struct FdSchedule {
    std::vector<double> steps;

    /// Single base step eps^(1/(order+2)) with one halving for Richardson
    /// extrapolation.
    static FdSchedule standard(int order);
};

/// Mixed central-difference approximation of the n-th derivative (n =
/// args.size() <= 4), Richardson-extrapolated over the schedule.  Purely an
/// independent cross-check of eval_derivative_closed.
DiffusionValue eval_derivative_fd(const spectral::SpectralVector& v0,
                                  std::span<const spectral::SpectralVector> args,
                                  const FdSchedule& schedule);

/// sum over all partitions of {1..n} of (2 #blocks)^{#blocks}; dominates
/// sup_v ||B^(n)(v)|| as an operator norm bound.
double derivative_sup_bound(int n);

}  // namespace see::diffusion

#include "see/diffusion.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace see::diffusion {

using spectral::SpectralVector;

DiffusionValue eval_B(const SpectralVector& v) {
    const SpectralVector pv = spectral::project_tail(v);
    double norm2 = 0.0;
    for (double c : pv.coeffs()) norm2 += c * c;
    return DiffusionValue{std::sqrt(1.0 + norm2)};
}

DiffusionValue eval_derivative_closed(const SpectralVector& v0,
                                      std::span<const SpectralVector> args) {
    const auto family = setpart::enumerate_partitions(static_cast<int>(args.size()));
    return eval_derivative_closed(v0, args, family);
}

DiffusionValue eval_derivative_closed(const SpectralVector& v0,
                                      std::span<const SpectralVector> args,
                                      const setpart::PartitionFamily& partitions) {
    const int n = static_cast<int>(args.size());
    if (n < 1) throw std::invalid_argument("eval_derivative_closed: order must be >= 1");
    if (partitions.n != n)
        throw std::invalid_argument("eval_derivative_closed: partition family order mismatch");

    const SpectralVector pv0 = spectral::project_tail(v0);
    double pnorm2 = 0.0;
    for (double c : pv0.coeffs()) pnorm2 += c * c;
    const double base = 1.0 + pnorm2;

    std::vector<SpectralVector> pargs;
    pargs.reserve(args.size());
    for (const auto& a : args) pargs.push_back(spectral::project_tail(a));

    double sum = 0.0;
    for (const auto& part : partitions.members) {
        bool skip = false;
        for (const auto& block : part.blocks)
            if (block.size() > 2) { skip = true; break; }
        if (skip) continue;  // indicator 1_{1,2}(#I) = 0

        double term = 1.0;
        for (const auto& block : part.blocks) {
            if (block.size() == 1) {
                term *= spectral::inner(pv0, pargs[static_cast<std::size_t>(block[0] - 1)]);
            } else {
                term *= spectral::inner(pargs[static_cast<std::size_t>(block[1] - 1)],
                                        pargs[static_cast<std::size_t>(block[0] - 1)]);
            }
            if (term == 0.0) break;
        }
        if (term == 0.0) continue;

        const int blocks = part.block_count();
        double coef = 1.0;
        for (int i = 0; i < blocks; ++i) coef *= (1.0 - 2.0 * i);
        sum += coef * term / std::pow(base, blocks - 0.5);
    }
    return DiffusionValue{sum};
}

FdSchedule FdSchedule::standard(int order) {
    const double h = std::pow(2.220446049250313e-16, 1.0 / (order + 2));
    return FdSchedule{{h, 0.5 * h}};
}

namespace {

// mixed central difference: (2h)^{-n} sum over sign choices of
// prod(sign_i) * g(sum_i sign_i h v_i)
double mixed_central_difference(const SpectralVector& v0,
                                std::span<const SpectralVector> args, double h) {
    const int n = static_cast<int>(args.size());
    const int corners = 1 << n;
    double acc = 0.0;
    for (int mask = 0; mask < corners; ++mask) {
        SpectralVector point = v0;
        for (int i = 0; i < n; ++i) {
            const double s = (mask >> i & 1) ? h : -h;
            point = spectral::combine(1.0, point, s, args[static_cast<std::size_t>(i)]);
        }
        const int minus_count = n - std::popcount(static_cast<unsigned>(mask));
        acc += (minus_count % 2 == 0 ? 1.0 : -1.0) * eval_B(point).scalar;
    }
    return acc / std::pow(2.0 * h, n);
}

}  // namespace

DiffusionValue eval_derivative_fd(const SpectralVector& v0,
                                  std::span<const SpectralVector> args,
                                  const FdSchedule& schedule) {
    const int n = static_cast<int>(args.size());
    if (n < 1 || n > 4)
        throw std::invalid_argument("eval_derivative_fd: order must be in 1..4");
    if (schedule.steps.empty())
        throw std::invalid_argument("eval_derivative_fd: empty step schedule");

    const std::size_t levels = schedule.steps.size();
    std::vector<double> row(levels);
    for (std::size_t i = 0; i < levels; ++i)
        row[i] = mixed_central_difference(v0, args, schedule.steps[i]);

    // Neville extrapolation in h^2 (central differences have even error series)
    std::vector<double> h2(levels);
    for (std::size_t i = 0; i < levels; ++i) h2[i] = schedule.steps[i] * schedule.steps[i];
    for (std::size_t j = 1; j < levels; ++j)
        for (std::size_t i = levels - 1; i >= j; --i) {
            const double ratio = h2[i - j] / h2[i];
            row[i] = row[i] + (row[i] - row[i - 1]) / (ratio - 1.0);
            if (i == j) break;
        }
    return DiffusionValue{row[levels - 1]};
}

double derivative_sup_bound(int n) {
    if (n < 1) throw std::invalid_argument("derivative_sup_bound: n must be >= 1");
    const auto family = setpart::enumerate_partitions(n);
    double sum = 0.0;
    for (const auto& part : family.members) {
        const double b = 2.0 * part.block_count();
        sum += std::pow(b, part.block_count());
    }
    return sum;
}

}  // namespace see::diffusion

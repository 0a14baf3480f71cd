#pragma once

#include <vector>

#include "see/setpart.hpp"
#include "see/spectral.hpp"

namespace see::moments {

/// Moment of the derivative process X^{n,u}_t in the H_{-q} norm.
struct MomentQuery {
    int n = 0;
    spectral::DerivativeTuple tuple;  // (u_0, ..., u_n)
    double t = 1.0;
    double q = 0.0;

    static MomentQuery make(spectral::DerivativeTuple tuple, double t, double q);
};

/// E||X^{n,u}_t||^2_{H_{-q}} split into its two contributions.  The
/// martingale cross term between them has zero expectation, so
/// second_moment = deterministic_part + noise_variance always.
struct MomentResult {
    double deterministic_part = 0.0;  // ||1_{0,1}(n) (-A)^{-q} e^{tA} u_n||^2
    double noise_variance = 0.0;      // c^{-2q} * Var of the Wiener integral
    double second_moment = 0.0;
};

/// e_1-coefficient of B^{(n)}(e^{sA}u_0)(e^{sA}u_1,...,e^{sA}u_n); for n = 0
/// the scalar of B(e^{sA}u_0).
double scalar_path(const spectral::OperatorParams& p, const spectral::DerivativeTuple& tuple,
                   double s);
double scalar_path(const spectral::OperatorParams& p, const spectral::DerivativeTuple& tuple,
                   double s, const setpart::PartitionFamily& partitions);

/// Exact second moment by Ito isometry:
///   ||1_{0,1}(n) (-A)^{-q} e^{tA} u_n||^2
///     + int_0^t c^{-2q} e^{-2c(t-s)} phi(s)^2 ds,
/// with the time integral evaluated by adaptive quadrature.
MomentResult second_moment_exact(const spectral::OperatorParams& p, const MomentQuery& query);

/// Same moment for a shifted test family, with phi built from the analytic
/// product-of-norms collapse.  For even n the integrand is a finite sum of
/// exponentials and is integrated term by term in closed form; odd orders
/// carry the (1 + ||P e^{sA} u_0||^2)^{K - 1/2} factor and are integrated
/// numerically on the analytic phi.
MomentResult second_moment_structured(const spectral::OperatorParams& p,
                                      const spectral::TestFamilySpec& spec, double t, double q);

/// e_1-coefficient of the flowed derivative along a shifted family, from the
/// analytic product-of-norms collapse (the phi inside
/// second_moment_structured); agrees pointwise with scalar_path on the
/// family tuple.
double scalar_path_structured(const spectral::OperatorParams& p,
                              const spectral::TestFamilySpec& spec, double s);

/// E||X||^p_{H_{-q}} = (p-1)!! * noise_variance^{p/2} for even p and n >= 2
/// (the process is then a centered scalar Gaussian times e_1).
double p_moment_gaussian(const MomentResult& result, int n, int p);

/// The combined lower bound on E||X^{n,u}_t||^2_{H_{-q}} along the family:
///   prefactor^2 * (1 - e^{-ct})
///     / (4 K^3 c^{2+4K eps-2 sum delta} N^{2m}) * sum_{j,k<=N} 1/(j^2+k^2),
/// prefactor = prod_{i<K}|1-2i| / (c^q e^{c(1+4K^3)t}
///   (2K^2)^{1+4K eps+2 sum|delta|} (1 + 1/(c^{2 eps}(1-4 eps)))^{K-1/2}).
/// Requires the admissible shift regime and sum delta >= 1/2 + 2 K eps.
double lower_bound_combined(const spectral::OperatorParams& p,
                            const spectral::TestFamilySpec& spec, double t, double q);

/// (||u_i||_{H_{-delta_i}})_{i=1..n} for the family tuple's last n entries.
std::vector<double> denominator_norms(const spectral::OperatorParams& p,
                                      const spectral::TestFamilySpec& spec);

/// sum_{j,k=1}^N 1/(j^2+k^2), computed exactly.
double sum_inverse_mode_squares(long long N);

/// int_0^t e^{-a(t-s)} e^{-b s} ds for a, b >= 0, stable for a ~ b and for
/// huge rates.
double exp_convolution_integral(double a, double b, double t);

}  // namespace see::moments

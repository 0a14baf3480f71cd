#include "see/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "see/diffusion.hpp"
#include "see/errors.hpp"
#include "see/quadrature.hpp"

namespace see::moments {

using spectral::Mode;
using spectral::OperatorParams;
using spectral::SpectralVector;
using spectral::TestFamilySpec;

MomentQuery MomentQuery::make(spectral::DerivativeTuple tuple, double t, double q) {
    if (tuple.empty()) throw std::invalid_argument("MomentQuery: tuple must hold u_0..u_n");
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("MomentQuery: t must be > 0");
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("MomentQuery: q must be >= 0");
    MomentQuery query;
    query.n = static_cast<int>(tuple.size()) - 1;
    query.tuple = std::move(tuple);
    query.t = t;
    query.q = q;
    return query;
}

double scalar_path(const OperatorParams& p, const spectral::DerivativeTuple& tuple, double s,
                   const setpart::PartitionFamily& partitions) {
    const int n = static_cast<int>(tuple.size()) - 1;
    if (n == 0) return diffusion::eval_B(spectral::semigroup_apply(p, s, tuple[0])).scalar;
    std::vector<SpectralVector> flowed;
    flowed.reserve(tuple.size());
    for (const auto& u : tuple) flowed.push_back(spectral::semigroup_apply(p, s, u));
    return diffusion::eval_derivative_closed(
               flowed[0], std::span<const SpectralVector>(flowed).subspan(1), partitions)
        .scalar;
}

double scalar_path(const OperatorParams& p, const spectral::DerivativeTuple& tuple, double s) {
    const int n = static_cast<int>(tuple.size()) - 1;
    if (n == 0) return diffusion::eval_B(spectral::semigroup_apply(p, s, tuple[0])).scalar;
    const auto partitions = setpart::enumerate_partitions(n);
    return scalar_path(p, tuple, s, partitions);
}

double exp_convolution_integral(double a, double b, double t) {
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const double diff = hi - lo;
    if (diff == 0.0) return t * std::exp(-a * t);
    return std::exp(-lo * t) * (-std::expm1(-diff * t)) / diff;
}

namespace {

double decay_rate_hint(const OperatorParams& p, const spectral::DerivativeTuple& tuple) {
    double sum = 2.0 * p.c;
    for (const auto& u : tuple) {
        const double md = spectral::mode_to_double(u.max_mode());
        sum += 4.0 * p.c * md * md;
    }
    return sum;
}

double deterministic_part(const OperatorParams& p, const spectral::DerivativeTuple& tuple,
                          double t, double q) {
    const int n = static_cast<int>(tuple.size()) - 1;
    if (n > 1) return 0.0;
    const double norm =
        spectral::hr_norm(p, -q, spectral::semigroup_apply(p, t, tuple.back()));
    return norm * norm;
}

}  // namespace

MomentResult second_moment_exact(const OperatorParams& p, const MomentQuery& query) {
    if (query.t > p.T)
        throw std::invalid_argument("second_moment_exact: t must lie in (0, T]");
    const double det = deterministic_part(p, query.tuple, query.t, query.q);

    const double weight_q = spectral::eigen_power(p, Mode{1}, -2.0 * query.q);
    const auto partitions =
        query.n >= 1 ? setpart::enumerate_partitions(query.n) : setpart::PartitionFamily{};
    const auto integrand = [&](double s) {
        const double phi = scalar_path(p, query.tuple, s, partitions);
        return weight_q * std::exp(-2.0 * p.c * (query.t - s)) * phi * phi;
    };
    const auto integral = quadrature::integrate_decaying(
        integrand, query.t, decay_rate_hint(p, query.tuple), 1e-13, 0.0);

    MomentResult result;
    result.deterministic_part = det;
    result.noise_variance = integral.value;
    result.second_moment = det + integral.value;
    return result;
}

namespace {

// analytic description of phi(s) along a shifted test family:
//   phi(s) = scale * prod_i S_i(s) / (1 + D(s))^{K - 1/2}     (odd n)
//   phi(s) = scale * prod_i S_i(s)                            (even n)
// with S_i(s) = sum_j w2[i][j] exp(-rate[i][j] s) the squared norm of the
// i-th projected factor and D the squared norm of the flowed base point.
struct StructuredPhi {
    double scale = 1.0;  // N^m * prod_{i<K} (1 - 2i)
    int K = 1;
    bool odd = false;
    std::vector<std::vector<double>> w2;    // K factors
    std::vector<std::vector<double>> rate;  // 2 c mu^2 per factor entry
    std::vector<double> d_w2, d_rate;       // denominator factor (odd only)
    double max_rate = 0.0;

    double operator()(double s) const {
        double value = scale;
        for (std::size_t i = 0; i < w2.size(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < w2[i].size(); ++j)
                sum += w2[i][j] * std::exp(-rate[i][j] * s);
            value *= sum;
        }
        if (odd) {
            double d = 0.0;
            for (std::size_t j = 0; j < d_w2.size(); ++j)
                d += d_w2[j] * std::exp(-d_rate[j] * s);
            value /= std::pow(1.0 + d, K - 0.5);
        }
        return value;
    }
};

StructuredPhi build_structured_phi(const OperatorParams& p, const TestFamilySpec& spec) {
    StructuredPhi phi;
    phi.K = spec.half_order();
    phi.odd = (spec.n % 2 == 1);
    phi.scale = std::pow(static_cast<double>(spec.N), spec.m);
    for (int i = 0; i < phi.K; ++i) phi.scale *= (1.0 - 2.0 * i);

    const Mode sp = spec.spacing();
    auto push_factor = [&](Mode offset, double r, std::vector<double>& w2,
                           std::vector<double>& rate) {
        w2.reserve(static_cast<std::size_t>(spec.N));
        rate.reserve(static_cast<std::size_t>(spec.N));
        Mode mode = offset;
        for (long long j = 1; j <= spec.N; ++j) {
            mode += sp;
            const double md = spectral::mode_to_double(mode);
            w2.push_back(spectral::eigen_power(p, mode, 2.0 * r));
            rate.push_back(2.0 * p.c * md * md);
            phi.max_rate = std::max(phi.max_rate, rate.back());
        }
    };

    // pair factors i = 1..K-1 with exponent (delta_{2i-1}+delta_{2i})/2 - eps;
    // the last factor pairs the -1/2-shifted entry:
    //   even n: ((delta_{n-1}+delta_n)/2 - 1/4 - eps)
    //   odd n:  (delta_n/2 - 1/4 - eps)
    phi.w2.resize(static_cast<std::size_t>(phi.K));
    phi.rate.resize(static_cast<std::size_t>(phi.K));
    for (int i = 1; i < phi.K; ++i) {
        const double r =
            0.5 * (spec.delta[static_cast<std::size_t>(2 * i - 2)] +
                   spec.delta[static_cast<std::size_t>(2 * i - 1)]) -
            spec.epsilon;
        push_factor(static_cast<Mode>(i), r, phi.w2[static_cast<std::size_t>(i - 1)],
                    phi.rate[static_cast<std::size_t>(i - 1)]);
    }
    double r_last;
    if (spec.n % 2 == 0)
        r_last = 0.5 * (spec.delta[static_cast<std::size_t>(spec.n - 2)] +
                        spec.delta[static_cast<std::size_t>(spec.n - 1)]) -
                 0.25 - spec.epsilon;
    else
        r_last = 0.5 * spec.delta[static_cast<std::size_t>(spec.n - 1)] - 0.25 - spec.epsilon;
    push_factor(static_cast<Mode>(phi.K), r_last, phi.w2[static_cast<std::size_t>(phi.K - 1)],
                phi.rate[static_cast<std::size_t>(phi.K - 1)]);

    if (phi.odd)
        push_factor(static_cast<Mode>(phi.K), -spec.epsilon, phi.d_w2, phi.d_rate);
    return phi;
}

// closed-form noise integral for even orders: expand prod_i S_i(s)^2 into
// individual exponentials and integrate each term exactly
double even_closed_form(const OperatorParams& p, const StructuredPhi& phi, double t,
                        double weight_q) {
    const std::size_t slots = 2 * phi.w2.size();
    std::vector<std::size_t> index(slots, 0);
    const std::size_t N = phi.w2[0].size();

    double total = 0.0, comp = 0.0;
    while (true) {
        double coef = 1.0, rate = 0.0;
        for (std::size_t s = 0; s < slots; ++s) {
            const std::size_t factor = s / 2;
            coef *= phi.w2[factor][index[s]];
            rate += phi.rate[factor][index[s]];
        }
        const double term = coef * exp_convolution_integral(2.0 * p.c, rate, t);
        const double y = term - comp;
        const double acc = total + y;
        comp = (acc - total) - y;
        total = acc;

        std::size_t s = 0;
        while (s < slots && ++index[s] == N) index[s++] = 0;
        if (s == slots) break;
    }
    return weight_q * phi.scale * phi.scale * total;
}

constexpr double kClosedFormTermCap = 4e7;

}  // namespace

MomentResult second_moment_structured(const OperatorParams& p, const TestFamilySpec& spec,
                                      double t, double q) {
    if (!(t > 0.0) || t > p.T)
        throw std::invalid_argument("second_moment_structured: t must lie in (0, T]");
    if (!(q >= 0.0)) throw std::invalid_argument("second_moment_structured: q must be >= 0");

    const double weight_q = spectral::eigen_power(p, Mode{1}, -2.0 * q);
    const StructuredPhi phi = build_structured_phi(p, spec);

    MomentResult result;
    // deterministic part exists only for n = 1 (analytic per-mode sum)
    if (spec.n == 1) {
        const Mode sp = spec.spacing();
        const double Nm = std::pow(static_cast<double>(spec.N), spec.m);
        const double r = spec.delta[0] - 0.5 - spec.epsilon;
        double det = 0.0;
        Mode mode = 1;
        for (long long j = 1; j <= spec.N; ++j) {
            mode += sp;
            const double md = spectral::mode_to_double(mode);
            const double w = Nm * spectral::eigen_power(p, mode, r - q) *
                             std::exp(-p.c * md * md * t);
            det += w * w;
        }
        result.deterministic_part = det;
    }

    const double expanded_terms =
        std::pow(static_cast<double>(spec.N), 2.0 * phi.K);
    if (!phi.odd && expanded_terms <= kClosedFormTermCap) {
        result.noise_variance = even_closed_form(p, phi, t, weight_q);
    } else {
        const auto integrand = [&](double s) {
            const double v = phi(s);
            return weight_q * std::exp(-2.0 * p.c * (t - s)) * v * v;
        };
        const double hint = 2.0 * phi.max_rate * phi.K + 2.0 * p.c;
        result.noise_variance =
            quadrature::integrate_decaying(integrand, t, hint, 1e-13, 0.0).value;
    }
    result.second_moment = result.deterministic_part + result.noise_variance;
    return result;
}

double scalar_path_structured(const OperatorParams& p, const TestFamilySpec& spec, double s) {
    if (!(s >= 0.0)) throw std::invalid_argument("scalar_path_structured: s must be >= 0");
    return build_structured_phi(p, spec)(s);
}

double p_moment_gaussian(const MomentResult& result, int n, int p) {
    if (n < 2)
        throw std::invalid_argument(
            "p_moment_gaussian: needs n >= 2 (pure centered Gaussian on e_1)");
    if (p < 2 || p % 2 != 0)
        throw std::invalid_argument("p_moment_gaussian: p must be an even integer >= 2");
    double double_factorial = 1.0;
    for (int k = p - 1; k > 1; k -= 2) double_factorial *= k;
    return double_factorial * std::pow(result.noise_variance, p / 2.0);
}

double lower_bound_combined(const OperatorParams& p, const TestFamilySpec& spec, double t,
                            double q) {
    spec.require_lower_bound_regime();
    const int K = spec.half_order();
    const double sum_delta = spec.delta_sum();
    if (sum_delta < 0.5 + 2.0 * K * spec.epsilon - 1e-12)
        throw RegimeError("lower_bound_combined: needs sum(delta) >= 1/2 + 2*ceil(n/2)*eps");
    if (!(t > 0.0) || t > p.T)
        throw std::invalid_argument("lower_bound_combined: t must lie in (0, T]");
    if (!(q >= 0.0)) throw std::invalid_argument("lower_bound_combined: q must be >= 0");

    double odd_product = 1.0;
    for (int i = 0; i < K; ++i) odd_product *= std::abs(1.0 - 2.0 * i);
    const double sup_term = 1.0 + spectral::small_norm_bound(p, spec.epsilon);
    const double prefactor =
        odd_product /
        (std::pow(p.c, q) * std::exp(p.c * (1.0 + 4.0 * std::pow(K, 3)) * t) *
         std::pow(2.0 * K * K, 1.0 + 4.0 * K * spec.epsilon + 2.0 * spec.delta_abs_sum()) *
         std::pow(sup_term, K - 0.5));

    const double integral_lb =
        (-std::expm1(-p.c * t)) /
        (4.0 * std::pow(K, 3) *
         std::pow(p.c, 2.0 + 4.0 * K * spec.epsilon - 2.0 * sum_delta) *
         std::pow(static_cast<double>(spec.N), 2.0 * spec.m)) *
        sum_inverse_mode_squares(spec.N);
    return prefactor * prefactor * integral_lb;
}

std::vector<double> denominator_norms(const OperatorParams& p, const TestFamilySpec& spec) {
    const auto tuple = spectral::test_tuple_u(p, spec);
    std::vector<double> norms;
    norms.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 1; i <= spec.n; ++i)
        norms.push_back(spectral::hr_norm(p, -spec.delta[static_cast<std::size_t>(i - 1)],
                                          tuple[static_cast<std::size_t>(i)]));
    return norms;
}

double sum_inverse_mode_squares(long long N) {
    if (N < 1) throw std::invalid_argument("sum_inverse_mode_squares: N must be >= 1");
    double sum = 0.0;
    for (long long j = 1; j <= N; ++j) {
        const double j2 = static_cast<double>(j) * static_cast<double>(j);
        for (long long k = 1; k <= N; ++k)
            sum += 1.0 / (j2 + static_cast<double>(k) * static_cast<double>(k));
    }
    return sum;
}

}  // namespace see::moments

#include "see/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "see/errors.hpp"

namespace see::spectral {

namespace {
// coefficients below this are treated as underflow noise after semigroup decay
constexpr double kDropThreshold = 1e-300;
}

std::string mode_to_string(Mode m) {
    if (m == 0) return "0";
    std::string out;
    while (m > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
        m /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

SpectralVector SpectralVector::basis(Mode mode, double coeff) {
    if (mode < 1) throw std::invalid_argument("SpectralVector: modes start at 1");
    SpectralVector v;
    if (coeff != 0.0) {
        v.modes_.push_back(mode);
        v.coeffs_.push_back(coeff);
    }
    return v;
}

SpectralVector SpectralVector::from_terms(std::vector<std::pair<Mode, double>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SpectralVector v;
    for (const auto& [mode, coeff] : terms) {
        if (mode < 1) throw std::invalid_argument("SpectralVector: modes start at 1");
        if (!v.modes_.empty() && v.modes_.back() == mode) {
            v.coeffs_.back() += coeff;
            if (v.coeffs_.back() == 0.0) {
                v.modes_.pop_back();
                v.coeffs_.pop_back();
            }
        } else if (coeff != 0.0) {
            v.modes_.push_back(mode);
            v.coeffs_.push_back(coeff);
        }
    }
    return v;
}

double SpectralVector::coeff(Mode mode) const {
    auto it = std::lower_bound(modes_.begin(), modes_.end(), mode);
    if (it == modes_.end() || *it != mode) return 0.0;
    return coeffs_[static_cast<std::size_t>(it - modes_.begin())];
}

Mode SpectralVector::max_mode() const { return modes_.empty() ? Mode{0} : modes_.back(); }

SpectralVector combine(double alpha, const SpectralVector& v, double beta,
                       const SpectralVector& w) {
    SpectralVector out;
    out.modes_.reserve(v.size() + w.size());
    out.coeffs_.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    auto push = [&out](Mode m, double c) {
        if (c != 0.0) {
            out.modes_.push_back(m);
            out.coeffs_.push_back(c);
        }
    };
    while (i < v.size() && j < w.size()) {
        if (v.modes_[i] < w.modes_[j]) {
            push(v.modes_[i], alpha * v.coeffs_[i]);
            ++i;
        } else if (w.modes_[j] < v.modes_[i]) {
            push(w.modes_[j], beta * w.coeffs_[j]);
            ++j;
        } else {
            push(v.modes_[i], alpha * v.coeffs_[i] + beta * w.coeffs_[j]);
            ++i;
            ++j;
        }
    }
    for (; i < v.size(); ++i) push(v.modes_[i], alpha * v.coeffs_[i]);
    for (; j < w.size(); ++j) push(w.modes_[j], beta * w.coeffs_[j]);
    return out;
}

OperatorParams OperatorParams::make(double c, double T) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("OperatorParams: c must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("OperatorParams: T must be > 0");
    return OperatorParams{c, T};
}

double eigen_power(const OperatorParams& p, double mode, double r) {
    if (r == 0.0) return 1.0;
    const double x = p.c * mode * mode;
    if (x > 1e150 || x < 1e-150) return std::exp(r * std::log(x));
    return std::pow(x, r);
}

double eigen_power(const OperatorParams& p, Mode mode, double r) {
    return eigen_power(p, mode_to_double(mode), r);
}

SpectralVector semigroup_apply(const OperatorParams& p, double t, const SpectralVector& v) {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    if (t == 0.0) return v;
    std::vector<std::pair<Mode, double>> terms;
    terms.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double md = mode_to_double(v.modes()[i]);
        const double c = v.coeffs()[i] * std::exp(-p.c * md * md * t);
        if (std::abs(c) >= kDropThreshold) terms.emplace_back(v.modes()[i], c);
    }
    return SpectralVector::from_terms(std::move(terms));
}

SpectralVector frac_power_apply(const OperatorParams& p, double r, const SpectralVector& v) {
    std::vector<std::pair<Mode, double>> terms;
    terms.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        terms.emplace_back(v.modes()[i], v.coeffs()[i] * eigen_power(p, v.modes()[i], r));
    return SpectralVector::from_terms(std::move(terms));
}

SpectralVector project_tail(const SpectralVector& v) {
    if (v.empty() || v.modes().front() != 1) return v;
    std::vector<std::pair<Mode, double>> terms;
    terms.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) terms.emplace_back(v.modes()[i], v.coeffs()[i]);
    return SpectralVector::from_terms(std::move(terms));
}

double hr_norm(const OperatorParams& p, double r, const SpectralVector& v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = eigen_power(p, v.modes()[i], r) * v.coeffs()[i];
        sum += w * w;
    }
    return std::sqrt(sum);
}

double inner(const SpectralVector& v, const SpectralVector& w) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < v.size() && j < w.size()) {
        if (v.modes()[i] < w.modes()[j])
            ++i;
        else if (w.modes()[j] < v.modes()[i])
            ++j;
        else {
            sum += v.coeffs()[i] * w.coeffs()[j];
            ++i;
            ++j;
        }
    }
    return sum;
}

SpectralVector test_vector_v(const OperatorParams& p, Mode k, double r, Mode n, long long N) {
    if (n < 1) throw std::invalid_argument("test_vector_v: spacing n must be >= 1");
    if (N < 1) throw std::invalid_argument("test_vector_v: N must be >= 1");
    const Mode limit = (Mode{1} << 126);
    if (n > (limit - k) / static_cast<Mode>(N))
        throw RegimeError("test_vector_v: mode index exceeds 128-bit range");
    std::vector<std::pair<Mode, double>> terms;
    terms.reserve(static_cast<std::size_t>(N));
    Mode mode = k;
    for (long long j = 1; j <= N; ++j) {
        mode += n;  // k + j*n
        terms.emplace_back(mode, eigen_power(p, mode, r));
    }
    return SpectralVector::from_terms(std::move(terms));
}

TestFamilySpec TestFamilySpec::make(int n, int m, double epsilon, std::vector<double> delta,
                                    long long N) {
    if (n < 1) throw std::invalid_argument("TestFamilySpec: n must be >= 1");
    if (m < 0) throw std::invalid_argument("TestFamilySpec: m must be >= 0");
    if (N < 1) throw std::invalid_argument("TestFamilySpec: N must be >= 1");
    if (!std::isfinite(epsilon)) throw std::invalid_argument("TestFamilySpec: epsilon must be finite");
    if (delta.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("TestFamilySpec: delta must have exactly n entries");
    for (double d : delta)
        if (!std::isfinite(d)) throw std::invalid_argument("TestFamilySpec: delta entries must be finite");
    return TestFamilySpec{n, m, epsilon, std::move(delta), N};
}

double TestFamilySpec::delta_sum() const {
    double s = 0.0;
    for (double d : delta) s += d;
    return s;
}

double TestFamilySpec::delta_abs_sum() const {
    double s = 0.0;
    for (double d : delta) s += std::abs(d);
    return s;
}

bool TestFamilySpec::lower_bound_regime() const {
    if (!(epsilon > 0.0 && epsilon < 0.25)) return false;
    return static_cast<double>(m) >= 1.0 / (4.0 * epsilon) - 1.0 - 1e-12;
}

void TestFamilySpec::require_lower_bound_regime() const {
    if (!lower_bound_regime())
        throw RegimeError(
            "test family outside the admissible regime: need epsilon in (0, 1/4) and m >= "
            "1/(4 epsilon) - 1");
}

Mode TestFamilySpec::spacing() const {
    const int K = half_order();
    Mode sp = static_cast<Mode>(K);
    // keep the largest family mode, K + N * spacing, within 128 bits
    const Mode limit = (Mode{1} << 125) / static_cast<Mode>(N);
    for (int i = 0; i < m; ++i) {
        sp *= static_cast<Mode>(N);
        if (sp > limit) throw RegimeError("test family mode spacing exceeds 128-bit range");
    }
    return sp;
}

DerivativeTuple test_tuple_u(const OperatorParams& p, const TestFamilySpec& spec) {
    const int K = spec.half_order();
    const Mode sp = spec.spacing();
    const double Nm = std::pow(static_cast<double>(spec.N), spec.m);

    DerivativeTuple tuple;
    tuple.reserve(static_cast<std::size_t>(spec.n) + 1);
    if (spec.n % 2 == 0)
        tuple.push_back(SpectralVector::basis(1));
    else
        tuple.push_back(test_vector_v(p, static_cast<Mode>(K), -spec.epsilon, sp, spec.N));
    for (int i = 1; i <= spec.n; ++i) {
        const Mode offset = static_cast<Mode>((i + 1) / 2);
        double r = spec.delta[static_cast<std::size_t>(i - 1)] - spec.epsilon;
        if (i == spec.n) r -= 0.5;
        SpectralVector v = test_vector_v(p, offset, r, sp, spec.N);
        if (i == spec.n && spec.m > 0) v = combine(Nm, v, 0.0, SpectralVector::zero());
        tuple.push_back(std::move(v));
    }
    return tuple;
}

const SpectralVector& select_theta(int i, const DerivativeTuple& tuple) {
    if (i < 1 || static_cast<std::size_t>(i) > tuple.size())
        throw std::out_of_range("select_theta: index out of range");
    return tuple[static_cast<std::size_t>(i - 1)];
}

double small_norm_bound(const OperatorParams& p, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.25))
        throw RegimeError("small_norm_bound: epsilon must lie in (0, 1/4)");
    return 1.0 / (std::pow(p.c, 2.0 * epsilon) * (1.0 - 4.0 * epsilon));
}

double big_norm_bound(const OperatorParams& p, double epsilon) {
    if (!(epsilon > 0.0)) throw RegimeError("big_norm_bound: epsilon must be > 0");
    const double power = 2.0 + 4.0 * epsilon;
    // partial sum plus integral tail bound; the sandwich gap j^{-power}
    // drops below 1e-12 before j reaches 1e6
    double sum = 0.0;
    long long j = 0;
    double gap = 1.0;
    while (gap >= 1e-12) {
        ++j;
        gap = std::pow(static_cast<double>(j), -power);
        sum += gap;
    }
    sum += std::pow(static_cast<double>(j), 1.0 - power) / (power - 1.0);
    return std::pow(p.c, -(1.0 + 2.0 * epsilon)) * sum;
}

}  // namespace see::spectral

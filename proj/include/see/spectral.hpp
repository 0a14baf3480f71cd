#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace see::spectral {

/// Basis-mode index.  The shifted test families reach indices near
/// K * N^m * N which can exceed 2^64, so modes are kept in 128 bits and
/// compared exactly; analytic weights use the double image.
using Mode = unsigned __int128;

std::string mode_to_string(Mode m);
inline double mode_to_double(Mode m) { return static_cast<double>(m); }

/// Finitely supported vector in span{e_1, e_2, ...}, stored sparsely.
/// Invariants: modes strictly increasing, all >= 1, no zero coefficients.
class SpectralVector {
  public:
    SpectralVector() = default;

    static SpectralVector zero() { return {}; }
    static SpectralVector basis(Mode mode, double coeff = 1.0);
    /// Canonicalizes arbitrary (mode, coefficient) terms: sorts, merges
    /// duplicates, drops zeros.  Modes must be >= 1.
    static SpectralVector from_terms(std::vector<std::pair<Mode, double>> terms);

    std::size_t size() const { return modes_.size(); }
    bool empty() const { return modes_.empty(); }
    const std::vector<Mode>& modes() const { return modes_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double coeff(Mode mode) const;
    Mode max_mode() const;  // 0 for the zero vector

    bool operator==(const SpectralVector& other) const = default;

  private:
    std::vector<Mode> modes_;
    std::vector<double> coeffs_;

    friend SpectralVector combine(double, const SpectralVector&, double, const SpectralVector&);
};

/// alpha*v + beta*w (canonical result).
SpectralVector combine(double alpha, const SpectralVector& v, double beta,
                       const SpectralVector& w);

/// Diagonal generator data: eigenvalue of mode n is -c n^2; T is the horizon.
struct OperatorParams {
    double c = 1.0;
    double T = 1.0;

    static OperatorParams make(double c, double T);
};

/// (c * mode^2)^r, evaluated in double precision (log-space for huge modes).
double eigen_power(const OperatorParams& p, Mode mode, double r);
double eigen_power(const OperatorParams& p, double mode, double r);

SpectralVector semigroup_apply(const OperatorParams& p, double t, const SpectralVector& v);
SpectralVector frac_power_apply(const OperatorParams& p, double r, const SpectralVector& v);
SpectralVector project_tail(const SpectralVector& v);
double hr_norm(const OperatorParams& p, double r, const SpectralVector& v);
double inner(const SpectralVector& v, const SpectralVector& w);

/// v^{k,r}_{n,N} = sum_{j=1}^N (c (k+jn)^2)^r e_{k+jn}.
SpectralVector test_vector_v(const OperatorParams& p, Mode k, double r, Mode n, long long N);

using DerivativeTuple = std::vector<SpectralVector>;  // (u_0, ..., u_n)

/// Parameters of the shifted test family u^{eps,m,delta}_{n,N}.
struct TestFamilySpec {
    int n = 1;                  // derivative order
    int m = 0;                  // power index (modes are spaced by K N^m)
    double epsilon = 0.0;       // spectral shift
    std::vector<double> delta;  // delta_1..delta_n
    long long N = 1;            // family index

    static TestFamilySpec make(int n, int m, double epsilon, std::vector<double> delta,
                               long long N);

    int half_order() const { return (n + 1) / 2; }  // ceil(n/2)
    double delta_sum() const;
    double delta_abs_sum() const;
    /// eps in (0, 1/4) and m >= 1/(4 eps) - 1: the admissible range of the
    /// lower-bound machinery.
    bool lower_bound_regime() const;
    void require_lower_bound_regime() const;  // throws RegimeError
    /// K * N^m, the mode spacing of the family (throws RegimeError when the
    /// index would not fit in 128 bits).
    Mode spacing() const;
};

/// The (n+1)-tuple u^{eps,m,delta}_{n,N}.  For odd n the base point is
/// v^{K,-eps}; for even n it is e_1.  Entry i carries offset ceil(i/2) and
/// exponent delta_i - eps, with the last entry shifted by -1/2 and scaled
/// by N^m.
DerivativeTuple test_tuple_u(const OperatorParams& p, const TestFamilySpec& spec);

/// theta^n_i: the i-th component (1-based).
const SpectralVector& select_theta(int i, const DerivativeTuple& tuple);

/// sup_N ||v^{i,-eps}_{n N^m, N}||_H^2 <= 1 / (c^{2 eps} (1 - 4 eps)),
/// valid for eps in (0, 1/4) and m >= 1/(4 eps) - 1.
double small_norm_bound(const OperatorParams& p, double epsilon);

/// sup_N N^{2m} ||v^{n,-1/2-eps}_{n N^m, N}||_H^2
///   <= c^{-(1+2 eps)} * sum_j j^{-(2+4 eps)};
/// the series is summed directly with an integral tail bound below 1e-12.
double big_norm_bound(const OperatorParams& p, double epsilon);

}  // namespace see::spectral

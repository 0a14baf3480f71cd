#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "see/spectral.hpp"

namespace see::experiments {

enum class EvalMode { exact, structured, montecarlo };

std::string mode_name(EvalMode mode);

/// One ratio run over a geometric N-grid.
///
/// Config file keys (flat `key = value` text, '#' comments):
///   c, T, t, n, q, delta (comma-separated), epsilon, m, n_grid_max, mode,
///   seed, out.
/// Required: n, delta.  Defaults: c=1, T=1, t=1, q=0, epsilon=0.1, m=auto,
/// n_grid_max=4096, mode=exact, out=ratio.csv.  n_grid_max must be a power
/// of two; the grid is 1, 2, 4, ..., n_grid_max.
struct ExperimentConfig {
    spectral::OperatorParams params{1.0, 1.0};
    int n = 1;
    std::vector<double> delta;
    double q = 0.0;
    double t = 1.0;
    double epsilon = 0.1;  // outer spectral shift; see family_spec()
    int m = -1;            // -1: pick the regime default
    long long n_grid_max = 4096;
    EvalMode mode = EvalMode::exact;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out = "ratio.csv";

    double delta_sum() const;
    bool divergent_regime() const;  // sum(delta) > 1/2
    /// Family shift actually used: epsilon / (2 ceil(n/2)) in the divergence
    /// regime (where it feeds the lower-bound chain), epsilon itself otherwise.
    double family_epsilon() const;
    /// Family power index: explicit m, or the regime default (smallest
    /// admissible m in the divergence regime, 0 otherwise).
    int family_m() const;
    std::vector<long long> grid() const;
    spectral::TestFamilySpec family_spec(long long N) const;

    void validate() const;  // throws ConfigError
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct RatioPoint {
    long long N = 0;
    double numerator = 0.0;    // (E||X||^2_{H_{-q}})^{1/2}
    double denominator = 0.0;  // prod_i ||u_i||_{H_{-delta_i}}
    double ratio = 0.0;
    double lower_bound = 0.0;  // on numerator^2; NaN when out of regime
    bool has_lower_bound = false;
};

struct RatioSeries {
    std::vector<RatioPoint> points;
    int n = 0;
    double delta_sum = 0.0;
    double family_epsilon = 0.0;
    int family_m = 0;
    std::string regime;  // "divergent" | "bounded" | "critical" by delta sum
};

RatioSeries ratio_series(const ExperimentConfig& cfg);

enum class Verdict { bounded, divergent, critical, inconclusive };

std::string verdict_name(Verdict v);

/// Classification of a computed series:
///  - critical when |sum(delta) - 1/2| < 1e-9;
///  - bounded when the plateau test passes (R at N_max within 5% of R two
///    grid octaves earlier);
///  - divergent when R is strictly increasing over the whole grid and
///    R_N^2 / sum_{j,k<=N} (j^2+k^2)^{-1} stays positive over the top half
///    (needs at least 6 grid points);
///  - inconclusive otherwise.
Verdict verdict(const RatioSeries& series, double delta_sum);

/// Fixed-layout CSV: header `N,numerator,denominator,ratio,lower_bound,regime`,
/// scientific notation with 17 significant digits, LF line endings.
void write_csv(const RatioSeries& series, std::ostream& os);

struct RunOutcome {
    RatioSeries series;
    Verdict verdict = Verdict::inconclusive;
    int exit_code = 0;
};

/// Executes a ratio config end to end: parse, run, write CSV, summarize.
/// Exit codes: 0 success, 2 config error, 3 regime violation,
/// 4 inconclusive under strict.
RunOutcome run_ratio(const ExperimentConfig& cfg, bool strict, std::ostream& summary);

}  // namespace see::experiments

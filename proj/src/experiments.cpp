#include "see/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "see/errors.hpp"
#include "see/moments.hpp"
#include "see/montecarlo.hpp"

namespace see::experiments {

namespace {
constexpr double kCriticalBand = 1e-9;
constexpr long long kMonteCarloSamples = 100000;
}

std::string mode_name(EvalMode mode) {
    switch (mode) {
        case EvalMode::exact: return "exact";
        case EvalMode::structured: return "structured";
        case EvalMode::montecarlo: return "montecarlo";
    }
    return "?";
}

double ExperimentConfig::delta_sum() const {
    double s = 0.0;
    for (double d : delta) s += d;
    return s;
}

bool ExperimentConfig::divergent_regime() const {
    return delta_sum() > 0.5 + kCriticalBand;
}

double ExperimentConfig::family_epsilon() const {
    const int K = (n + 1) / 2;
    return divergent_regime() ? epsilon / (2.0 * K) : epsilon;
}

int ExperimentConfig::family_m() const {
    if (m >= 0) return m;
    if (!divergent_regime()) return 0;
    // smallest admissible power index: m >= 1/(4 eps_family) - 1
    const double bound = 1.0 / (4.0 * family_epsilon()) - 1.0;
    return std::max(0, static_cast<int>(std::ceil(bound - 1e-12)));
}

std::vector<long long> ExperimentConfig::grid() const {
    std::vector<long long> g;
    for (long long N = 1; N <= n_grid_max; N *= 2) g.push_back(N);
    return g;
}

spectral::TestFamilySpec ExperimentConfig::family_spec(long long N) const {
    return spectral::TestFamilySpec::make(n, family_m(), family_epsilon(), delta, N);
}

void ExperimentConfig::validate() const {
    if (!(params.c > 0.0) || !std::isfinite(params.c)) throw ConfigError("config: c must be > 0");
    if (!(params.T > 0.0) || !std::isfinite(params.T)) throw ConfigError("config: T must be > 0");
    if (!(t > 0.0) || t > params.T) throw ConfigError("config: t must lie in (0, T]");
    if (n < 1) throw ConfigError("config: n must be >= 1");
    if (delta.size() != static_cast<std::size_t>(n))
        throw ConfigError("config: delta must have exactly n entries");
    if (!(q >= 0.0)) throw ConfigError("config: q must be >= 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("config: epsilon must be > 0");
    if (n_grid_max < 1) throw ConfigError("config: n_grid_max must be >= 1");
    if ((n_grid_max & (n_grid_max - 1)) != 0)
        throw ConfigError("config: n_grid_max must be a power of two");
    if (mode == EvalMode::montecarlo && !has_seed)
        throw ConfigError("config: montecarlo mode requires a seed");
}

namespace {

ExperimentConfig config_from_pairs(
    const std::vector<std::tuple<std::string, std::string, int>>& pairs) {
    ExperimentConfig cfg;
    bool saw_n = false, saw_delta = false, saw_T = false;
    double c = 1.0, T = 1.0;

    auto fail = [](int line, const std::string& what) {
        throw ConfigError("config line " + std::to_string(line) + ": " + what);
    };
    auto to_double = [&fail](const std::string& v, int line, const char* key) {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            fail(line, std::string("invalid number for '") + key + "': " + v);
        }
        return 0.0;
    };
    auto to_ll = [&fail](const std::string& v, int line, const char* key) {
        try {
            std::size_t pos = 0;
            const long long x = std::stoll(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            fail(line, std::string("invalid integer for '") + key + "': " + v);
        }
        return 0LL;
    };

    for (const auto& [key, value, line] : pairs) {
        if (key == "c") c = to_double(value, line, "c");
        else if (key == "T") { T = to_double(value, line, "T"); saw_T = true; }
        else if (key == "t") cfg.t = to_double(value, line, "t");
        else if (key == "n") { cfg.n = static_cast<int>(to_ll(value, line, "n")); saw_n = true; }
        else if (key == "q") cfg.q = to_double(value, line, "q");
        else if (key == "delta") {
            saw_delta = true;
            cfg.delta.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                // trim
                const auto b = item.find_first_not_of(" \t");
                const auto e = item.find_last_not_of(" \t");
                if (b == std::string::npos) fail(line, "empty entry in 'delta'");
                cfg.delta.push_back(to_double(item.substr(b, e - b + 1), line, "delta"));
            }
            if (cfg.delta.empty()) fail(line, "'delta' must hold at least one value");
        } else if (key == "epsilon") cfg.epsilon = to_double(value, line, "epsilon");
        else if (key == "m") {
            const long long value_m = to_ll(value, line, "m");
            if (value_m < 0 || value_m > 400) fail(line, "'m' must lie in 0..400");
            cfg.m = static_cast<int>(value_m);
        } else if (key == "n_grid_max") cfg.n_grid_max = to_ll(value, line, "n_grid_max");
        else if (key == "mode") {
            if (value == "exact") cfg.mode = EvalMode::exact;
            else if (value == "structured") cfg.mode = EvalMode::structured;
            else if (value == "montecarlo") cfg.mode = EvalMode::montecarlo;
            else fail(line, "mode must be exact | structured | montecarlo, got '" + value + "'");
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_ll(value, line, "seed"));
            cfg.has_seed = true;
        } else if (key == "out") cfg.out = value;
        else fail(line, "unknown key '" + key + "'");
    }
    if (!saw_n) throw ConfigError("config: missing required field 'n'");
    if (!saw_delta) throw ConfigError("config: missing required field 'delta'");
    if (!saw_T) T = std::max(1.0, cfg.t);
    if (!(c > 0.0) || !(T > 0.0)) throw ConfigError("config: c and T must be > 0");
    cfg.params = spectral::OperatorParams::make(c, T);
    cfg.validate();
    return cfg;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<std::tuple<std::string, std::string, int>> pairs;
    std::stringstream ss(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = raw.find_last_not_of(" \t\r");
        std::string lineText = raw.substr(begin, end - begin + 1);
        const auto eq = lineText.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + lineText + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(lineText.substr(0, eq));
        const std::string value = trim(lineText.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" +
                              key + "'");
        pairs.emplace_back(key, value, lineno);
    }
    return config_from_pairs(pairs);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

std::string regime_label(double delta_sum) {
    if (std::abs(delta_sum - 0.5) < kCriticalBand) return "critical";
    return delta_sum > 0.5 ? "divergent" : "bounded";
}

double numerator_squared(const ExperimentConfig& cfg, const spectral::TestFamilySpec& spec) {
    switch (cfg.mode) {
        case EvalMode::exact: {
            auto tuple = spectral::test_tuple_u(cfg.params, spec);
            const auto query = moments::MomentQuery::make(std::move(tuple), cfg.t, cfg.q);
            return moments::second_moment_exact(cfg.params, query).second_moment;
        }
        case EvalMode::structured:
            return moments::second_moment_structured(cfg.params, spec, cfg.t, cfg.q)
                .second_moment;
        case EvalMode::montecarlo: {
            auto tuple = spectral::test_tuple_u(cfg.params, spec);
            const auto query = moments::MomentQuery::make(std::move(tuple), cfg.t, cfg.q);
            const auto draws = mc::sample_exact(
                cfg.params, query, mc::SamplerConfig::make(cfg.seed, kMonteCarloSamples));
            return mc::estimate_moment(cfg.params, draws, cfg.q).mean;
        }
    }
    throw std::logic_error("numerator_squared: unreachable");
}

}  // namespace

RatioSeries ratio_series(const ExperimentConfig& cfg) {
    cfg.validate();
    RatioSeries series;
    series.n = cfg.n;
    series.delta_sum = cfg.delta_sum();
    series.family_epsilon = cfg.family_epsilon();
    series.family_m = cfg.family_m();
    series.regime = regime_label(series.delta_sum);

    const int K = (cfg.n + 1) / 2;
    const double lb_threshold = 0.5 + 2.0 * K * series.family_epsilon;
    for (long long N : cfg.grid()) {
        const auto spec = cfg.family_spec(N);
        RatioPoint point;
        point.N = N;
        point.numerator = std::sqrt(numerator_squared(cfg, spec));
        const auto norms = moments::denominator_norms(cfg.params, spec);
        point.denominator = 1.0;
        for (double v : norms) point.denominator *= v;
        point.ratio = point.numerator / point.denominator;
        point.has_lower_bound =
            spec.lower_bound_regime() && series.delta_sum >= lb_threshold - 1e-12;
        point.lower_bound =
            point.has_lower_bound
                ? moments::lower_bound_combined(cfg.params, spec, cfg.t, cfg.q)
                : std::numeric_limits<double>::quiet_NaN();
        if (!(std::isfinite(point.numerator) && point.numerator > 0.0) ||
            !(std::isfinite(point.denominator) && point.denominator > 0.0))
            throw RegimeError("ratio series produced a non-finite or non-positive entry at N=" +
                              std::to_string(N));
        series.points.push_back(point);
    }
    return series;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::divergent: return "divergent";
        case Verdict::critical: return "critical";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict verdict(const RatioSeries& series, double delta_sum) {
    if (series.points.empty()) return Verdict::inconclusive;
    if (std::abs(delta_sum - 0.5) < kCriticalBand) return Verdict::critical;

    const auto& pts = series.points;
    const std::size_t count = pts.size();

    // plateau: R at N_max within 5% of R two grid octaves earlier
    if (count >= 3) {
        const double last = pts[count - 1].ratio;
        const double earlier = pts[count - 3].ratio;
        if (earlier > 0.0 && std::abs(last - earlier) <= 0.05 * earlier)
            return Verdict::bounded;
    }

    // growth signature: strict increase plus positive liminf of R^2 / S_N
    // over the top half of the grid
    if (count >= 6) {
        bool increasing = true;
        for (std::size_t i = 0; i + 1 < count; ++i)
            if (!(pts[i].ratio < pts[i + 1].ratio)) { increasing = false; break; }
        if (increasing) {
            double liminf = std::numeric_limits<double>::infinity();
            for (std::size_t i = count / 2; i < count; ++i) {
                const double s = moments::sum_inverse_mode_squares(pts[i].N);
                liminf = std::min(liminf, pts[i].ratio * pts[i].ratio / s);
            }
            if (liminf > 0.0 && std::isfinite(liminf)) return Verdict::divergent;
        }
    }
    return Verdict::inconclusive;
}

void write_csv(const RatioSeries& series, std::ostream& os) {
    os << "N,numerator,denominator,ratio,lower_bound,regime\n";
    char buf[512];
    for (const auto& p : series.points) {
        std::snprintf(buf, sizeof(buf), "%lld,%.16e,%.16e,%.16e,%.16e,%s\n", p.N, p.numerator,
                      p.denominator, p.ratio, p.lower_bound, series.regime.c_str());
        os << buf;
    }
}

RunOutcome run_ratio(const ExperimentConfig& cfg, bool strict, std::ostream& summary) {
    RunOutcome outcome;
    outcome.series = ratio_series(cfg);
    outcome.verdict = verdict(outcome.series, outcome.series.delta_sum);

    std::ofstream csv(cfg.out, std::ios::binary);
    if (!csv) throw ConfigError("config: cannot write output file '" + cfg.out + "'");
    write_csv(outcome.series, csv);

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "ratio: n=%d delta_sum=%.6g regime=%s verdict=%s mode=%s points=%zu out=%s",
                  outcome.series.n, outcome.series.delta_sum, outcome.series.regime.c_str(),
                  verdict_name(outcome.verdict).c_str(), mode_name(cfg.mode).c_str(),
                  outcome.series.points.size(), cfg.out.c_str());
    summary << buf << "\n";

    outcome.exit_code = (strict && outcome.verdict == Verdict::inconclusive) ? 4 : 0;
    return outcome;
}

}  // namespace see::experiments

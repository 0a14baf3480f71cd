#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "see/errors.hpp"
#include "see/experiments.hpp"
#include "see/moments.hpp"
#include "see/montecarlo.hpp"

using namespace see;
using experiments::ExperimentConfig;
using experiments::Verdict;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

experiments::RatioSeries synthetic_series(const std::vector<double>& ratios) {
    experiments::RatioSeries series;
    long long N = 1;
    for (double r : ratios) {
        experiments::RatioPoint p;
        p.N = N;
        p.ratio = r;
        p.numerator = r;
        p.denominator = 1.0;
        series.points.push_back(p);
        N *= 2;
    }
    return series;
}

}  // namespace

TEST_CASE("config parsing: defaults and overrides") {
    const auto cfg = experiments::parse_config_text(
        "n = 1\n"
        "delta = 0.25\n");
    CHECK(cfg.params.c == 1.0);
    CHECK(cfg.params.T == 1.0);
    CHECK(cfg.t == 1.0);
    CHECK(cfg.q == 0.0);
    CHECK(cfg.epsilon == 0.1);
    CHECK(cfg.n_grid_max == 4096);
    CHECK(cfg.mode == experiments::EvalMode::exact);
    CHECK(cfg.out == "ratio.csv");
    CHECK(!cfg.has_seed);

    const auto full = experiments::parse_config_text(
        "# full config\n"
        "c = 2.0\n"
        "T = 3.0\n"
        "t = 1.5\n"
        "n = 2\n"
        "q = 0.5\n"
        "delta = 0.3, 0.3\n"
        "epsilon = 0.2\n"
        "m = 2\n"
        "n_grid_max = 16\n"
        "mode = structured\n"
        "seed = 42\n"
        "out = /tmp/series.csv\n");
    CHECK(full.params.c == 2.0);
    CHECK(full.delta == std::vector<double>{0.3, 0.3});
    CHECK(full.m == 2);
    CHECK(full.mode == experiments::EvalMode::structured);
    CHECK(full.has_seed);
    CHECK(full.seed == 42);
}

TEST_CASE("config parsing: diagnostics name the offending field") {
    CHECK_THROWS_WITH_AS(experiments::parse_config_text("n = 1\n"),
                         doctest::Contains("delta"), ConfigError);
    CHECK_THROWS_WITH_AS(experiments::parse_config_text("delta = 0.25\n"),
                         doctest::Contains("'n'"), ConfigError);
    CHECK_THROWS_WITH_AS(
        experiments::parse_config_text("n = 1\ndelta = 0.25\nwidgets = 3\n"),
        doctest::Contains("widgets"), ConfigError);
    CHECK_THROWS_WITH_AS(
        experiments::parse_config_text("n = 1\ndelta = 0.25\nmode = magic\n"),
        doctest::Contains("mode"), ConfigError);
    CHECK_THROWS_AS(experiments::parse_config_text("n = 2\ndelta = 0.25\n"), ConfigError);
    CHECK_THROWS_AS(experiments::parse_config_text("n = 1\ndelta = 0.25\nn_grid_max = 12\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        experiments::parse_config_text("n = 1\ndelta = 0.25\nmode = montecarlo\n"),
        ConfigError);
    CHECK_THROWS_AS(experiments::parse_config_text("n = 1\ndelta = 0.25\nepsilon = oops\n"),
                    ConfigError);
    CHECK_THROWS_AS(experiments::parse_config_text("n = 1\ndelta = 0.25\nm = -2\n"),
                    ConfigError);
    CHECK_THROWS_AS(experiments::parse_config_text("n = 1 delta = 0.25\n"), ConfigError);
}

TEST_CASE("family policy per regime") {
    // divergence: the shift is halved per ceil(n/2) and m defaults to the
    // smallest admissible value
    const auto div1 = experiments::parse_config_text("n = 1\ndelta = 1\n");
    CHECK(div1.divergent_regime());
    CHECK(div1.family_epsilon() == doctest::Approx(0.05));
    CHECK(div1.family_m() == 4);

    const auto div3 = experiments::parse_config_text("n = 3\ndelta = 0.2,0.2,0.2\n");
    CHECK(div3.family_epsilon() == doctest::Approx(0.025));
    CHECK(div3.family_m() == 9);

    // bounded: the shift passes through and m defaults to 0
    const auto bdd = experiments::parse_config_text("n = 2\ndelta = 0.2,0.2\nepsilon = 0.4\n");
    CHECK(!bdd.divergent_regime());
    CHECK(bdd.family_epsilon() == 0.4);
    CHECK(bdd.family_m() == 0);

    // explicit m wins
    const auto pinned = experiments::parse_config_text("n = 1\ndelta = 1\nm = 7\n");
    CHECK(pinned.family_m() == 7);

    const auto grid = experiments::parse_config_text("n = 1\ndelta = 1\nn_grid_max = 8\n").grid();
    CHECK(grid == std::vector<long long>{1, 2, 4, 8});
}

TEST_CASE("verdict rules") {
    CHECK(experiments::verdict(synthetic_series({1, 1, 1, 1, 1, 1, 1}), 0.25) ==
          Verdict::bounded);
    CHECK(experiments::verdict(synthetic_series({1, 2, 4, 8, 16, 32, 64}), 1.0) ==
          Verdict::divergent);
    CHECK(experiments::verdict(synthetic_series({1, 2, 4, 8, 16, 32, 64}), 0.5) ==
          Verdict::critical);
    // too-short grid in the divergence regime stays inconclusive
    CHECK(experiments::verdict(synthetic_series({1, 2, 4}), 1.0) == Verdict::inconclusive);
    CHECK(experiments::verdict(synthetic_series({1, 2, 4, 8, 16}), 1.0) ==
          Verdict::inconclusive);
    // non-monotone growth without a plateau is inconclusive
    CHECK(experiments::verdict(synthetic_series({1, 2, 1.5, 4, 8, 16, 32}), 1.0) ==
          Verdict::inconclusive);
    CHECK(experiments::verdict(experiments::RatioSeries{}, 1.0) == Verdict::inconclusive);
}

TEST_CASE("ratio series: exact and structured modes coincide") {
    const std::string base =
        "n = 2\n"
        "delta = 0.3, 0.3\n"
        "n_grid_max = 16\n";
    auto exact_cfg = experiments::parse_config_text(base + "mode = exact\n");
    auto structured_cfg = experiments::parse_config_text(base + "mode = structured\n");
    const auto exact = experiments::ratio_series(exact_cfg);
    const auto structured = experiments::ratio_series(structured_cfg);
    REQUIRE(exact.points.size() == structured.points.size());
    for (std::size_t i = 0; i < exact.points.size(); ++i) {
        CHECK(std::abs(exact.points[i].ratio - structured.points[i].ratio) <=
              1e-9 * structured.points[i].ratio);
        CHECK(exact.points[i].denominator == structured.points[i].denominator);
    }
    CHECK(exact.regime == "divergent");
}

TEST_CASE("ratio series: montecarlo mode tracks exact within four standard errors") {
    const std::string base =
        "n = 2\n"
        "delta = 0.3, 0.3\n"
        "n_grid_max = 4\n";
    auto exact_cfg = experiments::parse_config_text(base + "mode = exact\n");
    auto mc_cfg = experiments::parse_config_text(base + "mode = montecarlo\nseed = 9\n");
    const auto exact = experiments::ratio_series(exact_cfg);
    const auto sampled = experiments::ratio_series(mc_cfg);
    for (std::size_t i = 0; i < exact.points.size(); ++i) {
        // replay the sampler stream to recover the standard error of the
        // squared-norm estimate behind the series numerator
        const auto spec = mc_cfg.family_spec(exact.points[i].N);
        const auto query = moments::MomentQuery::make(
            spectral::test_tuple_u(mc_cfg.params, spec), mc_cfg.t, mc_cfg.q);
        const auto draws = mc::sample_exact(mc_cfg.params, query,
                                            mc::SamplerConfig::make(mc_cfg.seed, 100000));
        const auto est = mc::estimate_moment(mc_cfg.params, draws, mc_cfg.q);
        const double exact_sq = exact.points[i].numerator * exact.points[i].numerator;
        CHECK(sampled.points[i].numerator == std::sqrt(est.mean));  // same stream
        CHECK(std::abs(est.mean - exact_sq) <= 4.0 * est.std_error);
    }
}

TEST_CASE("bounded first-order family plateaus under the plain defaults") {
    auto cfg = experiments::parse_config_text("n = 1\ndelta = 0.25\nn_grid_max = 1024\n");
    CHECK(cfg.family_epsilon() == 0.1);
    CHECK(cfg.family_m() == 0);
    const auto series = experiments::ratio_series(cfg);
    const auto& pts = series.points;
    const double last = pts[pts.size() - 1].ratio;
    const double earlier = pts[pts.size() - 3].ratio;
    CHECK(std::abs(last - earlier) <= 0.05 * earlier);
    CHECK(experiments::verdict(series, series.delta_sum) == Verdict::bounded);
}

TEST_CASE("lower bound accompanies only the divergence regime") {
    auto div_cfg = experiments::parse_config_text("n = 1\ndelta = 1\nn_grid_max = 8\n");
    const auto div_series = experiments::ratio_series(div_cfg);
    for (const auto& p : div_series.points) {
        CHECK(p.has_lower_bound);
        CHECK(p.lower_bound > 0.0);
        CHECK(p.lower_bound <= p.numerator * p.numerator);
    }
    auto bdd_cfg =
        experiments::parse_config_text("n = 1\ndelta = 0.25\nepsilon = 0.4\nn_grid_max = 8\n");
    const auto bdd_series = experiments::ratio_series(bdd_cfg);
    for (const auto& p : bdd_series.points) {
        CHECK(!p.has_lower_bound);
        CHECK(std::isnan(p.lower_bound));
    }
}

TEST_CASE("critical delta sum is labelled and classified as such") {
    auto cfg = experiments::parse_config_text("n = 1\ndelta = 0.5\nn_grid_max = 8\n");
    const auto series = experiments::ratio_series(cfg);
    CHECK(series.regime == "critical");
    for (const auto& p : series.points) CHECK(!p.has_lower_bound);
    CHECK(experiments::verdict(series, series.delta_sum) == Verdict::critical);
}

TEST_CASE("csv output format") {
    auto cfg = experiments::parse_config_text("n = 1\ndelta = 1\nn_grid_max = 4\n");
    const auto series = experiments::ratio_series(cfg);
    std::ostringstream os;
    experiments::write_csv(series, os);
    const std::string text = os.str();
    CHECK(text.rfind("N,numerator,denominator,ratio,lower_bound,regime\n", 0) == 0);
    CHECK(text.find("\r") == std::string::npos);
    // one row per grid point plus the header
    std::size_t lines = 0;
    for (char ch : text)
        if (ch == '\n') ++lines;
    CHECK(lines == 4);
    // 17 significant digits in scientific notation
    CHECK(text.find("e+") != std::string::npos);
    const auto first_comma = text.find(',', text.find('\n') + 1);
    const auto second_comma = text.find(',', first_comma + 1);
    const std::string numerator_field =
        text.substr(first_comma + 1, second_comma - first_comma - 1);
    CHECK(numerator_field.find('.') == 1);
    CHECK(numerator_field.find('e') == 18);  // d.16-digits then exponent
}

TEST_CASE("run_ratio: files, summary, exit codes, determinism") {
    const char* out_a = "/tmp/see_ratio_a.csv";
    const char* out_b = "/tmp/see_ratio_b.csv";
    const std::string cfg_text =
        "n = 2\n"
        "delta = 0.3, 0.3\n"
        "n_grid_max = 8\n"
        "mode = montecarlo\n"
        "seed = 31\n";
    auto cfg = experiments::parse_config_text(cfg_text + "out = " + out_a + "\n");
    std::ostringstream summary;
    const auto outcome = experiments::run_ratio(cfg, false, summary);
    CHECK(outcome.exit_code == 0);
    CHECK(summary.str().find("verdict=") != std::string::npos);

    auto cfg_b = experiments::parse_config_text(cfg_text + "out = " + out_b + "\n");
    std::ostringstream summary_b;
    experiments::run_ratio(cfg_b, false, summary_b);
    CHECK(read_file(out_a) == read_file(out_b));
    CHECK(!read_file(out_a).empty());

    // a too-short divergent grid is inconclusive: exit 4 under strict
    auto short_cfg = experiments::parse_config_text(
        "n = 1\ndelta = 1\nn_grid_max = 8\nout = /tmp/see_ratio_short.csv\n");
    std::ostringstream s2;
    CHECK(experiments::run_ratio(short_cfg, true, s2).exit_code == 4);
    std::ostringstream s3;
    CHECK(experiments::run_ratio(short_cfg, false, s3).exit_code == 0);

    std::remove(out_a);
    std::remove(out_b);
    std::remove("/tmp/see_ratio_short.csv");
}

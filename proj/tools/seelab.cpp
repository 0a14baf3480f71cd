// seelab: numerical laboratory for the regularity dichotomy of derivative
// processes of a stochastic evolution equation with diagonal generator
// A e_n = -c n^2 e_n and diffusion B(v) = sqrt(1 + ||Pv||^2) e_1.
//
// Subcommands:
//   partitions <n>          enumerate the set partitions indexing B^{(n)}
//   bcheck                  derivative formula vs finite differences + bound
//   moment --config FILE    second moment of the configured family
//   ratio --config FILE     ratio series R_N over the N-grid, CSV + verdict
//   mc-validate --config    sampler and exponential-Euler cross-checks

#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "see/diffusion.hpp"
#include "see/errors.hpp"
#include "see/experiments.hpp"
#include "see/moments.hpp"
#include "see/montecarlo.hpp"
#include "see/setpart.hpp"
#include "see/spectral.hpp"

namespace {

int cmd_partitions(int n, bool allow_large, bool count_only) {
    const auto family = see::setpart::enumerate_partitions(n, allow_large);
    if (!count_only)
        for (const auto& p : family.members) std::cout << p.to_string() << "\n";
    std::cout << "count=" << family.size() << "\n";
    return 0;
}

see::spectral::SpectralVector random_vector(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::vector<std::pair<see::spectral::Mode, double>> terms;
    for (int mode = 1; mode <= 10; ++mode) terms.emplace_back(mode, coeff(gen));
    return see::spectral::SpectralVector::from_terms(std::move(terms));
}

int cmd_bcheck(int order, int trials, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const double bound = see::diffusion::derivative_sup_bound(order);
    double max_rel_fd = 0.0;
    int bound_violations = 0;
    const bool do_fd = order <= 4;
    const auto schedule = order >= 3
                              ? see::diffusion::FdSchedule{{0.04, 0.02, 0.01}}
                              : see::diffusion::FdSchedule::standard(order);
    for (int trial = 0; trial < trials; ++trial) {
        const auto v0 = random_vector(gen);
        std::vector<see::spectral::SpectralVector> args;
        for (int i = 0; i < order; ++i) args.push_back(random_vector(gen));
        const double closed = see::diffusion::eval_derivative_closed(v0, args).scalar;

        double norm_product = 1.0;
        for (const auto& a : args) norm_product *= see::spectral::hr_norm({1.0, 1.0}, 0.0, a);
        if (std::abs(closed) > bound * norm_product * (1.0 + 1e-12)) ++bound_violations;

        if (do_fd) {
            const double fd = see::diffusion::eval_derivative_fd(v0, args, schedule).scalar;
            const double rel = std::abs(closed - fd) / std::max(1.0, std::abs(closed));
            max_rel_fd = std::max(max_rel_fd, rel);
        }
    }
    std::printf("bcheck: order=%d trials=%d sup_bound=%.6g bound_violations=%d", order, trials,
                bound, bound_violations);
    if (do_fd)
        std::printf(" max_rel_fd_error=%.3e (tolerance 1e-5)", max_rel_fd);
    std::printf("\n");
    const bool ok = bound_violations == 0 && (!do_fd || max_rel_fd <= 1e-5);
    return ok ? 0 : 1;
}

int cmd_moment(const std::string& config_path) {
    const auto cfg = see::experiments::parse_config_file(config_path);
    const auto spec = cfg.family_spec(cfg.n_grid_max);
    std::printf("family: n=%d m=%d epsilon=%.6g N=%lld mode=%s\n", spec.n, spec.m, spec.epsilon,
                spec.N, see::experiments::mode_name(cfg.mode).c_str());
    if (cfg.mode == see::experiments::EvalMode::montecarlo) {
        auto tuple = see::spectral::test_tuple_u(cfg.params, spec);
        const auto query = see::moments::MomentQuery::make(std::move(tuple), cfg.t, cfg.q);
        const auto draws = see::mc::sample_exact(
            cfg.params, query, see::mc::SamplerConfig::make(cfg.seed, 100000));
        const auto est = see::mc::estimate_moment(cfg.params, draws, cfg.q);
        std::printf("second_moment=%.17e std_error=%.3e (sampled, 1e5 draws)\n", est.mean,
                    est.std_error);
        return 0;
    }
    const auto result =
        cfg.mode == see::experiments::EvalMode::structured
            ? see::moments::second_moment_structured(cfg.params, spec, cfg.t, cfg.q)
            : [&] {
                  auto tuple = see::spectral::test_tuple_u(cfg.params, spec);
                  const auto query =
                      see::moments::MomentQuery::make(std::move(tuple), cfg.t, cfg.q);
                  return see::moments::second_moment_exact(cfg.params, query);
              }();
    std::printf("deterministic_part=%.17e\n", result.deterministic_part);
    std::printf("noise_variance=%.17e\n", result.noise_variance);
    std::printf("second_moment=%.17e\n", result.second_moment);
    return 0;
}

int cmd_ratio(const std::string& config_path, bool strict) {
    const auto cfg = see::experiments::parse_config_file(config_path);
    const auto outcome = see::experiments::run_ratio(cfg, strict, std::cout);
    return outcome.exit_code;
}

int cmd_mc_validate(const std::string& config_path) {
    const auto cfg = see::experiments::parse_config_file(config_path);
    if (!cfg.has_seed) throw see::ConfigError("config: mc-validate requires a seed");
    bool all_ok = true;

    // exact sampler vs Ito isometry at the largest grid point
    {
        const auto spec = cfg.family_spec(cfg.n_grid_max);
        auto tuple = see::spectral::test_tuple_u(cfg.params, spec);
        const auto query = see::moments::MomentQuery::make(std::move(tuple), cfg.t, cfg.q);
        const double exact =
            see::moments::second_moment_exact(cfg.params, query).second_moment;
        const auto draws = see::mc::sample_exact(
            cfg.params, query, see::mc::SamplerConfig::make(cfg.seed, 100000));
        const auto est = see::mc::estimate_moment(cfg.params, draws, cfg.q);
        const bool ok = std::abs(est.mean - exact) <= 4.0 * est.std_error;
        all_ok = all_ok && ok;
        std::printf("[%s] sampler: mean=%.9e exact=%.9e |diff|/SE=%.2f\n", ok ? "PASS" : "FAIL",
                    est.mean, exact, std::abs(est.mean - exact) / est.std_error);
    }

    // exponential-Euler terminal moment vs the exact base value at x = 0
    {
        auto zero_tuple = see::spectral::DerivativeTuple{see::spectral::SpectralVector::zero()};
        const auto query = see::moments::MomentQuery::make(zero_tuple, cfg.t, 0.0);
        const double exact =
            see::moments::second_moment_exact(cfg.params, query).second_moment;
        const long long paths = 20000;
        double prev_err = 0.0;
        bool shrinking = true;
        for (long long steps : {16LL, 64LL, 256LL}) {
            double mean = 0.0;
            for (long long i = 0; i < paths; ++i) {
                const auto path = see::mc::simulate_exponential_euler(
                    cfg.params, see::spectral::SpectralVector::zero(), cfg.t,
                    see::mc::SamplerConfig::make(cfg.seed, 1, steps),
                    static_cast<std::uint64_t>(i));
                const double norm = see::spectral::hr_norm(cfg.params, 0.0, path.states.back());
                mean += norm * norm;
            }
            mean /= static_cast<double>(paths);
            const double err = std::abs(mean - exact);
            std::printf("  euler steps=%-5lld mean=%.9e |err|=%.3e\n", steps, mean, err);
            if (steps > 16 && err > prev_err * 1.2) shrinking = false;
            prev_err = err;
        }
        all_ok = all_ok && shrinking;
        std::printf("[%s] euler refinement toward exact=%.9e\n", shrinking ? "PASS" : "FAIL",
                    exact);
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seelab: exact moments and blowup ratios of SEE derivative processes"};
    app.require_subcommand(1);

    auto* partitions = app.add_subcommand("partitions", "enumerate set partitions of {1..n}");
    int part_n = 0;
    bool allow_large = false, count_only = false;
    partitions->add_option("n", part_n, "ground-set size")->required();
    partitions->add_flag("--allow-large", allow_large, "lift the n <= 12 enumeration cap");
    partitions->add_flag("--count-only", count_only, "print only the count");

    auto* bcheck = app.add_subcommand("bcheck", "derivative-formula cross-checks");
    int order = 2, trials = 50;
    std::uint64_t bseed = 12345;
    bcheck->add_option("--order", order, "derivative order (FD check for order <= 4)")
        ->required();
    bcheck->add_option("--trials", trials, "number of random inputs")->required();
    bcheck->add_option("--seed", bseed, "RNG seed");

    auto* moment = app.add_subcommand("moment", "second moment of the configured family");
    std::string moment_cfg;
    moment->add_option("--config", moment_cfg, "config file")->required();

    auto* ratio = app.add_subcommand("ratio", "ratio series over the N-grid");
    std::string ratio_cfg;
    bool strict = false;
    ratio->add_option("--config", ratio_cfg, "config file")->required();
    ratio->add_flag("--strict", strict, "exit 4 on an inconclusive verdict");

    auto* mcv = app.add_subcommand("mc-validate", "Monte Carlo cross-checks");
    std::string mcv_cfg;
    mcv->add_option("--config", mcv_cfg, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (partitions->parsed()) return cmd_partitions(part_n, allow_large, count_only);
        if (bcheck->parsed()) return cmd_bcheck(order, trials, bseed);
        if (moment->parsed()) return cmd_moment(moment_cfg);
        if (ratio->parsed()) return cmd_ratio(ratio_cfg, strict);
        if (mcv->parsed()) return cmd_mc_validate(mcv_cfg);
    } catch (const see::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const see::RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

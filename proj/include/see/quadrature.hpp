#pragma once

#include <functional>

namespace see::quadrature {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    long long evaluations = 0;
};

/// Integrates f over [0, t] for integrands whose variation concentrates near
/// s = 0 at scales down to ~1/rate_hint (sums of decaying exponentials).
/// The interval is pre-split geometrically toward 0, then panels are refined
/// adaptively (15-point Kronrod with embedded 7-point Gauss) until the
/// accumulated error estimate drops below max(abs_tol, rel_tol * |I|).
/// Throws std::runtime_error when the panel budget is exhausted first.
Result integrate_decaying(const std::function<double(double)>& f, double t, double rate_hint,
                          double rel_tol = 1e-12, double abs_tol = 0.0,
                          int max_panels = 200000);

}  // namespace see::quadrature

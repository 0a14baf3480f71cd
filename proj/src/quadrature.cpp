#include "see/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace see::quadrature {

namespace {

// Gauss-Kronrod 15-point rule on [-1, 1] (QUADPACK qk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b,
                     long long& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    evals += 15;

    double result_gauss = fc * kWg[3];
    double result_kronrod = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = result_kronrod * half;
    // plain |K15 - G7| difference: conservative, monotone under splitting
    p.error = std::abs(result_kronrod - result_gauss) * half;
    return p;
}

}  // namespace

Result integrate_decaying(const std::function<double(double)>& f, double t, double rate_hint,
                          double rel_tol, double abs_tol, int max_panels) {
    if (!(t > 0.0)) throw std::invalid_argument("integrate_decaying: t must be > 0");
    Result res;
    if (!(rel_tol > 0.0)) rel_tol = 1e-12;

    // geometric pre-split toward 0 so endpoint-concentrated mass is seen
    int levels = 4;
    if (rate_hint > 0.0 && std::isfinite(rate_hint)) {
        const double octaves = std::log2(std::max(rate_hint * t, 2.0));
        levels = static_cast<int>(std::min(1100.0, std::ceil(octaves) + 6.0));
        levels = std::max(levels, 4);
    }
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int k = levels; k >= 0; --k) edges.push_back(t * std::ldexp(1.0, -k));
    edges.back() = t;

    // ordered by error, largest first; ties broken by interval position
    auto cmp = [](const Panel& x, const Panel& y) {
        if (x.error != y.error) return x.error > y.error;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    };
    std::multiset<Panel, decltype(cmp)> panels(cmp);

    double total_value = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = evaluate_panel(f, edges[i], edges[i + 1], res.evaluations);
        total_value += p.value;
        total_error += p.error;
        panels.insert(p);
    }

    int panel_count = static_cast<int>(panels.size());
    while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
        if (panel_count >= max_panels)
            throw std::runtime_error("integrate_decaying: quadrature did not converge");
        auto worst_it = panels.begin();
        Panel worst = *worst_it;
        if (worst.error <= 0.0) break;
        panels.erase(worst_it);
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            // interval no longer splittable in double precision
            panels.insert(Panel{worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid, res.evaluations);
        Panel right = evaluate_panel(f, mid, worst.b, res.evaluations);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        panels.insert(left);
        panels.insert(right);
        ++panel_count;
    }

    // deterministic final accumulation in interval order
    std::vector<Panel> ordered(panels.begin(), panels.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Panel& p : ordered) {
        const double y = p.value - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        err += p.error;
    }
    res.value = sum;
    res.abs_error = err;
    return res;
}

}  // namespace see::quadrature

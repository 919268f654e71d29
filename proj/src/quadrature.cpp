#include "fermirpa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fermirpa {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (positive half; the rule is
// symmetric).  xgk[1], xgk[3], xgk[5], xgk[7] are the Gauss-7 nodes.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value, error;
    std::size_t born; // creation index, deterministic tie-break
};

Panel gk15(const Integrand& f, double a, double b, std::size_t born) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    // Order: 7 pairs (c - h x, c + h x) then the centre.
    for (int j = 0; j < 7; ++j) {
        fv[2 * j] = f(c - h * xgk[j]);
        fv[2 * j + 1] = f(c + h * xgk[j]);
    }
    fv[14] = f(c);

    double res_k = wgk[7] * fv[14];
    double res_g = wg[3] * fv[14];
    for (int j = 0; j < 7; ++j) {
        double s = fv[2 * j] + fv[2 * j + 1];
        res_k += wgk[j] * s;
        if (j % 2 == 1) res_g += wg[j / 2] * s;
    }
    res_k *= h;
    res_g *= h;

    double err = std::abs(res_k - res_g);
    // Standard sharpening of the raw Gauss/Kronrod difference.
    double res_abs = 0.0;
    for (int j = 0; j < 7; ++j)
        res_abs += wgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    res_abs = (res_abs + wgk[7] * std::abs(fv[14])) * std::abs(h);
    if (res_abs > 0.0 && err > 0.0) {
        double scaled = std::pow(200.0 * err / res_abs, 1.5);
        err = res_abs * std::min(1.0, scaled);
    }
    return Panel{a, b, res_k, err, born};
}

QuadratureResult adapt(const Integrand& f, std::vector<double> edges,
                       const QuadratureSpec& spec) {
    std::vector<Panel> panels;
    std::size_t born = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        panels.push_back(gk15(f, edges[i], edges[i + 1], born++));

    auto totals = [&panels]() {
        double v = 0.0, e = 0.0;
        for (const Panel& p : panels) { v += p.value; e += p.error; }
        return std::pair<double, double>{v, e};
    };

    int splits = 0;
    while (true) {
        auto [val, err] = totals();
        double bound = std::max(spec.abs_tol, spec.rel_tol * std::abs(val));
        if (err <= bound) break;
        if (splits >= spec.max_subdivisions) break;
        // Worst panel, ties by creation order.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i) {
            if (panels[i].error > panels[worst].error ||
                (panels[i].error == panels[worst].error && panels[i].born < panels[worst].born))
                worst = i;
        }
        Panel p = panels[worst];
        double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break; // interval exhausted by rounding
        panels[worst] = gk15(f, p.a, mid, born++);
        panels.push_back(gk15(f, mid, p.b, born++));
        ++splits;
    }

    // Deterministic final summation in left-to-right order.
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    QuadratureResult r;
    for (const Panel& p : panels) { r.value += p.value; r.error += p.error; }
    r.panels = static_cast<int>(panels.size());
    r.converged = r.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
    return r;
}

} // namespace

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec,
                                    const std::vector<double>& breakpoints) {
    if (!(b > a)) {
        QuadratureResult r;
        r.converged = (b == a);
        return r;
    }
    std::vector<double> edges{a};
    std::vector<double> brk = breakpoints;
    std::sort(brk.begin(), brk.end());
    for (double x : brk)
        if (x > a && x < b && x > edges.back()) edges.push_back(x);
    edges.push_back(b);
    return adapt(f, std::move(edges), spec);
}

QuadratureResult integrate_semi_infinite(const Integrand& f,
                                         const QuadratureSpec& spec,
                                         const std::vector<double>& breakpoints) {
    // mu = t/(1-t), dmu = dt/(1-t)^2; Kronrod nodes are interior, so t = 1 is
    // never evaluated.
    Integrand g = [&f](double t) {
        double om = 1.0 - t;
        double mu = t / om;
        return f(mu) / (om * om);
    };
    std::vector<double> tb;
    tb.reserve(breakpoints.size());
    for (double mu : breakpoints)
        if (mu > 0.0 && std::isfinite(mu)) tb.push_back(mu / (1.0 + mu));
    return integrate_interval(g, 0.0, 1.0, spec, tb);
}

} // namespace fermirpa

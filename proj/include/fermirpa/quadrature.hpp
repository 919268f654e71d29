#pragma once

#include <functional>
#include <vector>

namespace fermirpa {

//=============================================================================
// Deterministic adaptive quadrature (Gauss-Kronrod 7/15 panels).
//
// The worklist refines the panel with the largest error estimate (ties broken
// by creation order) until the accumulated error drops below
//     max(abs_tol, rel_tol * |integral|)
// or the subdivision budget is exhausted.  All evaluation points and the
// summation order are fully determined by the inputs, so identical calls give
// bit-identical results.  Semi-infinite integrals over [0, inf) are mapped to
// [0, 1) by the rational transform mu = t / (1 - t).
//
// Callers may supply forced panel breaks (e.g. at an integrable kink such as
// mu = lambda for |mu^2 - lambda^2| factors); breaks outside the domain are
// ignored.
//=============================================================================
struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 1 << 14;

    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; // accumulated error estimate
    int panels = 0;     // number of panels in the final partition
    bool converged = false;
};

using Integrand = std::function<double(double)>;

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const QuadratureSpec& spec = {},
                                    const std::vector<double>& breakpoints = {});

QuadratureResult integrate_semi_infinite(const Integrand& f,
                                         const QuadratureSpec& spec = {},
                                         const std::vector<double>& breakpoints = {});

} // namespace fermirpa

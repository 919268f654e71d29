#include "fermirpa/thermo.hpp"

#include <cmath>
#include <stdexcept>

namespace fermirpa {

namespace {
constexpr double PI = 3.14159265358979323846;

double mu_arctan(double x, double mu) { // mu * arctan(x / mu), continuous at 0
    return mu == 0.0 ? 0.0 : mu * std::atan(x / mu);
}
} // namespace

double ThermoParams::kappa0() { return std::cbrt(3.0 / (4.0 * PI)); }

std::function<double(double)> matched_coulomb_vhat(const ThermoParams& tp) {
    const double pref =
        8.0 * ThermoParams::kappa0() * tp.e_coul * tp.e_coul * tp.kF / (3.0 * PI);
    const double R = tp.R;
    return [pref, R](double r) { return (r > 0.0 && r < R) ? pref / (r * r) : 0.0; };
}

double angular_bracket(double mu, double lmin) {
    return 1.0 / (1.0 + mu * mu) - lmin / (lmin * lmin + mu * mu);
}

double thermo_nq(double q_norm, const ThermoParams& tp, const QuadratureSpec& quad) {
    if (!(tp.kF > 0.0) || !(tp.R > 0.0))
        throw std::invalid_argument("thermo_nq: kF and R must be positive");
    const double Rq = std::abs(q_norm - tp.kF);
    if (Rq >= tp.R) return 0.0;
    const double kappa0 = ThermoParams::kappa0();
    const double pref_c = 3.0 / (4.0 * PI * tp.hbar() * tp.kF * tp.kF * tp.kF * kappa0);

    auto outer = [&](double kn) {
        const double vk = tp.vhat_radial(kn);
        if (vk == 0.0) return 0.0;
        const double lmin = Rq / kn;
        const double q0pref = 2.0 * PI * kappa0 * vk;
        auto inner = [&](double mu) {
            const double q0 = q0pref * (1.0 - mu_arctan(1.0, mu));
            return angular_bracket(mu, lmin) / (1.0 + q0);
        };
        // the bracket changes sign at mu = sqrt(lmin)
        QuadratureResult r = integrate_semi_infinite(inner, quad, {std::sqrt(lmin)});
        return kn * pref_c * vk * r.value;
    };
    return integrate_interval(outer, Rq, tp.R, quad).value;
}

double dv_Q_sr(double mu) { return 4.0 * PI * (1.0 - mu_arctan(1.0, mu)); }

double dv_Q(double mu, double k_norm, const ThermoParams& tp) {
    const double kF = tp.kF;
    const double half = 0.5 * k_norm;
    const double mu2kF2 = kF * kF * mu * mu;
    const double plus = (kF + half) * (kF + half) + mu2kF2;
    const double minus = (kF - half) * (kF - half) + mu2kF2;
    const double log_term =
        (kF * kF * (1.0 + mu * mu) - half * half) / (2.0 * k_norm * kF) *
        std::log(plus / minus);
    const double at1 = mu_arctan(1.0 + half / kF, mu);
    const double at2 = mu_arctan(1.0 - half / kF, mu);
    return 2.0 * PI * (1.0 + log_term - at1 - at2);
}

namespace {

// One |k|-integral of the Daniel-Vosko double integral: bracket terms
// a/(a^2 + kF^2 mu^2) - b/(b^2 + kF^2 mu^2), denominator |k|^2/kF^2 + alpha Q.
double dv_k_integral(double lo, double hi, double q_norm, const ThermoParams& tp,
                     double alpha,
                     const std::function<double(double)>& term_a,
                     const std::function<double(double)>& term_b,
                     const QuadratureSpec& quad) {
    if (!(hi > lo)) return 0.0;
    const double kF = tp.kF;
    auto outer = [&](double kn) {
        const double a = term_a(kn);
        const double b = term_b(kn);
        auto inner = [&](double mu) {
            const double x = kF * kF * mu * mu;
            const double bracket = a / (a * a + x) - b / (b * b + x);
            const double denom = kn * kn / (kF * kF) + alpha * dv_Q(mu, kn, tp);
            return bracket / denom;
        };
        std::vector<double> brk;
        const double ab = a * b;
        if (ab > 0.0) brk.push_back(std::sqrt(ab) / kF); // bracket sign change
        return kn * integrate_semi_infinite(inner, quad, brk).value;
    };
    return (alpha / q_norm) * integrate_interval(outer, lo, hi, quad).value;
}

} // namespace

DvReport dv_nq(double q_norm, DvSide side, const ThermoParams& tp, double cutoff_R,
               const QuadratureSpec& quad) {
    const double kF = tp.kF;
    const double alpha = tp.e_coul * tp.e_coul / (PI * PI * kF);
    DvReport rep;
    if (alpha == 0.0) return rep;
    if (side == DvSide::outside) {
        if (!(q_norm > kF))
            throw std::invalid_argument("dv_nq: outside formula needs |q| > kF");
        double hi = q_norm + kF;
        if (cutoff_R > 0.0) hi = std::min(hi, cutoff_R);
        rep.value = dv_k_integral(
            q_norm - kF, hi, q_norm, tp, alpha,
            [&](double kn) { return q_norm - 0.5 * kn; },
            [&](double kn) { return (q_norm * q_norm - kF * kF) / (2.0 * kn); }, quad);
        return rep;
    }
    if (!(q_norm < kF) || !(q_norm > 0.0))
        throw std::invalid_argument("dv_nq: inside formula needs 0 < |q| < kF");
    double hi1 = kF + q_norm;
    if (cutoff_R > 0.0) hi1 = std::min(hi1, cutoff_R);
    rep.value = dv_k_integral(
        kF - q_norm, hi1, q_norm, tp, alpha,
        [&](double kn) { return q_norm + 0.5 * kn; },
        [&](double kn) { return (kF * kF - q_norm * q_norm) / (2.0 * kn); }, quad);
    // Second |k| integral, from kF + |q| upward; absent under a short-range
    // cutoff (the range starts beyond it).  The integrand decays like |k|^-3,
    // so the [25 kF, 50 kF] chunk dominates everything past the truncation
    // and serves as the reported tail estimate.
    if (cutoff_R <= 0.0) {
        auto ta = [&](double kn) { return q_norm + 0.5 * kn; };
        auto tb = [&](double kn) { return 0.5 * kn - q_norm; };
        rep.value += dv_k_integral(kF + q_norm, 50.0 * kF, q_norm, tp, alpha, ta, tb, quad);
        rep.tail_bound = std::abs(
            dv_k_integral(25.0 * kF, 50.0 * kF, q_norm, tp, alpha, ta, tb, quad));
    }
    return rep;
}

} // namespace fermirpa

#include "fermirpa/occupation.hpp"

#include "fermirpa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermirpa {

namespace {

constexpr double PI = 3.14159265358979323846;

// Report tiny negative roundoff as zero; anything more negative is a bug and
// is passed through so tests can see it.
double clip_roundoff(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

// Series coefficients 2^(2m-1)/(2m)! of (cosh(2K)-1)/2, m = 1..mmax.
std::vector<double> cosh_series_coefficients(int mmax) {
    std::vector<double> c(mmax);
    double cur = 1.0; // m = 1: 2/2! = 1
    for (int m = 1; m <= mmax; ++m) {
        c[m - 1] = cur;
        cur *= 4.0 / ((2.0 * m + 1.0) * (2.0 * m + 2.0));
    }
    return c;
}

} // namespace

double Q0_factor(double mu) {
    if (mu == 0.0) return 1.0;
    return 1.0 - mu * std::atan(1.0 / mu);
}

double Q0(double mu, double vhat, double kappa) {
    return 2.0 * PI * kappa * vhat * Q0_factor(mu);
}

Evaluator::Evaluator(const ModelParams& mp, int threads, int series_mmax,
                     QuadratureSpec quad)
    : m_mp(mp),
      m_geom(mp.kF, mp.R),
      m_ps(build_patchset(mp)),
      m_threads(std::max(1, threads)),
      m_series_mmax(std::max(1, series_mmax)),
      m_quad(quad) {
    std::vector<Momentum3> ks;
    for (Momentum3 k : m_geom.gamma_nor())
        if (m_mp.vhat.value(k) > 0.0) ks.push_back(k);

    std::vector<std::unique_ptr<KernelCache>> built(ks.size());
    std::vector<char> skipped(ks.size(), 0);
    parallel_for(ks.size(), m_threads, [&](std::size_t i) {
        KernelCache kc;
        try {
            kc.bundle = build_kernel(ks[i], m_ps, m_mp, m_geom);
        } catch (const std::invalid_argument&) {
            skipped[i] = 1; // every aligned patch pruned away
            return;
        }
        const KernelBundle& kb = kc.bundle;
        const int m = kb.m();
        const int dim = kb.dim();

        kc.counts_by_alpha.assign(m_ps.M, 0);
        for (int s = 0; s < m; ++s) {
            kc.counts_by_alpha[kb.plus_list[s] - 1] = kb.counts[s];
            kc.counts_by_alpha[kb.minus_list[s] - 1] = kb.counts[s];
        }

        kc.diag_c2k.resize(dim);
        for (int i2 = 0; i2 < dim; ++i2) kc.diag_c2k[i2] = kb.cosh2Km1(i2, i2);

        kc.diag_K2m.assign(dim, std::vector<double>(m_series_mmax, 0.0));
        Eigen::MatrixXd K2 = kb.K * kb.K;
        Eigen::MatrixXd P = K2;
        for (int mm = 1; mm <= m_series_mmax; ++mm) {
            for (int i2 = 0; i2 < dim; ++i2) kc.diag_K2m[i2][mm - 1] = P(i2, i2);
            if (mm < m_series_mmax) P = P * K2;
        }

        kc.integral_term.resize(m);
        for (int s = 0; s < m; ++s) {
            const double lam = kb.lambda[s];
            auto f = [&](double mu) {
                const double m2 = mu * mu, l2 = lam * lam;
                return (m2 - l2) / ((m2 + l2) * (m2 + l2)) / (1.0 + kb.Q(mu));
            };
            QuadratureResult r = integrate_semi_infinite(f, m_quad, {lam});
            kc.integral_term[s] = kb.g / PI * r.value;
        }
        built[i] = std::make_unique<KernelCache>(std::move(kc));
    });

    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (skipped[i]) m_skipped_k.push_back(ks[i]);
        else m_kernels.emplace(ks[i], std::move(*built[i]));
    }
}

std::vector<Momentum3> Evaluator::ctilde_q(Momentum3 q) const {
    std::vector<Momentum3> out;
    auto aq = m_ps.patch_of(q);
    if (!aq) return out;
    const Patch& pa = m_ps.patch(*aq);
    const bool inside = m_geom.in_ball(q);
    for (Momentum3 k : m_geom.gamma_nor()) {
        if (std::abs(dot(k, pa.omega_hat)) < m_mp.n_delta) continue;
        auto member = [&](Momentum3 t) {
            // target is B_F for q outside and B_F^c for q inside
            if (m_geom.in_ball(t) == inside) return false;
            return m_ps.patch_of(t) == aq;
        };
        if (member(q + k) || member(q - k)) out.push_back(k);
    }
    return out;
}

double Evaluator::asym_integral_direct(double vhat, double lam,
                                       const QuadratureSpec& quad) const {
    const double kappa = m_mp.kappa;
    auto f = [&](double mu) {
        const double m2 = mu * mu, l2 = lam * lam;
        return (m2 - l2) / ((m2 + l2) * (m2 + l2)) / (1.0 + Q0(mu, vhat, kappa));
    };
    return integrate_semi_infinite(f, quad, {lam}).value / PI;
}

void Evaluator::ensure_cheb(KernelCache& kc) const {
    if (!kc.cheb_nodes.empty()) return;
    // Interpolate I(lambda) = (1/pi) Int (mu^2-l^2)/(mu^2+l^2)^2 / (1+Q0) dmu
    // in x = log(lambda).  Nonzero lattice direction cosines are bounded below
    // by 1/(R*(kF+R)), so the domain covers every value that can occur.
    const double lam_floor = 0.999 / (m_mp.R * (m_mp.kF + m_mp.R));
    const double a = std::log(lam_floor), b = 0.0;
    const int n = 48; // Chebyshev extrema count n+1
    QuadratureSpec tight{1e-13, 1e-12, 1 << 14};
    kc.cheb_nodes.resize(n + 1);
    kc.cheb_vals.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double x = a + (b - a) * 0.5 * (std::cos(PI * j / n) + 1.0);
        kc.cheb_nodes[j] = x;
        kc.cheb_vals[j] = asym_integral_direct(kc.bundle.vhat, std::exp(x), tight);
    }
}

double Evaluator::nq_asymptotic(Momentum3 q, const QuadratureSpec& quad,
                                bool fast) const {
    double total = 0.0;
    for (Momentum3 k : momentum_set_Cq(q, m_geom)) {
        const double vhat = m_mp.vhat.value(k);
        if (!(vhat > 0.0)) continue;
        const double lam = lambda_qk(q, k);
        if (lam == 0.0)
            throw std::domain_error("nq_asymptotic: k orthogonal to q, integral diverges");
        const double g = vhat / (2.0 * m_mp.hbar * m_mp.kappa *
                                 static_cast<double>(m_mp.N) * k.norm());
        double val = 0.0;
        bool done = false;
        if (fast) {
            auto it = m_kernels.find(k);
            if (it != m_kernels.end()) {
                ensure_cheb(it->second);
                const KernelCache& kc = it->second;
                const double x = std::log(lam);
                const int n = static_cast<int>(kc.cheb_nodes.size()) - 1;
                if (x >= kc.cheb_nodes[n] && x <= kc.cheb_nodes[0]) {
                    // barycentric interpolation on Chebyshev extrema
                    double num = 0.0, den = 0.0;
                    bool hit = false;
                    for (int j = 0; j <= n && !hit; ++j) {
                        const double dx = x - kc.cheb_nodes[j];
                        if (dx == 0.0) {
                            val = kc.cheb_vals[j];
                            hit = true;
                            break;
                        }
                        double w = (j % 2 == 0 ? 1.0 : -1.0);
                        if (j == 0 || j == n) w *= 0.5;
                        num += w / dx * kc.cheb_vals[j];
                        den += w / dx;
                    }
                    if (!hit) val = num / den;
                    done = true;
                }
            }
        }
        if (!done) val = asym_integral_direct(vhat, lam, quad);
        total += g * val;
    }
    return clip_roundoff(total);
}

OccupationResult Evaluator::evaluate(Momentum3 q, const EvalOptions& opts) const {
    OccupationResult r;
    r.q = q;
    r.q_norm = q.norm();
    r.inside_fermi = m_geom.in_ball(q);
    r.alpha_q = m_ps.patch_of(q);
    const double eps = opts.epsilon > 0.0 ? opts.epsilon : default_Q_epsilon(q, m_geom);
    r.in_Q_eps = in_Q_epsilon(q, eps, m_geom);
    if (!r.alpha_q) return r; // off the shell or in a corridor: exactly zero

    const Patch& pa = m_ps.patch(*r.alpha_q);
    const std::vector<Momentum3> ks = ctilde_q(q);
    r.ctilde_size = static_cast<int>(ks.size());

    const int mmax = std::min(opts.series_mmax, m_series_mmax);
    const std::vector<double> coef = cosh_series_coefficients(mmax);
    const bool diagnostics = opts.routes.integral && opts.routes.asymptotic;
    double sum_f0_alpha = 0.0; // sum_k (g/pi) Int f(lambda_alpha)/(1+Q0)
    double sum_f0_q = 0.0;     // sum_k (g/pi) Int f(lambda_q)   /(1+Q0)

    for (Momentum3 k : ks) {
        auto it = m_kernels.find(k);
        if (it == m_kernels.end()) {
            if (m_mp.vhat.value(k) > 0.0) ++r.mismatched_k;
            continue; // vhat = 0 modes carry weight zero in every route
        }
        const KernelCache& kc = it->second;
        const KernelBundle& kb = kc.bundle;

        const double sdot = dot(k, pa.omega_hat);
        const int sign = sdot > 0.0 ? 1 : -1;
        // q outside: q is the particle, partner is the hole q - s k (in B_F);
        // q inside:  q is the hole, partner is the particle q + s k (in B_F^c).
        const Momentum3 partner =
            r.inside_fermi ? (sign > 0 ? q + k : q - k) : (sign > 0 ? q - k : q + k);
        const bool matched = (m_geom.in_ball(partner) != r.inside_fermi) &&
                             m_ps.patch_of(partner) == r.alpha_q;
        if (!matched) {
            ++r.mismatched_k;
            continue;
        }

        auto slot = kb.plus_slot_of(*r.alpha_q);
        auto row = kb.index_of(*r.alpha_q);
        if (!slot || !row)
            throw std::logic_error("evaluate: matched k lacks a kernel slot");
        const double n2 = static_cast<double>(kb.counts[*slot]);
        const double lam_a = kb.lambda[*slot];

        double c_matrix = 0.0, c_integral = 0.0;
        if (opts.routes.matrix) {
            c_matrix = 0.5 * kc.diag_c2k[*row] / n2;
            r.nq_matrix += c_matrix;
        }
        if (opts.routes.series) {
            double s = 0.0;
            for (int mm = 1; mm <= mmax; ++mm)
                s += coef[mm - 1] * kc.diag_K2m[*row][mm - 1];
            r.nq_series += s / n2;
        }
        if (opts.routes.integral) {
            c_integral = kc.integral_term[*slot];
            r.nq_integral += c_integral;
        }
        if (diagnostics) {
            sum_f0_alpha += kb.g * asym_integral_direct(kb.vhat, lam_a, opts.quad);
            const double lam_q = lambda_qk(q, k);
            if (lam_q > 0.0)
                sum_f0_q += kb.g * asym_integral_direct(kb.vhat, lam_q, opts.quad);
        }
        if (opts.detail)
            r.contributions.push_back(PerKContribution{k, c_matrix, c_integral});
    }

    if (opts.routes.asymptotic)
        r.nq_asymptotic = nq_asymptotic(q, opts.quad, opts.fast_asymptotic);
    if (diagnostics) {
        r.eii_gap = std::abs(r.nq_integral - sum_f0_alpha);
        r.eiii_gap = std::abs(sum_f0_alpha - sum_f0_q);
    }

    r.nq_matrix = clip_roundoff(r.nq_matrix);
    r.nq_series = clip_roundoff(r.nq_series);
    r.nq_integral = clip_roundoff(r.nq_integral);
    return r;
}

std::vector<OccupationResult> Evaluator::evaluate_shell(const EvalOptions& opts) const {
    const std::vector<Momentum3>& shell = m_geom.shell();
    if (opts.fast_asymptotic && opts.routes.asymptotic)
        for (auto& kv : m_kernels) ensure_cheb(kv.second); // pre-warm before forking
    std::vector<OccupationResult> out(shell.size());
    parallel_for(shell.size(), m_threads,
                 [&](std::size_t i) { out[i] = evaluate(shell[i], opts); });
    return out;
}

QuasiparticleWeight quasiparticle_weight(const std::vector<OccupationResult>& shell) {
    QuasiparticleWeight z;
    for (const OccupationResult& r : shell) {
        if (r.inside_fermi) z.sup_inside = std::max(z.sup_inside, r.nq_matrix);
        else z.sup_outside = std::max(z.sup_outside, r.nq_matrix);
    }
    z.Z = 1.0 - z.sup_inside - z.sup_outside;
    return z;
}

QGapReport Qk_vs_Q0_report(const KernelCache& kc, const ModelParams& mp,
                           const std::vector<double>& mu_grid) {
    QGapReport rep;
    rep.k = kc.bundle.k;
    for (double mu : mu_grid) {
        const double gap = std::abs(kc.bundle.Q(mu) - Q0(mu, kc.bundle.vhat, mp.kappa));
        if (gap > rep.max_gap) {
            rep.max_gap = gap;
            rep.mu_at_max = mu;
        }
    }
    return rep;
}

double lindhard_half_sphere(double mu, const QuadratureSpec& spec) {
    auto f = [&](double theta) {
        const double c = std::cos(theta);
        return std::sin(theta) * c * c / (c * c + mu * mu);
    };
    return 2.0 * PI * integrate_interval(f, 0.0, PI / 2, spec).value;
}

} // namespace fermirpa

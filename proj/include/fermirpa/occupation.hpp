#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "fermirpa/kernel.hpp"

namespace fermirpa {

//=============================================================================
// Momentum distribution n_q of the correlated (bosonised) ground state.
//
// For a shell momentum q inside patch alpha_q, the relevant interaction
// momenta form
//   Ctilde^q = { k in Gamma_nor : |k . omega_hat_{alpha_q}| >= N^(-delta),
//                q + k or q - k in (B_F or B_F^c) cap B_{alpha_q} },
// (target B_F for q outside the ball, B_F^c for q inside).  A member k
// contributes through the excitation-pair weight rho_{q,k} =
// n_{alpha_q,k}^(-2) * chi(partner in target cap B_{alpha_q}) where, with s
// the alignment side of alpha_q for k, the partner is q - s k when q lies
// outside the ball (q plays the particle) and q + s k when q lies inside
// (q plays the hole); k whose indicator vanishes carry no excitation
// containing q and contribute zero (counted in mismatched_k).
//
// Three equivalent evaluation routes:
//   matrix  : (1/2) sum_k n^(-2) (cosh 2K(k) - 1)_{alpha_q, alpha_q}
//   series  : sum_m 2^(2m-1)/(2m)! sum_k (K(k)^(2m))_{alpha_q,alpha_q} rho_{q,k}
//   integral: sum_k (g_k/pi) Int_0^inf (mu^2 - l^2)/(mu^2 + l^2)^2
//                                       / (1 + Q_k(mu)) dmu,  l = lambda_{alpha_q,k}
// plus the patch-free large-N form
//   asymptotic: sum_{k in C^q} (g_k/pi) Int (mu^2 - l^2)/(mu^2 + l^2)^2
//                                       / (1 + Q0_k(mu)) dmu,  l = lambda_{q,k}
// with the closed Lindhard-type factor Q0_k(mu) = 2 pi kappa V_hat(k)
// (1 - mu arctan(1/mu)).
//=============================================================================

// Q0 with the model's kappa.
double Q0_factor(double mu);                       // 1 - mu * arctan(1/mu)
double Q0(double mu, double vhat, double kappa);   // 2 pi kappa vhat * factor

struct RouteFlags {
    bool matrix = true;
    bool series = true;
    bool integral = true;
    bool asymptotic = true;

    friend bool operator==(const RouteFlags&, const RouteFlags&) = default;
};

struct EvalOptions {
    RouteFlags routes;
    int series_mmax = 25;
    double epsilon = 0.0;        // 0 => per-q default for the Q_eps scan
    bool detail = false;         // keep per-k contributions
    bool fast_asymptotic = false;// use the per-k Chebyshev interpolant
    QuadratureSpec quad{1e-13, 1e-11, 1 << 14};
};

struct PerKContribution {
    Momentum3 k;
    double matrix = 0.0, integral = 0.0;
};

struct OccupationResult {
    Momentum3 q;
    double q_norm = 0.0;
    bool inside_fermi = false;
    std::optional<int> alpha_q;
    bool in_Q_eps = true;
    int ctilde_size = 0;
    int mismatched_k = 0;        // members of Ctilde^q whose indicator vanished

    double nq_matrix = 0.0;
    double nq_series = 0.0;
    double nq_integral = 0.0;
    double nq_asymptotic = 0.0;
    // Gap diagnostics, filled only when both the integral and asymptotic
    // routes are requested (they are built from the same quadratures):
    double eii_gap = 0.0;        // | sum_k Int f_k - f_k^(0) |   (Q_k -> Q0_k)
    double eiii_gap = 0.0;       // | sum_k Int f_k^(0) - f~_k^(0) | (lambda_alpha -> lambda_q)

    std::vector<PerKContribution> contributions; // when detail
};

// Per-k cache shared by all q: the kernel bundle plus the diagonal weights,
// the series diagonals, the plus-half integral terms, and (on demand) a
// Chebyshev interpolant of the asymptotic integral in lambda.
struct KernelCache {
    KernelBundle bundle;
    std::vector<std::int64_t> counts_by_alpha;   // [alpha-1], signed-side count
    std::vector<double> diag_c2k;                // (cosh 2K - 1)_{ii}, i in I_k
    std::vector<std::vector<double>> diag_K2m;   // [i][m-1] = (K^(2m))_{ii}
    std::vector<double> integral_term;           // per plus slot: (g/pi) Int ./(1+Q_k)
    std::vector<double> cheb_nodes, cheb_vals;   // asymptotic interpolant data
};

class Evaluator {
public:
    Evaluator(const ModelParams& mp, int threads = 1, int series_mmax = 25,
              QuadratureSpec quad = {1e-13, 1e-11, 1 << 14});

    const ModelParams& params() const { return m_mp; }
    const FermiGeometry& geometry() const { return m_geom; }
    const PatchSet& patchset() const { return m_ps; }

    // Caches exist for every k in Gamma_nor with V_hat(k) > 0 and a nonempty
    // kernel; k whose aligned patches all pruned away are skipped (recorded).
    const std::map<Momentum3, KernelCache>& kernels() const { return m_kernels; }
    const std::vector<Momentum3>& skipped_k() const { return m_skipped_k; }

    std::vector<Momentum3> ctilde_q(Momentum3 q) const;

    OccupationResult evaluate(Momentum3 q, const EvalOptions& opts = {}) const;

    // Evaluate every shell momentum (parallel over q, deterministic order).
    std::vector<OccupationResult> evaluate_shell(const EvalOptions& opts = {}) const;

    // Patch-free asymptotic value; defined for any q in the shell.  Throws
    // std::domain_error when some k in C^q is orthogonal to q (the mu-integral
    // diverges there); such q exist only in a thin band inside the surface.
    double nq_asymptotic(Momentum3 q, const QuadratureSpec& quad,
                         bool fast = false) const;

    int threads() const { return m_threads; }

private:
    double asym_integral_direct(double vhat, double lam,
                                const QuadratureSpec& quad) const;
    void ensure_cheb(KernelCache& kc) const;

    ModelParams m_mp;
    FermiGeometry m_geom;
    PatchSet m_ps;
    // mutable: the Chebyshev interpolants are filled lazily; evaluate_shell
    // pre-warms them before going parallel.
    mutable std::map<Momentum3, KernelCache> m_kernels;
    std::vector<Momentum3> m_skipped_k;
    int m_threads = 1;
    int m_series_mmax = 25;      // cached series depth
    QuadratureSpec m_quad;       // spec used for the cached integral terms
};

// Quasiparticle weight from a full shell evaluation:
//   Z = 1 - sup_{q in B_F} n_q - sup_{q in B_F^c} n_q  (momenta off the shell
// contribute n_q = 0 exactly).
struct QuasiparticleWeight {
    double Z = 1.0;
    double sup_inside = 0.0;
    double sup_outside = 0.0;
};
QuasiparticleWeight quasiparticle_weight(const std::vector<OccupationResult>& shell);

// Max |Q_k(mu) - Q0_k(mu)| over a mu grid, with the grid point attaining it.
struct QGapReport {
    Momentum3 k;
    double max_gap = 0.0;
    double mu_at_max = 0.0;
};
QGapReport Qk_vs_Q0_report(const KernelCache& kc, const ModelParams& mp,
                           const std::vector<double>& mu_grid);

// Independent angular check of the Lindhard factor: quadrature of
// Int_{half sphere} cos^2(theta) / (cos^2(theta) + mu^2) dOmega,
// which the closed form says equals 2 pi (1 - mu arctan(1/mu)).
double lindhard_half_sphere(double mu, const QuadratureSpec& spec = {});

} // namespace fermirpa

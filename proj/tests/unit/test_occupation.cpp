#include "doctest.h"

#include <cmath>
#include <set>

#include "fermirpa/occupation.hpp"
#include "oracles.hpp"

using namespace fermirpa;

namespace {

ModelParams params_const(double kF, double v = 1.0, double radius = 2.5) {
    return closed_shell_params(kF, 2.5, 1.0 / 12, 0,
                               InteractionFourier::make_constant(v, radius));
}

const Evaluator& ev5() {
    static Evaluator ev(params_const(5.0), 1);
    return ev;
}

constexpr RouteFlags kExactRoutes{true, true, true, false};

} // namespace

TEST_CASE("Q0 closed form: factor endpoints, scaling, decay") {
    CHECK(Q0_factor(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Q0_factor(1.0) == doctest::Approx(1.0 - 3.14159265358979324 / 4).epsilon(1e-14));
    CHECK(Q0(0.5, 2.0, 0.62) ==
          doctest::Approx(2 * 3.14159265358979324 * 0.62 * 2.0 * Q0_factor(0.5))
              .epsilon(1e-14));
    // large-mu falloff ~ 1/(3 mu^2)
    CHECK(Q0_factor(1e3) < 1e-5 * Q0_factor(0.0));
    CHECK(Q0_factor(1e3) == doctest::Approx(1.0 / (3e6)).epsilon(1e-3));
}

TEST_CASE("half-sphere angular integral reproduces the closed Lindhard factor") {
    // lindhard_half_sphere carries the 2 pi azimuthal factor
    for (double mu : {0.0, 0.1, 1.0, 10.0})
        CHECK(std::abs(lindhard_half_sphere(mu) -
                       2 * 3.14159265358979324 * Q0_factor(mu)) < 1e-8);
}

TEST_CASE("three exact routes agree at q = (0,0,6), kF = 5") {
    const OccupationResult r = ev5().evaluate({0, 0, 6});
    REQUIRE(r.alpha_q.has_value());
    CHECK_FALSE(r.inside_fermi);
    CHECK(r.ctilde_size > 0);

    // regression pin: value recorded from this configuration
    CHECK(r.nq_matrix == doctest::Approx(0.0031334330501740682).epsilon(1e-9));

    const double scale = std::max(r.nq_matrix, 1e-12);
    CHECK(std::abs(r.nq_matrix - r.nq_integral) <= 1e-8 * scale);
    CHECK(std::abs(r.nq_matrix - r.nq_series) <= 1e-10 * scale);

    // q along z: the cap axis coincides with q, so the angular substitution
    // is exact and the whole asymptotic gap is the Q -> Q0 replacement.
    CHECK(r.eiii_gap == 0.0);
    CHECK(std::abs(r.nq_asymptotic - r.nq_integral) <=
          r.eii_gap + r.eiii_gap + 1e-10);
}

TEST_CASE("series truncation order: zero terms give zero, tail is negligible") {
    EvalOptions o0;
    o0.routes = RouteFlags{false, true, false, false};
    o0.series_mmax = 0;
    CHECK(ev5().evaluate({0, 0, 6}, o0).nq_series == 0.0);

    EvalOptions o5 = o0;
    o5.series_mmax = 5;
    EvalOptions o25 = o0;
    o25.series_mmax = 25;
    const double s5 = ev5().evaluate({0, 0, 6}, o5).nq_series;
    const double s25 = ev5().evaluate({0, 0, 6}, o25).nq_series;
    CHECK(s5 > 0.0);
    CHECK(std::abs(s5 - s25) < 1e-13); // K is small; the tail decays as K^(2m)
}

TEST_CASE("per-k bookkeeping: every interaction momentum is matched or counted") {
    for (Momentum3 q : {Momentum3{0, 0, 6}, Momentum3{1, 1, 6}, Momentum3{0, 2, 6}}) {
        EvalOptions opts;
        opts.routes = kExactRoutes;
        opts.detail = true;
        const OccupationResult r = ev5().evaluate(q, opts);
        if (!r.alpha_q) continue;
        const auto ks = ev5().ctilde_q(q);
        CHECK(int(ks.size()) == r.ctilde_size);
        CHECK(int(r.contributions.size()) + r.mismatched_k == r.ctilde_size);

        const FermiGeometry& geom = ev5().geometry();
        const auto cq = momentum_set_Cq(q, geom);
        const std::set<Momentum3> cq_set(cq.begin(), cq.end());
        const Patch& pa = ev5().patchset().patch(*r.alpha_q);
        const double belt = std::pow(double(ev5().params().N), -ev5().params().delta);
        for (Momentum3 k : ks) {
            CHECK(half_space_member(k));
            CHECK(cq_set.count(k) == 1);
            CHECK(std::abs(dot(k, pa.omega_hat)) >= belt - 1e-12);
        }
    }
}

TEST_CASE("shell evaluation matches per-q evaluation and is thread-stable") {
    EvalOptions opts;
    opts.routes = kExactRoutes;
    const auto shell1 = ev5().evaluate_shell(opts);
    REQUIRE(shell1.size() == ev5().geometry().shell().size());

    Evaluator ev4(params_const(5.0), 4);
    const auto shell4 = ev4.evaluate_shell(opts);
    REQUIRE(shell4.size() == shell1.size());
    for (std::size_t i = 0; i < shell1.size(); ++i) {
        CHECK(shell1[i].q == shell4[i].q);
        CHECK(shell1[i].nq_matrix == shell4[i].nq_matrix);     // bitwise
        CHECK(shell1[i].nq_series == shell4[i].nq_series);     // bitwise
        CHECK(shell1[i].nq_integral == shell4[i].nq_integral); // bitwise
    }
    for (std::size_t i = 0; i < shell1.size(); i += 211) {
        const OccupationResult r = ev5().evaluate(shell1[i].q, opts);
        CHECK(r.nq_matrix == shell1[i].nq_matrix);
    }
}

TEST_CASE("corridor and off-shell momenta evaluate to exact zero") {
    for (Momentum3 q : {Momentum3{5, 0, 0}, Momentum3{3, 4, 0}, Momentum3{0, 0, 1}}) {
        const OccupationResult r = ev5().evaluate(q);
        CHECK_FALSE(r.alpha_q.has_value());
        CHECK(r.nq_matrix == 0.0);
        CHECK(r.nq_series == 0.0);
        CHECK(r.nq_integral == 0.0);
        CHECK(r.nq_asymptotic == 0.0);
        CHECK(r.ctilde_size == 0);
    }
}

TEST_CASE("asymptotic route rejects momenta with an orthogonal interaction mode") {
    // q = (0,4,3) sits on the surface (counted as inside); k = (1,0,0) is
    // orthogonal to q and flips the partner outside, so the mu-integral for
    // that mode diverges.
    const Momentum3 q{0, 4, 3};
    const auto cq = momentum_set_Cq(q, ev5().geometry());
    bool has_perp = false;
    for (Momentum3 k : cq)
        has_perp = has_perp || (k.x * q.x + k.y * q.y + k.z * q.z) == 0;
    REQUIRE(has_perp);
    CHECK_THROWS_AS((void)ev5().nq_asymptotic(q, QuadratureSpec{}), std::domain_error);
}

TEST_CASE("fast asymptotic interpolant tracks the direct quadrature") {
    const QuadratureSpec quad{1e-13, 1e-11, 1 << 14};
    for (Momentum3 q : {Momentum3{0, 0, 6}, Momentum3{1, 0, 6}, Momentum3{2, 2, 5}}) {
        const double direct = ev5().nq_asymptotic(q, quad, false);
        const double fast = ev5().nq_asymptotic(q, quad, true);
        CHECK(std::abs(fast - direct) <= 1e-7 * std::max(direct, 1e-12));
    }
}

TEST_CASE("a vanishing interaction gives the free gas: n_q = 0, Z = 1") {
    Evaluator ev0(params_const(5.0, 0.0), 1);
    CHECK(ev0.kernels().empty());
    CHECK(ev0.skipped_k().empty());
    const OccupationResult r = ev0.evaluate({0, 0, 6});
    CHECK(r.nq_matrix == 0.0);
    CHECK(r.nq_series == 0.0);
    CHECK(r.nq_integral == 0.0);
    CHECK(r.nq_asymptotic == 0.0);

    EvalOptions opts;
    opts.routes = kExactRoutes;
    const QuasiparticleWeight z = quasiparticle_weight(ev0.evaluate_shell(opts));
    CHECK(z.Z == 1.0);
    CHECK(z.sup_inside == 0.0);
    CHECK(z.sup_outside == 0.0);
}

TEST_CASE("quasiparticle weight is 1 minus the two shell suprema") {
    std::vector<OccupationResult> fake(2);
    fake[0].inside_fermi = true;
    fake[0].nq_matrix = 0.01;
    fake[1].inside_fermi = false;
    fake[1].nq_matrix = 0.03;
    const QuasiparticleWeight z = quasiparticle_weight(fake);
    CHECK(z.sup_inside == 0.01);
    CHECK(z.sup_outside == 0.03);
    CHECK(z.Z == doctest::Approx(0.96).epsilon(1e-15));
}

TEST_CASE("rescaling the interaction preserves the support of n_q") {
    EvalOptions opts;
    opts.routes = RouteFlags{true, false, false, false};
    const auto base = ev5().evaluate_shell(opts);
    for (double s : {0.5, 2.0}) {
        Evaluator evs(params_const(5.0, s), 1);
        const auto scaled = evs.evaluate_shell(opts);
        REQUIRE(scaled.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(base[i].q == scaled[i].q);
            CHECK((base[i].nq_matrix > 1e-14) == (scaled[i].nq_matrix > 1e-14));
        }
    }
}

TEST_CASE("per-mode Q gap report finds a positive finite maximum") {
    const auto& kernels = ev5().kernels();
    const auto it = kernels.find({0, 0, 1});
    REQUIRE(it != kernels.end());
    std::vector<double> grid;
    for (int j = 0; j <= 200; ++j) grid.push_back(0.05 * j);
    const QGapReport rep = Qk_vs_Q0_report(it->second, ev5().params(), grid);
    CHECK(rep.k == Momentum3{0, 0, 1});
    CHECK(rep.max_gap > 0.0);
    CHECK(std::isfinite(rep.max_gap));
    CHECK(rep.mu_at_max >= 0.0);
    CHECK(rep.mu_at_max <= 10.0);
    // both Q and Q0 die off, so the gap at the grid tail is far below the max
    const double tail =
        std::abs(it->second.bundle.Q(10.0) -
                 Q0(10.0, it->second.bundle.vhat, ev5().params().kappa));
    CHECK(tail < rep.max_gap);
}

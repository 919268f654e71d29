#include "doctest.h"

#include <cmath>
#include <set>

#include "fermirpa/patches.hpp"
#include "oracles.hpp"

using namespace fermirpa;

namespace {
constexpr double PI = 3.14159265358979323846;

ModelParams params(double kF, double R, int M) {
    return closed_shell_params(kF, R, 1.0 / 12, M, InteractionFourier::make_constant(1.0, R));
}
} // namespace

TEST_CASE("M = 2 gives two antipodal caps") {
    const auto mp = params(8.0, 2.0, 2);
    const PatchSet ps = build_patchset(mp);
    REQUIRE(ps.patches.size() == 2);
    CHECK(ps.patch(1).antipode == 2);
    CHECK(ps.patch(2).antipode == 1);
    CHECK(ps.patch(1).cell.full_azimuth);
    CHECK(ps.patch(1).omega_hat[2] == doctest::Approx(1.0));
    CHECK(ps.patch(2).omega_hat[2] == doctest::Approx(-1.0));
    // poles belong to the caps, equatorial points to the corridor
    CHECK(ps.patch_of({0, 0, 8}) == std::optional<int>(1));
    CHECK(ps.patch_of({0, 0, -8}) == std::optional<int>(2));
    CHECK_FALSE(ps.patch_of({8, 0, 0}).has_value());
    // outside the radial band
    CHECK_FALSE(ps.patch_of({0, 0, 11}).has_value());
    CHECK_FALSE(ps.patch_of({0, 0, 1}).has_value());
}

TEST_CASE("equal-area targets tile the sphere") {
    for (int M : {2, 8, 32}) {
        const auto mp = params(20.0, 2.5, M);
        const PatchSet ps = build_patchset(mp);
        REQUIRE(int(ps.patches.size()) == M);
        double total = 0.0;
        for (const Patch& p : ps.patches) {
            CHECK(p.area_target == doctest::Approx(4 * PI * 400.0 / M).epsilon(1e-12));
            CHECK(p.area_kept > 0.0);
            CHECK(p.area_kept <= p.area_target * (1 + 1e-12));
            CHECK(p.diameter > 0.0);
            total += p.area_target;
        }
        CHECK(total == doctest::Approx(4 * PI * 400.0).epsilon(1e-12));
    }
}

TEST_CASE("patch_of maps antipodal points to antipodal patches") {
    const auto mp = params(8.0, 2.0, 8);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(8.0, 2.0);
    int matched = 0;
    for (Momentum3 p : geom.shell()) {
        const auto a = ps.patch_of(p);
        const auto b = ps.patch_of(-p);
        CHECK(a.has_value() == b.has_value());
        if (a) {
            CHECK(*b == ps.antipode(*a));
            ++matched;
        }
    }
    CHECK(matched > 0);
}

TEST_CASE("patch membership points lie inside the claimed angular cell") {
    const auto mp = params(8.0, 2.0, 8);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(8.0, 2.0);
    for (Momentum3 p : geom.shell()) {
        const auto a = ps.patch_of(p);
        if (!a) continue;
        const Patch& pa = ps.patch(*a);
        // mirror southern points onto the stored northern cell
        const Momentum3 q = pa.southern ? -p : p;
        const double r = q.norm();
        const double theta = std::acos(double(q.z) / r);
        CHECK(theta >= pa.cell.theta_lo - 1e-12);
        CHECK(theta <= pa.cell.theta_hi + 1e-12);
        if (!pa.cell.full_azimuth) {
            double phi = std::atan2(double(q.y), double(q.x));
            if (phi < 0) phi += 2 * PI;
            CHECK(phi >= pa.cell.phi_lo - 1e-12);
            CHECK(phi <= pa.cell.phi_hi + 1e-12);
        }
    }
}

TEST_CASE("index sets are antipodal mirrors separated by the belt") {
    const auto mp = params(8.0, 2.0, 8);
    const PatchSet ps = build_patchset(mp);
    for (Momentum3 k : FermiGeometry(8.0, 2.0).gamma_nor()) {
        const IndexSets idx = index_sets(k, ps, mp);
        CHECK(idx.plus.size() == idx.minus.size());
        std::set<int> minus(idx.minus.begin(), idx.minus.end());
        for (int a : idx.plus) {
            CHECK(dot(k, ps.patch(a).omega_hat) >= mp.n_delta);
            CHECK(minus.count(ps.antipode(a)) == 1);
        }
        for (int a : idx.minus) CHECK(dot(k, ps.patch(a).omega_hat) <= -mp.n_delta);
        // belt exclusion: everything else is strictly inside the cutoff
        std::set<int> in_sets(idx.plus.begin(), idx.plus.end());
        in_sets.insert(idx.minus.begin(), idx.minus.end());
        for (const Patch& p : ps.patches)
            if (!in_sets.count(p.alpha))
                CHECK(std::abs(dot(k, p.omega_hat)) < mp.n_delta);
    }
}

TEST_CASE("pair counts match the particle-side oracle at kF = 4") {
    const auto mp = params(4.0, 2.0, 4);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(4.0, 2.0);
    for (Momentum3 k : geom.gamma_nor()) {
        const IndexSets idx = index_sets(k, ps, mp);
        for (int a : idx.plus) {
            const PairData pd = pair_count(a, k, ps, geom);
            CHECK(pd.sign == 1);
            CHECK(pd.count == oracles::pair_count(a, k, +1, ps, geom));
        }
        for (int a : idx.minus) {
            const PairData pd = pair_count(a, k, ps, geom);
            CHECK(pd.sign == -1);
            CHECK(pd.count == oracles::pair_count(a, k, -1, ps, geom));
        }
    }
}

TEST_CASE("antipodal patches carry equal pair counts") {
    const auto mp = params(6.0, 2.0, 8);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(6.0, 2.0);
    for (Momentum3 k : geom.gamma_nor()) {
        const IndexSets idx = index_sets(k, ps, mp);
        const auto counts = pair_counts_for_k(k, ps, geom, idx);
        for (int a : idx.plus)
            CHECK(counts[a - 1] == counts[ps.antipode(a) - 1]);
    }
}

TEST_CASE("listed pairs are genuine particle-hole pairs of the patch") {
    const auto mp = params(5.0, 2.5, 8);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(5.0, 2.5);
    const Momentum3 k{0, 0, 1};
    const PairData pd = pair_count(1, k, ps, geom, true);
    CHECK(pd.count == std::int64_t(pd.pairs.size()));
    CHECK(pd.count > 0);
    for (const auto& [p, h] : pd.pairs) {
        CHECK_FALSE(geom.in_ball(p));
        CHECK(geom.in_ball(h));
        const Momentum3 step = pd.sign > 0 ? k : -k;
        CHECK(p - h == step);
        CHECK(ps.patch_of(p) == std::optional<int>(1));
        CHECK(ps.patch_of(h) == std::optional<int>(1));
    }
}

TEST_CASE("zero pair count when the step leaves the radial band") {
    // Narrow polar cap (M = 32) with |k| = 3 > 2R = 2.4 pointing along the
    // cap axis: every h in the cap has h_z >= 0.93 |h|, so |h + k| >= 21.6
    // lands outside the radial band [18.8, 21.2] and no pair survives.
    const auto mp = params(20.0, 1.2, 32);
    const PatchSet ps = build_patchset(mp);
    const FermiGeometry geom(20.0, 1.2);
    const PairData pd = pair_count(1, {0, 0, 3}, ps, geom);
    CHECK(pd.count == 0);
}

TEST_CASE("corridor and diameter audits at kF = 25") {
    // kF large enough that the full corridor margin fits every cell at all
    // three patch counts; the audit then certifies the 2R separation.
    for (int M : {2, 8, 32}) {
        const auto mp = params(25.0, 2.5, M);
        const PatchSet ps = build_patchset(mp);
        const CorridorAudit ca = corridor_audit(ps);
        CHECK(ca.pass);
        CHECK(ca.min_separation >= 2 * 2.5);
        const DiameterAudit da = diameter_audit(ps, mp);
        CHECK(da.max_diameter > 0.0);
        CHECK(da.max_constant < 12.0); // diam * sqrt(M) / N^(1/3) stays moderate
    }
}

TEST_CASE("margin reduction keeps construction alive on tiny cells") {
    // kF = 3 with many patches: the full corridor margin cannot fit, the
    // builder shrinks it but must keep every cell nonempty.
    const auto mp = params(3.0, 2.0, 16);
    const PatchSet ps = build_patchset(mp);
    CHECK_FALSE(ps.corridor_full_margin);
    CHECK(ps.margin_used > 0.0);
    CHECK(ps.margin_used < ps.margin_full);
    for (const Patch& p : ps.patches) {
        CHECK(p.cell.theta_hi > p.cell.theta_lo);
        CHECK(p.area_kept > 0.0);
    }
}

TEST_CASE("pair-count scaling floor: min n over aligned patches") {
    // measured lower-bound constant c in min_alpha n_{alpha,k}
    //   >= c N^(1/3 - delta/2) M^(-1/2); assert it does not degenerate
    double cmin = 1e9;
    for (double kF : {5.0, 8.0, 12.0}) {
        const auto mp = params(kF, 2.5, 0);
        const PatchSet ps = build_patchset(mp);
        const FermiGeometry geom(kF, 2.5);
        const Momentum3 k{0, 0, 1};
        const IndexSets idx = index_sets(k, ps, mp);
        REQUIRE(!idx.plus.empty());
        for (int a : idx.plus) {
            const auto pd = pair_count(a, k, ps, geom);
            const double n = std::sqrt(double(pd.count));
            const double scale = std::pow(double(mp.N), 1.0 / 3 - mp.delta / 2) /
                                 std::sqrt(double(mp.M));
            cmin = std::min(cmin, n / scale);
        }
    }
    CHECK(cmin > 0.05); // measured ~O(1); guard against collapse
}

#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "fermirpa/quadrature.hpp"
#include "fermirpa/thermo.hpp"

using namespace fermirpa;

namespace {
constexpr double kPi = 3.14159265358979324;

ThermoParams make_tp(double kF, double R, double e = 1.0) {
    ThermoParams tp;
    tp.kF = kF;
    tp.R = R;
    tp.e_coul = e;
    tp.vhat_radial = matched_coulomb_vhat(tp);
    return tp;
}
} // namespace

TEST_CASE("kappa0 is the closed-shell density constant") {
    CHECK(ThermoParams::kappa0() ==
          doctest::Approx(std::cbrt(3.0 / (4.0 * kPi))).epsilon(1e-15));
    CHECK(ThermoParams::kappa0() == doctest::Approx(0.62035049089940009).epsilon(1e-14));
}

TEST_CASE("angular bracket equals the elementary l-integral") {
    const QuadratureSpec tight{1e-14, 1e-13, 1 << 14};
    for (double mu : {0.2, 0.7, 1.3, 4.0}) {
        for (double lmin : {0.05, 0.3, 0.9}) {
            auto f = [&](double l) {
                const double d = mu * mu + l * l;
                return (mu * mu - l * l) / (d * d);
            };
            const double numeric = integrate_interval(f, lmin, 1.0, tight).value;
            CHECK(angular_bracket(mu, lmin) == doctest::Approx(numeric).epsilon(1e-11));
        }
    }
}

TEST_CASE("angular bracket: degenerate window, sign change, zero mean") {
    for (double mu : {0.0, 0.4, 2.0}) CHECK(angular_bracket(mu, 1.0) == 0.0);

    // crossing at mu = sqrt(lmin): negative below, positive above
    const double lmin = 0.36;
    CHECK(angular_bracket(0.5 * std::sqrt(lmin), lmin) < 0.0);
    CHECK(angular_bracket(2.0 * std::sqrt(lmin), lmin) > 0.0);
    CHECK(std::abs(angular_bracket(std::sqrt(lmin), lmin)) < 1e-15);

    // the mu-integral of the bracket vanishes: both Lorentzians carry
    // the same half-line mass pi/2
    const double total =
        integrate_semi_infinite([&](double mu) { return angular_bracket(mu, 0.25); },
                                {1e-13, 1e-12, 1 << 14}, {0.5})
            .value;
    CHECK(std::abs(total) < 1e-10);
}

TEST_CASE("thermodynamic n(q) vanishes outside the interaction window") {
    const ThermoParams tp = make_tp(10.0, 2.5);
    CHECK(thermo_nq(12.5, tp) == 0.0);
    CHECK(thermo_nq(13.0, tp) == 0.0);
    CHECK(thermo_nq(7.5, tp) == 0.0);
    CHECK(thermo_nq(10.0 + 2.49, tp) != 0.0);
}

TEST_CASE("thermodynamic n(q) depends only on the surface distance") {
    const ThermoParams tp = make_tp(10.0, 2.5);
    CHECK(thermo_nq(11.0, tp) == thermo_nq(9.0, tp));   // same R_q, bitwise
    CHECK(thermo_nq(10.3, tp) > thermo_nq(11.9, tp));   // decays away from surface
    CHECK(thermo_nq(10.3, tp) > 0.0);
}

TEST_CASE("thermodynamic n(q) against a swapped-order quadrature oracle") {
    // constant radial potential factorises the double integral differently:
    // integrate over |k| first, then mu — an independent evaluation path.
    ThermoParams tp;
    tp.kF = 10.0;
    tp.R = 2.5;
    tp.vhat_radial = [](double) { return 1.0; };

    const double kappa0 = ThermoParams::kappa0();
    const double pref = 3.0 / (4.0 * kPi * tp.hbar() * tp.kF * tp.kF * tp.kF * kappa0);
    const QuadratureSpec tight{1e-13, 1e-12, 1 << 14};

    for (double q : {10.8, 9.4}) {
        const double Rq = std::abs(q - tp.kF);
        auto inner_k = [&](double mu) {
            auto f = [&](double kn) { return kn * angular_bracket(mu, Rq / kn); };
            return integrate_interval(f, Rq, tp.R, tight).value;
        };
        auto outer = [&](double mu) {
            const double factor = mu == 0.0 ? 1.0 : 1.0 - mu * std::atan(1.0 / mu);
            const double q0 = 2.0 * kPi * kappa0 * 1.0 * factor;
            return inner_k(mu) / (1.0 + q0);
        };
        const double oracle =
            pref * integrate_semi_infinite(outer, tight, {std::sqrt(Rq / tp.R), 1.0}).value;
        CHECK(thermo_nq(q, tp) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("weak-coupling occupation scales as the fourth power of the charge") {
    // the O(V) term integrates to zero, so n ~ V^2 ~ e^4
    const double n1 = thermo_nq(10.6, make_tp(10.0, 2.5, 1e-3));
    const double n2 = thermo_nq(10.6, make_tp(10.0, 2.5, 2e-3));
    REQUIRE(n1 > 0.0);
    CHECK(n2 / n1 == doctest::Approx(16.0).epsilon(1e-3));
}

TEST_CASE("matched Coulomb potential: window and normalisation") {
    const ThermoParams tp = make_tp(5.0, 2.5, 2.0);
    const double pref = 8.0 * ThermoParams::kappa0() * 4.0 * 5.0 / (3.0 * kPi);
    CHECK(tp.vhat_radial(1.0) == doctest::Approx(pref).epsilon(1e-14));
    CHECK(tp.vhat_radial(2.0) == doctest::Approx(pref / 4.0).epsilon(1e-14));
    CHECK(tp.vhat_radial(2.5) == 0.0);
    CHECK(tp.vhat_radial(3.0) == 0.0);
    CHECK(tp.vhat_radial(0.0) == 0.0);
}

TEST_CASE("polarisation factor limits") {
    const ThermoParams tp = make_tp(10.0, 2.5);

    CHECK(dv_Q_sr(0.0) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    for (double mu : {0.3, 1.0, 2.0})
        CHECK(dv_Q_sr(mu) ==
              doctest::Approx(4.0 * kPi * (1.0 - mu * std::atan(1.0 / mu))).epsilon(1e-14));

    // small |k|/kF limit recovers the short-range factor
    for (double mu : {0.3, 1.0, 2.0})
        CHECK(dv_Q(mu, 1e-4 * tp.kF, tp) == doctest::Approx(dv_Q_sr(mu)).epsilon(1e-6));

    // large-mu decay
    CHECK(std::abs(dv_Q(1e3, 5.0, tp)) < 1e-4);
    CHECK(std::abs(dv_Q_sr(1e3)) < 1e-4);
}

TEST_CASE("Daniel-Vosko n_q rejects momenta on the wrong side") {
    const ThermoParams tp = make_tp(10.0, 2.5);
    CHECK_THROWS_AS((void)dv_nq(10.5, DvSide::inside, tp), std::invalid_argument);
    CHECK_THROWS_AS((void)dv_nq(9.5, DvSide::outside, tp), std::invalid_argument);
}

TEST_CASE("Daniel-Vosko n_q: values, cutoff, and tail control") {
    const ThermoParams tp = make_tp(10.0, 2.5);

    const DvReport out = dv_nq(10.5, DvSide::outside, tp);
    CHECK(out.value > 0.0);
    CHECK(std::isfinite(out.value));
    CHECK(out.tail_bound >= 0.0);
    CHECK(out.tail_bound < std::abs(out.value));

    const DvReport in = dv_nq(9.5, DvSide::inside, tp);
    CHECK(in.value > 0.0);

    // the short-range variant stops at the cutoff: no truncated tail
    const DvReport cut = dv_nq(10.5, DvSide::outside, tp, 2.5);
    CHECK(cut.value > 0.0);
    CHECK(cut.tail_bound == 0.0);
    CHECK(cut.value < out.value); // strictly smaller integration range

    // zero charge, zero occupation
    const ThermoParams tp0 = make_tp(10.0, 2.5, 0.0);
    CHECK(dv_nq(10.5, DvSide::outside, tp0).value == 0.0);
}

#include "doctest.h"

#include <cmath>

#include "fermirpa/quadrature.hpp"

using namespace fermirpa;

namespace {
constexpr double PI = 3.14159265358979323846;
}

TEST_CASE("polynomials are integrated exactly") {
    auto r = integrate_interval([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("interval antiderivative check at mu = 0.7") {
    // d/dl [ l/(mu^2+l^2) ] = (mu^2 - l^2)/(mu^2 + l^2)^2
    const double mu = 0.7;
    auto f = [&](double l) {
        const double d = mu * mu + l * l;
        return (mu * mu - l * l) / (d * d);
    };
    const double exact = 1.0 / (mu * mu + 1.0) - 0.3 / (mu * mu + 0.09);
    auto r = integrate_interval(f, 0.3, 1.0, {1e-13, 1e-12, 1 << 12});
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("semi-infinite standards") {
    QuadratureSpec spec{1e-12, 1e-12, 1 << 14};
    auto e = integrate_semi_infinite([](double x) { return std::exp(-x); }, spec);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-11));
    auto l = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, spec);
    CHECK(l.value == doctest::Approx(PI / 2).epsilon(1e-11));
    auto g = integrate_semi_infinite([](double x) { return std::exp(-x * x); }, spec);
    CHECK(g.value == doctest::Approx(std::sqrt(PI) / 2).epsilon(1e-11));
}

TEST_CASE("signed and absolute antiderivative values") {
    // -mu/(mu^2+lambda^2) is an antiderivative of (mu^2-lambda^2)/(mu^2+lambda^2)^2:
    // the signed semi-infinite integral is 0, the absolute-value one is 1/lambda.
    QuadratureSpec spec{1e-12, 1e-12, 1 << 14};
    for (double lam : {0.1, 0.5, 1.0, 2.0}) {
        auto fs = [&](double mu) {
            const double d = mu * mu + lam * lam;
            return (mu * mu - lam * lam) / (d * d);
        };
        auto fa = [&](double mu) {
            const double d = mu * mu + lam * lam;
            return std::abs(mu * mu - lam * lam) / (d * d);
        };
        auto rs = integrate_semi_infinite(fs, spec, {lam});
        CHECK(std::abs(rs.value) < 1e-10);
        auto ra = integrate_semi_infinite(fa, spec, {lam});
        CHECK(ra.value == doctest::Approx(1.0 / lam).epsilon(1e-10));
    }
}

TEST_CASE("breakpoints let kinks converge quickly") {
    auto f = [](double x) { return std::abs(x - 1.0 / 3); };
    auto with = integrate_interval(f, 0.0, 1.0, {1e-13, 1e-13, 1 << 12}, {1.0 / 3});
    const double exact = (1.0 / 9 + 4.0 / 9) / 2;
    CHECK(with.converged);
    CHECK(with.value == doctest::Approx(exact).epsilon(1e-13));
    CHECK(with.panels <= 8);
}

TEST_CASE("identical inputs give bit-identical results") {
    auto f = [](double x) { return std::sin(7 * x) / (1 + x * x); };
    auto a = integrate_semi_infinite(f, {1e-11, 1e-10, 1 << 12}, {0.5});
    auto b = integrate_semi_infinite(f, {1e-11, 1e-10, 1 << 12}, {0.5});
    CHECK(a.value == b.value);
    CHECK(a.error == b.error);
    CHECK(a.panels == b.panels);
}

TEST_CASE("smooth integrands stay well under the panel budget") {
    auto f = [](double x) { return 1.0 / (1.0 + 25.0 * x * x); };
    auto r = integrate_interval(f, -1.0, 1.0, {1e-12, 1e-12, 1 << 10});
    CHECK(r.converged);
    CHECK(r.panels < (1 << 10));
    CHECK(r.value == doctest::Approx(2.0 / 5 * std::atan(5.0)).epsilon(1e-11));
}

TEST_CASE("unreachable tolerance reports non-convergence honestly") {
    // a discontinuity with no breakpoint hint: budget 8 panels cannot hit 1e-15
    auto f = [](double x) { return x < 0.37731 ? 0.0 : 1.0; };
    auto r = integrate_interval(f, 0.0, 1.0, {1e-15, 1e-15, 8});
    CHECK_FALSE(r.converged);
}

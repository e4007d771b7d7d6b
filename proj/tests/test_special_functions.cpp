#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nev/special_functions.hpp"
#include "support/oracles.hpp"

using namespace nev;
using namespace nev::sf;

TEST_CASE("bessel_j at trivial arguments") {
    CHECK(bessel_j(0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bessel_j(1, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("bessel_j0 against the power-series oracle") {
    CHECK(std::abs(bessel_j(0, 1.0) - oracle::j0_series(1.0)) < 1e-14);
    CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976866).epsilon(1e-10));
    for (double x : {0.1, 0.7, 2.3, 5.5, 9.1}) {
        CHECK(std::abs(bessel_j(0, x) - oracle::j0_series(x)) < 5e-14);
        CHECK(std::abs(bessel_j(1, x) - oracle::j1_series(x)) < 5e-14);
    }
}

TEST_CASE("bessel_y0 series-plus-log oracle and log divergence") {
    CHECK(std::abs(bessel_y(0, 1.0) - oracle::y0_series(1.0)) < 1e-13);
    CHECK(bessel_y(0, 1.0) == doctest::Approx(0.0882569642).epsilon(1e-9));
    CHECK(bessel_y(0, 1e-6) < -8.0);
    CHECK_THROWS_AS(bessel_y(0, 0.0), Error);
    CHECK_THROWS_AS(bessel_y(1, -1.0), Error);
}

TEST_CASE("Wronskian identity across orders and arguments") {
    // J_{m+1}(x) Y_m(x) - J_m(x) Y_{m+1}(x) = 2/(pi x)
    CHECK(std::abs(bessel_j(1, 1.7) * bessel_y(0, 1.7) - bessel_j(0, 1.7) * bessel_y(1, 1.7) -
                   2.0 / (pi * 1.7)) < 1e-10);
    for (int m = 0; m <= 4; ++m)
        for (double x : {0.3, 2.9, 7.7, 13.0, 41.0, 97.0}) {
            const double w = bessel_j(m + 1, x) * bessel_y(m, x) -
                             bessel_j(m, x) * bessel_y(m + 1, x);
            CHECK(std::abs(w - 2.0 / (pi * x)) < 1e-12 * std::max(1.0, 2.0 / (pi * x)) + 1e-13);
        }
}

TEST_CASE("accuracy against the standard-library evaluator") {
    // independent path; libstdc++ implements these via its own series/asymptotics
    for (int i = 1; i <= 200; ++i) {
        const double x = 0.5 * i;
        CHECK(std::abs(bessel_j(0, x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
        CHECK(std::abs(bessel_j(1, x) - std::cyl_bessel_j(1.0, x)) < 1e-12);
        CHECK(std::abs(bessel_y(0, x) - std::cyl_neumann(0.0, x)) < 1e-10);
        CHECK(std::abs(bessel_y(1, x) - std::cyl_neumann(1.0, x)) < 1e-10);
    }
    for (int m = 2; m <= 9; ++m)
        for (double x : {0.4, 1.9, 6.0, 14.2, 33.0}) {
            CHECK(std::abs(bessel_j(m, x) - std::cyl_bessel_j(double(m), x)) < 1e-11);
            CHECK(std::abs(bessel_y(m, x) - std::cyl_neumann(double(m), x)) <
                  1e-9 * std::max(1.0, std::abs(std::cyl_neumann(double(m), x))));
        }
}

TEST_CASE("fundamental solution values and symmetries") {
    const Vec2 x{0.3, -0.4}, y{0.3 + 0.6, -0.4 + 0.8};  // |x-y| = 1
    const Complex v = fundamental_solution(1.0, x, y);
    CHECK(v.real() == doctest::Approx(-oracle::y0_series(1.0) / 4.0).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(oracle::j0_series(1.0) / 4.0).epsilon(1e-12));
    CHECK(v.real() == doctest::Approx(-0.0220642411).epsilon(1e-7));
    CHECK(v.imag() == doctest::Approx(0.1912994216).epsilon(1e-8));
    CHECK(fundamental_solution(1.0, x, y) == fundamental_solution(1.0, y, x));
    // depends only on sqrt(lambda) |x-y|
    const Vec2 o{0.0, 0.0}, e1{1.0, 0.0}, e2{2.0, 0.0};
    CHECK(std::abs(fundamental_solution(4.0, o, e1) - fundamental_solution(1.0, o, e2)) < 1e-15);
    CHECK_THROWS_AS(fundamental_solution(1.0, x, x), Error);
}

TEST_CASE("kernel gradient: antisymmetry, direction, finite differences") {
    const Vec2 x{0.2, 0.7}, y{1.1, 1.65};
    auto g = grad_fundamental_solution(2.0, x, y);
    auto gy = grad_fundamental_solution(2.0, y, x);
    CHECK(std::abs(g.x + gy.x) < 1e-15);
    CHECK(std::abs(g.y + gy.y) < 1e-15);
    // parallel to x - y
    const Vec2 d = x - y;
    CHECK(std::abs(g.x * d.y - g.y * d.x) < 1e-15);
    // central differences of the value
    const double h = 1e-5;
    const Complex ddx = (fundamental_solution(2.0, {x.x + h, x.y}, y) -
                         fundamental_solution(2.0, {x.x - h, x.y}, y)) /
                        (2.0 * h);
    const Complex ddy = (fundamental_solution(2.0, {x.x, x.y + h}, y) -
                         fundamental_solution(2.0, {x.x, x.y - h}, y)) /
                        (2.0 * h);
    CHECK(std::abs(ddx - g.x) < 1e-6);
    CHECK(std::abs(ddy - g.y) < 1e-6);
}

TEST_CASE("zeros of J_m' by bracketing and bisection") {
    CHECK(bessel_deriv_zero(0, 1) == doctest::Approx(oracle::jprime_zero(0, 1)).epsilon(1e-11));
    CHECK(bessel_deriv_zero(0, 1) == doctest::Approx(3.8317059702).epsilon(1e-10));
    CHECK(bessel_deriv_zero(1, 1) == doctest::Approx(1.8411837813).epsilon(1e-10));
    for (int m = 0; m <= 3; ++m) {
        double prev = 0.0;
        for (int k = 1; k <= 5; ++k) {
            const double z = bessel_deriv_zero(m, k);
            CHECK(z > prev);
            CHECK(z == doctest::Approx(oracle::jprime_zero(m, k)).epsilon(1e-9));
            prev = z;
        }
    }
}

TEST_CASE("Helmholtz residual of the kernel at random points") {
    std::mt19937_64 rng(42);
    auto uni = [&](double a, double b) {
        return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
    };
    const double lam = 3.7, h = 1e-3;
    const Vec2 y{0.0, 0.0};
    for (int it = 0; it < 10; ++it) {
        const double r = uni(0.8, 3.0), th = uni(0.0, 2.0 * pi);
        const Vec2 x{r * std::cos(th), r * std::sin(th)};
        auto u = [&](Vec2 p) { return fundamental_solution(lam, p, y); };
        const Complex lap = (u({x.x + h, x.y}) + u({x.x - h, x.y}) + u({x.x, x.y + h}) +
                             u({x.x, x.y - h}) - 4.0 * u(x)) /
                            (h * h);
        CHECK(std::abs(lap + lam * u(x)) < 1e-4);
    }
}

TEST_CASE("outgoing behavior at large distance") {
    // |sqrt(r) (d_r Phi - i sqrt(lambda) Phi)| small at r = 200, lambda = 1
    const double r = 200.0, h = 1e-4;
    auto phi = [&](double rr) {
        return fundamental_solution(1.0, {rr, 0.0}, {0.0, 0.0});
    };
    const Complex dr = (phi(r + h) - phi(r - h)) / (2.0 * h);
    CHECK(std::abs(std::sqrt(r) * (dr - Complex(0.0, 1.0) * phi(r))) < 0.02);
}

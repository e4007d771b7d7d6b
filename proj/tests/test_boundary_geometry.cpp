#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nev/deformation.hpp"
#include "nev/special_functions.hpp"
#include "support/oracles.hpp"

using namespace nev;
using namespace nev::geom;

namespace {

BoundaryCurve figure_eight() {
    // x = sin(2s)/2, y = sin(s): crosses itself at the origin
    std::vector<Complex> cx(5, Complex(0, 0)), cy(5, Complex(0, 0));
    cx[4] = Complex(0, -0.25);  // m=+2
    cx[0] = Complex(0, 0.25);   // m=-2
    cy[3] = Complex(0, -0.5);
    cy[1] = Complex(0, 0.5);
    return make_curve(cx, cy);
}

DeformationField dilation_field() {
    // X(s) = (cos s, sin s): the identity position field on the unit circle
    DeformationField f;
    f.fx = {Complex(0.5, 0), Complex(0, 0), Complex(0.5, 0)};
    f.fy = {Complex(0, 0.5), Complex(0, 0), Complex(0, -0.5)};
    return f;
}

}  // namespace

TEST_CASE("make_curve validates areas and rejects bad input") {
    auto circle = make_circle(1.0);
    CHECK(circle.signed_area() == doctest::Approx(pi).epsilon(1e-12));
    auto ell = make_ellipse(1.0, 0.5);
    CHECK(ell.signed_area() == doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(figure_eight(), Error);
    try {
        figure_eight();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonSimpleCurve);
    }
    // clockwise circle is a degenerate parametrization for this toolkit
    std::vector<Complex> cx = {Complex(0.5, 0), Complex(0, 0), Complex(0.5, 0)};
    std::vector<Complex> cy = {Complex(0, -0.5), Complex(0, 0), Complex(0, 0.5)};
    CHECK_THROWS_AS(make_curve(cx, cy), Error);
    // conjugate-symmetry violation
    cx = {Complex(0.5, 0.3), Complex(0, 0), Complex(0.5, 0)};
    cy = {Complex(0, 0.5), Complex(0, 0), Complex(0, -0.5)};
    CHECK_THROWS_AS(make_curve(cx, cy), Error);
}

TEST_CASE("quadrature nodes, weights and perimeter") {
    auto q4 = quadrature(make_circle(1.0), 4);
    CHECK(q4.points[0].x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q4.points[1].y == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(q4.points[2].x == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(q4.points[3].y == doctest::Approx(-1.0).epsilon(1e-14));
    for (double w : q4.weights) CHECK(w == doctest::Approx(pi / 2).epsilon(1e-14));

    for (int N : {16, 64, 256})
        CHECK(quadrature(make_circle(2.0), N).perimeter() ==
              doctest::Approx(4.0 * pi).epsilon(1e-13));

    auto ell = make_ellipse(1.0, 0.5);
    const double exact = oracle::arclength(
        [](double s) {
            return std::hypot(-std::sin(s), 0.5 * std::cos(s));
        },
        0.0, 2.0 * pi, 1e-13);
    CHECK(exact == doctest::Approx(4.8442241103).epsilon(1e-9));
    CHECK(quadrature(ell, 64).perimeter() == doctest::Approx(exact).epsilon(1e-10));

    CHECK(std::abs(q4.normals[0].x - 1.0) < 1e-14);
    for (int j = 0; j < q4.N; ++j) {
        CHECK(q4.normals[j].norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(q4.normals[j].dot(q4.tangents[j])) < 1e-14);
    }
}

TEST_CASE("quadrature resolution precondition") {
    // curve with genuine content at mode 16
    std::vector<Complex> cx(33, Complex(0, 0)), cy(33, Complex(0, 0));
    cx[17] = cx[15] = Complex(0.5, 0);
    cy[17] = Complex(0, -0.5);
    cy[15] = Complex(0, 0.5);
    cx[32] = cx[0] = Complex(0.02, 0);  // mode 16 wiggle
    auto curve = make_curve(cx, cy);
    CHECK(curve.effective_order() == 16);
    CHECK_THROWS_AS(quadrature(curve, 32), Error);
    CHECK_NOTHROW(quadrature(curve, 64));
    CHECK_THROWS_AS(quadrature(make_circle(1.0), 5), Error);
}

TEST_CASE("curvature closed forms") {
    CHECK(curvature_at(make_circle(1.0), 0.77) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(curvature_at(make_circle(2.0), 1.3) == doctest::Approx(0.5).epsilon(1e-12));
    // ellipse a=1, b=0.5 at the major-axis vertex: kappa = a/b^2
    CHECK(curvature_at(make_ellipse(1.0, 0.5), 0.0) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("tangential gradient is spectral") {
    auto quad = quadrature(make_circle(1.0), 64);
    std::vector<double> cst(64, 3.14);
    for (auto& v : tangential_gradient(quad, cst)) CHECK(v.norm() < 1e-12);

    std::vector<double> f(64);
    for (int j = 0; j < 64; ++j) f[j] = std::cos(quad.s[j]);
    auto g = tangential_gradient(quad, f);
    for (int j = 0; j < 64; ++j) {
        CHECK(g[j].norm() == doctest::Approx(std::abs(std::sin(quad.s[j]))).epsilon(1e-12));
        CHECK(std::abs(g[j].dot(quad.normals[j])) < 1e-12);
    }
    auto quad2 = quadrature(make_circle(2.0), 64);
    std::vector<double> f2(64);
    for (int j = 0; j < 64; ++j) f2[j] = std::cos(quad2.s[j]);
    auto g2 = tangential_gradient(quad2, f2);
    for (int j = 0; j < 64; ++j)
        CHECK(g2[j].norm() ==
              doctest::Approx(std::abs(std::sin(quad2.s[j])) / 2.0).epsilon(1e-12));
}

TEST_CASE("deform: dilation, frozen arc, inverse") {
    auto circle = make_circle(1.0);
    auto f = dilation_field();

    auto same = deform(circle, f, 0.0);
    for (int j = 0; j < 32; ++j) {
        const double s = 2.0 * pi * j / 32;
        CHECK((same.point(s) - circle.point(s)).norm() < 1e-13);
    }

    auto grown = deform(circle, f, 0.25);
    for (int j = 0; j < 32; ++j)
        CHECK(grown.point(2.0 * pi * j / 32).norm() == doctest::Approx(1.25).epsilon(1e-12));

    // frozen arc: nodes with s in [0, pi/2] must not move
    DeformationField fa = dilation_field();
    fa.sigma0 = 0.0;
    fa.sigma1 = pi / 2;
    auto def = deform(circle, fa, 0.1);
    auto q = quadrature(def, 128);
    for (int j = 0; j < q.N; ++j) {
        if (q.s[j] >= 0.0 && q.s[j] <= pi / 2)
            CHECK((q.points[j] - circle.point(q.s[j])).norm() < 1e-12);
    }

    // first-order inverse with a spatial cutoff in play
    DeformationField fc = dilation_field();
    fc.clearance_box = Box{{-0.3, -0.3}, {0.3, 0.3}};
    fc.r_margin = 0.15;
    const double t = 0.05;
    const double b = fc.c1_bound(circle);
    auto there = deform(circle, fc, t);
    auto back = deform(there, fc, -t);
    double worst = 0.0;
    for (int j = 0; j < 64; ++j) {
        const double s = 2.0 * pi * j / 64;
        worst = std::max(worst, (back.point(s) - circle.point(s)).norm());
    }
    CHECK(worst < 10.0 * t * t * b * b + 1e-12);

    CHECK_THROWS_AS(deform(circle, dilation_field(), 1.5), Error);
}

TEST_CASE("deformed curves stay simple within the stated margin") {
    auto circle = make_circle(1.0);
    DeformationField f = dilation_field();
    f.sigma0 = 0.0;
    f.sigma1 = 0.7;
    for (double t : {0.02, 0.05, 0.1})
        CHECK_NOTHROW(quadrature(deform(circle, f, t), 128));
}

TEST_CASE("perimeter and area converge spectrally") {
    // smooth perturbed circle: errors must collapse fast as N doubles
    std::vector<Complex> cx(9, Complex(0, 0)), cy(9, Complex(0, 0));
    cx[5] = cx[3] = Complex(0.5, 0);
    cy[5] = Complex(0, -0.5);
    cy[3] = Complex(0, 0.5);
    cx[8] = cx[0] = Complex(0.04, 0);
    cy[8] = Complex(0.03, 0);
    cy[0] = Complex(0.03, 0);
    auto curve = make_curve(cx, cy);
    const double ref = quadrature(curve, 512).perimeter();
    const double e16 = std::abs(quadrature(curve, 16).perimeter() - ref);
    const double e32 = std::abs(quadrature(curve, 32).perimeter() - ref);
    const double e64 = std::abs(quadrature(curve, 64).perimeter() - ref);
    CHECK(e32 < 0.5 * e16 + 1e-14);
    CHECK(e64 < 0.5 * e32 + 1e-14);
    CHECK(e64 < 1e-10);
}

TEST_CASE("interior quadrature on star-shaped domains") {
    auto one = [](Vec2) { return 1.0; };
    CHECK(interior_quadrature(make_circle(1.0), one) == doctest::Approx(pi).epsilon(1e-10));
    CHECK(interior_quadrature(make_ellipse(1.0, 0.5), one) ==
          doctest::Approx(pi / 2).epsilon(1e-8));

    const double jz = sf::bessel_deriv_zero(0, 1);
    auto f = [&](Vec2 p) {
        const double r = p.norm();
        return sf::bessel_j(0, jz * r) * sf::bessel_j(0, jz * r);
    };
    const double exact = pi * sf::bessel_j(0, jz) * sf::bessel_j(0, jz);
    CHECK(interior_quadrature(make_circle(1.0), f) == doctest::Approx(exact).epsilon(1e-6));

    // simple curve whose centroid rays hit the boundary more than once:
    // rho(s) (cos th(s), sin th(s)) with a folding angular parametrization
    const int M = 256, K = 30;
    std::vector<Vec2> pts(M);
    for (int q = 0; q < M; ++q) {
        const double s = 2.0 * pi * q / M;
        const double rho = 1.0 + 0.3 * std::cos(2.0 * s);
        const double th = s + 0.62 * std::sin(2.0 * s);
        pts[q] = {rho * std::cos(th), rho * std::sin(th)};
    }
    std::vector<Complex> fx(2 * K + 1), fy(2 * K + 1);
    for (int m = -K; m <= K; ++m) {
        Complex ax(0, 0), ay(0, 0);
        for (int q = 0; q < M; ++q) {
            const Complex ph = std::exp(Complex(0, -2.0 * pi * m * q / M));
            ax += pts[q].x * ph;
            ay += pts[q].y * ph;
        }
        fx[m + K] = ax / double(M);
        fy[m + K] = ay / double(M);
    }
    auto folded = make_curve(fx, fy);
    try {
        interior_quadrature(folded, one);
        FAIL("expected NotStarShaped");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotStarShaped);
    }
}

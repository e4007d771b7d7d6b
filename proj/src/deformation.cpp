#include "nev/deformation.hpp"

#include <algorithm>

namespace nev::geom {

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double Box::distance(Vec2 p) const {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    return std::hypot(dx, dy);
}

Vec2 DeformationField::field_at(double s) const {
    const int Kf = order();
    const Complex step = std::exp(Complex(0.0, s));
    Complex p = std::exp(Complex(0.0, -Kf * s));
    Complex ax(0, 0), ay(0, 0);
    for (int m = -Kf; m <= Kf; ++m) {
        ax += fx[m + Kf] * p;
        ay += fy[m + Kf] * p;
        p *= step;
    }
    return {ax.real(), ay.real()};
}

double DeformationField::eta_arc(double s) const {
    if (!has_arc()) return 1.0;
    const double len = std::fmod(sigma1 - sigma0, 2.0 * pi);
    double rel = std::fmod(s - sigma0, 2.0 * pi);
    if (rel < 0.0) rel += 2.0 * pi;
    if (rel <= len) return 0.0;
    const double dist = std::min(rel - len, 2.0 * pi - rel);
    return smooth_step(dist / tau);
}

double DeformationField::eta_clear(Vec2 p) const {
    if (!clearance_box || r_margin <= 0.0) return 1.0;
    const double d = clearance_box->distance(p);
    return smooth_step((d - r_margin) / r_margin);
}

double DeformationField::c1_bound(const BoundaryCurve& curve) const {
    const int M = std::max(1024, 8 * (curve.effective_order() + order() + 1));
    std::vector<Vec2> g(M);
    for (int j = 0; j < M; ++j) {
        const double s = 2.0 * pi * j / M;
        g[j] = displacement(s, curve.point(s));
    }
    double b = 0.0;
    const double h = 2.0 * pi / M;
    for (int j = 0; j < M; ++j) {
        b = std::max(b, g[j].norm());
        const Vec2 d = (g[(j + 1) % M] - g[(j + M - 1) % M]) * (1.0 / (2.0 * h));
        const double sp = curve.speed(2.0 * pi * j / M);
        b = std::max(b, d.norm() / sp);
    }
    return b;
}

std::vector<double> DeformationField::normal_component(const SurfaceQuadrature& quad) const {
    std::vector<double> sig(quad.N);
    for (int j = 0; j < quad.N; ++j)
        sig[j] = eta(quad.s[j], quad.points[j]) * field_at(quad.s[j]).dot(quad.normals[j]);
    return sig;
}

BoundaryCurve deform(const BoundaryCurve& curve, const DeformationField& field, double t) {
    const double b = field.c1_bound(curve);
    if (std::abs(t) * b >= 1.0)
        throw Error(ErrorCode::DeformationTooLarge,
                    "|t| * C1 bound = " + std::to_string(std::abs(t) * b) + " >= 1");

    int Nf = 512;
    while (Nf < 4 * curve.effective_order() || Nf < 8 * (field.order() + 1)) Nf *= 2;

    std::vector<Vec2> pts(Nf);
    for (int q = 0; q < Nf; ++q) {
        const double s = 2.0 * pi * q / Nf;
        const Vec2 p = curve.point(s);
        pts[q] = p + field.displacement(s, p) * t;
    }

    // trigonometric interpolation through the samples; the Nyquist mode is
    // split evenly between +-Nf/2 to keep the series real and interpolatory
    const int K = Nf / 2;
    std::vector<Complex> cx(2 * K + 1, Complex(0, 0)), cy(2 * K + 1, Complex(0, 0));
    for (int m = -K; m <= K; ++m) {
        Complex ax(0, 0), ay(0, 0);
        const Complex step = std::exp(Complex(0.0, -m * 2.0 * pi / Nf));
        Complex ph(1.0, 0.0);
        for (int q = 0; q < Nf; ++q) {
            ax += pts[q].x * ph;
            ay += pts[q].y * ph;
            ph *= step;
        }
        ax /= static_cast<double>(Nf);
        ay /= static_cast<double>(Nf);
        if (std::abs(m) == K) {
            ax *= 0.5;
            ay *= 0.5;
        }
        cx[m + K] = ax;
        cy[m + K] = ay;
    }
    return make_curve(cx, cy);
}

}  // namespace nev::geom

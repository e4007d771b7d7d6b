#include "nev/boundary_curve.hpp"

#include <algorithm>
#include <numeric>

namespace nev::geom {

namespace {

Complex eval_series(const std::vector<Complex>& c, int K, double s, int deriv) {
    // sum c_m (im)^deriv e^{ims}, one exp + recurrence over modes
    const Complex step = std::exp(Complex(0.0, s));
    Complex p = std::exp(Complex(0.0, -K * s));
    Complex acc(0.0, 0.0);
    for (int m = -K; m <= K; ++m) {
        Complex f = c[m + K];
        if (f != Complex(0.0, 0.0)) {
            const Complex im(0.0, static_cast<double>(m));
            for (int d = 0; d < deriv; ++d) f *= im;
            acc += f * p;
        }
        p *= step;
    }
    return acc;
}

double scale_of(const std::vector<Complex>& cx, const std::vector<Complex>& cy) {
    double sc = 0.0;
    for (const auto& c : cx) sc = std::max(sc, std::abs(c));
    for (const auto& c : cy) sc = std::max(sc, std::abs(c));
    return std::max(sc, 1e-300);
}

}  // namespace

Vec2 BoundaryCurve::point(double s) const {
    return {eval_series(cx_, K_, s, 0).real(), eval_series(cy_, K_, s, 0).real()};
}

Vec2 BoundaryCurve::derivative(double s) const {
    return {eval_series(cx_, K_, s, 1).real(), eval_series(cy_, K_, s, 1).real()};
}

Vec2 BoundaryCurve::derivative2(double s) const {
    return {eval_series(cx_, K_, s, 2).real(), eval_series(cy_, K_, s, 2).real()};
}

double BoundaryCurve::signed_area() const {
    // 1/2 int (x y' - y x') ds = pi * sum m * (conj terms); do it by quadrature
    const int N = std::max(64, 4 * (2 * K_ + 1));
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
        double s = 2.0 * pi * j / N;
        Vec2 p = point(s), d = derivative(s);
        acc += p.cross(d);
    }
    return 0.5 * acc * (2.0 * pi / N);
}

Vec2 BoundaryCurve::centroid() const {
    // c = (1/3A) closed-int gamma (x y' - y x') ds with A the signed area
    const int N = std::max(64, 4 * (2 * K_ + 1));
    double area2 = 0.0, mx = 0.0, my = 0.0;
    for (int j = 0; j < N; ++j) {
        double s = 2.0 * pi * j / N;
        Vec2 p = point(s), d = derivative(s);
        double w = p.cross(d);
        area2 += w;
        mx += p.x * w;
        my += p.y * w;
    }
    const double area = 0.5 * area2 * (2.0 * pi / N);
    mx *= (2.0 * pi / N) / (3.0 * area);
    my *= (2.0 * pi / N) / (3.0 * area);
    return {mx, my};
}

BoundaryCurve make_curve(const std::vector<Complex>& coeff_x, const std::vector<Complex>& coeff_y) {
    if (coeff_x.size() != coeff_y.size() || coeff_x.empty() || coeff_x.size() % 2 == 0)
        throw Error(ErrorCode::DegenerateParametrization,
                    "coefficient lists must have equal odd length 2K+1");
    const int K = (static_cast<int>(coeff_x.size()) - 1) / 2;
    const double sc = scale_of(coeff_x, coeff_y);
    for (int m = 1; m <= K; ++m) {
        if (std::abs(coeff_x[K + m] - std::conj(coeff_x[K - m])) > 1e-10 * sc ||
            std::abs(coeff_y[K + m] - std::conj(coeff_y[K - m])) > 1e-10 * sc)
            throw Error(ErrorCode::DegenerateParametrization,
                        "coefficients lack conjugate symmetry (curve not real)");
    }
    if (std::abs(coeff_x[K].imag()) > 1e-10 * sc || std::abs(coeff_y[K].imag()) > 1e-10 * sc)
        throw Error(ErrorCode::DegenerateParametrization, "mean coefficient must be real");

    BoundaryCurve c;
    c.K_ = K;
    c.cx_ = coeff_x;
    c.cy_ = coeff_y;

    // effective bandwidth: the tail above it perturbs node geometry below
    // the quadrature tolerances exercised here
    double tail = 0.0;
    int keff = K;
    for (int m = K; m >= 1; --m) {
        tail += std::abs(c.cx_[K + m]) + std::abs(c.cx_[K - m]) + std::abs(c.cy_[K + m]) +
                std::abs(c.cy_[K - m]);
        if (tail > 1e-6 * sc) break;
        keff = m - 1;
    }
    c.effective_order_ = std::max(keff, 1);

    // sample at default resolution for validity checks
    const int N = std::max(256, 8 * (c.effective_order_ + 1));
    std::vector<Vec2> pts(N);
    std::vector<double> sp(N);
    for (int j = 0; j < N; ++j) {
        double s = 2.0 * pi * j / N;
        pts[j] = c.point(s);
        sp[j] = c.speed(s);
        if (!(sp[j] > 1e-12 * sc))
            throw Error(ErrorCode::DegenerateParametrization, "|gamma'| vanishes at a node");
    }

    // simplicity: non-adjacent node pairs must clear a floor set by the
    // local node spacing (robust under nonuniform parametrizations)
    const double h = 2.0 * pi / N;
    for (int i = 0; i < N; ++i) {
        for (int j = i + 2; j < N; ++j) {
            if (i == 0 && j == N - 1) continue;  // adjacent around the seam
            const double floor = 0.4 * std::min(sp[i], sp[j]) * h;
            if ((pts[i] - pts[j]).norm() < floor)
                throw Error(ErrorCode::NonSimpleCurve, "quadrature nodes nearly coincide");
        }
    }

    if (c.signed_area() <= 0.0)
        throw Error(ErrorCode::DegenerateParametrization,
                    "curve must be counterclockwise (signed area > 0)");
    return c;
}

BoundaryCurve make_circle(double radius, Vec2 center) {
    std::vector<Complex> cx(3), cy(3);
    cx[0] = Complex(radius / 2, 0);
    cx[1] = Complex(center.x, 0);
    cx[2] = Complex(radius / 2, 0);
    cy[0] = Complex(0, radius / 2);
    cy[1] = Complex(center.y, 0);
    cy[2] = Complex(0, -radius / 2);
    return make_curve(cx, cy);
}

BoundaryCurve make_ellipse(double a, double b, Vec2 center) {
    std::vector<Complex> cx(3), cy(3);
    cx[0] = Complex(a / 2, 0);
    cx[1] = Complex(center.x, 0);
    cx[2] = Complex(a / 2, 0);
    cy[0] = Complex(0, b / 2);
    cy[1] = Complex(center.y, 0);
    cy[2] = Complex(0, -b / 2);
    return make_curve(cx, cy);
}

double SurfaceQuadrature::perimeter() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

SurfaceQuadrature quadrature(const BoundaryCurve& curve, int N) {
    if (N < 4 || N % 2 != 0)
        throw Error(ErrorCode::ResolutionTooLow, "N must be even and >= 4");
    if (N < 4 * curve.effective_order())
        throw Error(ErrorCode::ResolutionTooLow,
                    "N < 4K for curve bandwidth K = " + std::to_string(curve.effective_order()));
    SurfaceQuadrature q;
    q.N = N;
    q.curve = curve;
    q.s.resize(N);
    q.points.resize(N);
    q.tangents.resize(N);
    q.normals.resize(N);
    q.speeds.resize(N);
    q.weights.resize(N);
    q.curvature.resize(N);
    for (int j = 0; j < N; ++j) {
        const double s = 2.0 * pi * j / N;
        q.s[j] = s;
        q.points[j] = curve.point(s);
        Vec2 d = curve.derivative(s);
        q.tangents[j] = d;
        const double sp = d.norm();
        q.speeds[j] = sp;
        q.normals[j] = {d.y / sp, -d.x / sp};
        q.weights[j] = (2.0 * pi / N) * sp;
        q.curvature[j] = curvature_at(curve, s);
    }
    return q;
}

double curvature_at(const BoundaryCurve& curve, double s) {
    Vec2 d = curve.derivative(s), dd = curve.derivative2(s);
    const double sp = d.norm();
    return d.cross(dd) / (sp * sp * sp);
}

std::vector<double> spectral_derivative(const std::vector<double>& values) {
    const int N = static_cast<int>(values.size());
    // direct DFT (N is small); modes -N/2+1 .. N/2-1, Nyquist derivative -> 0
    std::vector<Complex> hat(N, Complex(0, 0));
    for (int m = 0; m < N; ++m) {
        Complex acc(0, 0);
        for (int j = 0; j < N; ++j)
            acc += values[j] * std::exp(Complex(0.0, -2.0 * pi * m * j / N));
        hat[m] = acc / static_cast<double>(N);
    }
    std::vector<double> out(N, 0.0);
    for (int j = 0; j < N; ++j) {
        Complex acc(0, 0);
        for (int m = 0; m < N; ++m) {
            int mm = (m <= N / 2) ? m : m - N;
            if (std::abs(mm) == N / 2) continue;
            acc += Complex(0.0, mm) * hat[m] * std::exp(Complex(0.0, 2.0 * pi * m * j / N));
        }
        out[j] = acc.real();
    }
    return out;
}

std::vector<Vec2> tangential_gradient(const SurfaceQuadrature& quad,
                                      const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != quad.N)
        throw Error(ErrorCode::DomainError, "values must be sampled at the quadrature nodes");
    std::vector<double> ds = spectral_derivative(values);
    std::vector<Vec2> out(quad.N);
    for (int j = 0; j < quad.N; ++j) {
        const double f = ds[j] / (quad.speeds[j] * quad.speeds[j]);
        out[j] = quad.tangents[j] * f;  // (f'/|g'|) * unit tangent
    }
    return out;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
        nodes[i] = xm - xl * x;
        nodes[n - 1 - i] = xm + xl * x;
        weights[i] = 2.0 * xl / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double interior_quadrature(const BoundaryCurve& curve, const std::function<double(Vec2)>& f,
                           int n_radial, int n_angular) {
    const Vec2 c = curve.centroid();
    const int Ns = (n_angular > 0)
                       ? n_angular
                       : std::max(64, 4 * (curve.effective_order() + 1));
    // star-shapedness: cross(gamma - c, gamma') > 0 at every node
    std::vector<double> jac(Ns);
    for (int j = 0; j < Ns; ++j) {
        const double s = 2.0 * pi * j / Ns;
        jac[j] = (curve.point(s) - c).cross(curve.derivative(s));
        if (!(jac[j] > 0.0))
            throw Error(ErrorCode::NotStarShaped,
                        "curve is not star-shaped about its centroid");
    }
    std::vector<double> rn, rw;
    gauss_legendre(n_radial, 0.0, 1.0, rn, rw);
    double acc = 0.0;
    for (int j = 0; j < Ns; ++j) {
        const double s = 2.0 * pi * j / Ns;
        const Vec2 g = curve.point(s);
        double radial = 0.0;
        for (int q = 0; q < n_radial; ++q) {
            const double r = rn[q];
            radial += rw[q] * r * f({c.x + r * (g.x - c.x), c.y + r * (g.y - c.y)});
        }
        acc += radial * jac[j] * (2.0 * pi / Ns);
    }
    return acc;
}

}  // namespace nev::geom

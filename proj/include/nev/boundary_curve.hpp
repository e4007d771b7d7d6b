#ifndef NEV_BOUNDARY_CURVE_HPP
#define NEV_BOUNDARY_CURVE_HPP

#include <functional>
#include <vector>

#include "nev/common.hpp"

namespace nev::geom {

/// Closed planar curve as a truncated Fourier series
///   gamma(s) = sum_{m=-K..K} c_m e^{i m s},  s in [0, 2pi),
/// with conjugate-symmetric coefficients so gamma is real-valued.
/// Coefficient vectors are indexed 0..2K <-> m = -K..K.
class BoundaryCurve {
public:
    BoundaryCurve() = default;

    int order() const { return K_; }
    const std::vector<Complex>& coeff_x() const { return cx_; }
    const std::vector<Complex>& coeff_y() const { return cy_; }

    Vec2 point(double s) const;
    Vec2 derivative(double s) const;   // gamma'(s)
    Vec2 derivative2(double s) const;  // gamma''(s)
    double speed(double s) const { return derivative(s).norm(); }

    /// Smallest K' such that the coefficient tail above K' is numerically
    /// negligible (below 1e-8 of the curve scale); quadrature resolution
    /// requirements are judged against this bandwidth.
    int effective_order() const { return effective_order_; }

    double signed_area() const;
    Vec2 centroid() const;

private:
    friend BoundaryCurve make_curve(const std::vector<Complex>&, const std::vector<Complex>&);
    int K_ = 0;
    int effective_order_ = 0;
    std::vector<Complex> cx_{Complex(0, 0)}, cy_{Complex(0, 0)};
};

/// Validates and builds a curve. Throws DegenerateParametrization (bad
/// coefficient data, vanishing speed, clockwise orientation) or
/// NonSimpleCurve (node pairs below the distance floor).
BoundaryCurve make_curve(const std::vector<Complex>& coeff_x, const std::vector<Complex>& coeff_y);

BoundaryCurve make_circle(double radius, Vec2 center = {0.0, 0.0});
BoundaryCurve make_ellipse(double a, double b, Vec2 center = {0.0, 0.0});

/// Nodes, outward normals, arclength weights and curvature at the N
/// equispaced parameters s_j = 2 pi j / N.
struct SurfaceQuadrature {
    int N = 0;
    std::vector<double> s;
    std::vector<Vec2> points;
    std::vector<Vec2> tangents;  // gamma'(s_j), unnormalized
    std::vector<Vec2> normals;   // outward unit normals
    std::vector<double> speeds;  // |gamma'(s_j)|
    std::vector<double> weights; // (2pi/N) |gamma'(s_j)|
    std::vector<double> curvature;
    BoundaryCurve curve;

    double perimeter() const;
};

/// Throws ResolutionTooLow if N < 4 * effective order (or N odd / too small).
SurfaceQuadrature quadrature(const BoundaryCurve& curve, int N);

/// Signed curvature, positive for convex counterclockwise curves.
double curvature_at(const BoundaryCurve& curve, double s);

/// Spectral tangential gradient of nodal values: (f'(s)/|gamma'|) t_hat.
std::vector<Vec2> tangential_gradient(const SurfaceQuadrature& quad,
                                      const std::vector<double>& values);

/// Derivative d/ds of periodic nodal samples by trigonometric differentiation.
std::vector<double> spectral_derivative(const std::vector<double>& values);

/// Gauss-Legendre rule on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Integral over the interior via the tensor rule on the polar-like map
/// (r, s) -> centroid + r (gamma(s) - centroid). Requires the curve to be
/// star-shaped about its centroid; throws NotStarShaped otherwise.
double interior_quadrature(const BoundaryCurve& curve, const std::function<double(Vec2)>& f,
                           int n_radial = 48, int n_angular = 0);

}  // namespace nev::geom

#endif

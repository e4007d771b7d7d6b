#ifndef NEV_DEFORMATION_HPP
#define NEV_DEFORMATION_HPP

#include <optional>
#include <vector>

#include "nev/boundary_curve.hpp"

namespace nev::geom {

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, flat at both ends.
double smooth_step(double u);

/// Axis-aligned box used for the potential-clearance cutoff.
struct Box {
    Vec2 lo, hi;
    double distance(Vec2 p) const;
};

/// Boundary vector field X as a trigonometric polynomial in the curve
/// parameter, gated by the cutoff eta = chi_arc(s) * chi_clear(point):
/// chi_arc vanishes identically on the frozen arc [s0, s1] and ramps to 1
/// over a transition width tau; chi_clear vanishes within r_margin of the
/// potential bounding box. The deformation map is
///   h_t(gamma(s)) = gamma(s) + t * eta * X(s).
struct DeformationField {
    std::vector<Complex> fx{Complex(0, 0)}, fy{Complex(0, 0)};  // m = -Kf..Kf
    double sigma0 = 0.0, sigma1 = 0.0;  // frozen arc; no arc when sigma1 <= sigma0
    double tau = 1.2;                   // cutoff transition width (radians)
    std::optional<Box> clearance_box;   // potential bounding box
    double r_margin = 0.0;              // eta = 0 within r_margin of the box

    int order() const { return (static_cast<int>(fx.size()) - 1) / 2; }
    bool has_arc() const { return sigma1 > sigma0; }

    Vec2 field_at(double s) const;              // X(s)
    double eta_arc(double s) const;             // chi_arc
    double eta_clear(Vec2 p) const;             // chi_clear
    double eta(double s, Vec2 p) const { return eta_arc(s) * eta_clear(p); }
    Vec2 displacement(double s, Vec2 p) const { return field_at(s) * eta(s, p); }

    /// Numeric bound b = ||eta X||_{C1} along the curve (values and
    /// arclength derivative); h_t is a diffeomorphism for |t| b < 1.
    double c1_bound(const BoundaryCurve& curve) const;

    /// eta * (X . nu) at the quadrature nodes.
    std::vector<double> normal_component(const SurfaceQuadrature& quad) const;
};

/// Deformed curve gamma + t eta X, interpolated back to Fourier form on a
/// fixed sample lattice (multiple of 512 nodes) so that quadrature nodes on
/// the frozen arc are preserved to rounding. Throws DeformationTooLarge when
/// |t| * c1_bound >= 1 and NonSimpleCurve when the image self-intersects.
BoundaryCurve deform(const BoundaryCurve& curve, const DeformationField& field, double t);

}  // namespace nev::geom

#endif

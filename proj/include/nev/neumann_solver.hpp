#ifndef NEV_NEUMANN_SOLVER_HPP
#define NEV_NEUMANN_SOLVER_HPP

#include <functional>

#include "nev/layer_potentials.hpp"

namespace nev::solver {

/// Volume source f1: grid-sampled values (on the potential grid's lattice)
/// plus an analytic smooth handle sampled onto the same lattice.
struct InteriorSource {
    std::shared_ptr<const pot::PotentialGrid> grid;
    std::function<double(Vec2)> smooth;

    bool empty() const { return !grid && !smooth; }
};

/// Outgoing volume potential w solving (Delta + lambda - V) w = f1 through
/// the Lippmann-Schwinger machinery with a volume source:
/// w(x) = -sum_z Phi(x - z) [f1(z) + V(z) w(z)] cw.
struct VolumePart {
    double lambda = 0.0;
    double h = 0.0;
    Complex selfw{0.0, 0.0};
    std::vector<Vec2> centers;
    std::vector<Complex> q;  // f1 + V w at the cells

    Complex eval(Vec2 x) const;
    Complex eval_dnu(Vec2 x, Vec2 nu) const;
};

struct NeumannSolution {
    std::shared_ptr<const layer::KernelMatrixSet> kernels;
    layer::BoundaryDensity phi;
    double condition_estimate = 0.0;
    std::shared_ptr<const VolumePart> w;  // null when f1 == 0

    /// u(x) = w(x) + (S phi)(x), interior evaluation.
    Complex eval(Vec2 x) const;
};

/// Solve (N + I/2) phi = g. Throws NearEigenvalue when the condition
/// estimate exceeds 1e12.
NeumannSolution solve_reduced(std::shared_ptr<const layer::KernelMatrixSet> kernels,
                              const layer::BoundaryDensity& g);

/// Full problem (Delta + lambda - V) u = f1, du/dnu = f2 via u = w + S phi.
NeumannSolution solve_full(const geom::BoundaryCurve& curve, double lambda,
                           std::shared_ptr<const pot::PotentialGrid> V,
                           const InteriorSource& f1, const layer::BoundaryDensity& f2, int N);

/// Eigenfunction handle for the Fredholm solvability test.
struct EigenfunctionHandle {
    std::function<double(Vec2)> interior;
    std::vector<double> boundary_trace;  // at the quadrature nodes
};

/// |int_dOmega f2 v - int_Omega f1 v| for each eigenfunction v; all about
/// zero iff (f1, f2) is solvable at this energy.
std::vector<double> solvability_residual(const geom::SurfaceQuadrature& quad,
                                         const InteriorSource& f1,
                                         const layer::BoundaryDensity& f2,
                                         const std::vector<EigenfunctionHandle>& eigfuns);

}  // namespace nev::solver

#endif

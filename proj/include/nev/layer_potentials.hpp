#ifndef NEV_LAYER_POTENTIALS_HPP
#define NEV_LAYER_POTENTIALS_HPP

#include <Eigen/Dense>
#include <memory>

#include "nev/potential_grid.hpp"

namespace nev::layer {

using BoundaryDensity = Eigen::VectorXcd;

/// Dense Nystrom discretizations at a fixed energy of the single layer S,
/// double layer D and its adjoint N built from the total kernel
/// u_to = u_in + u_sc. Quadrature weights are folded into the matrices, so
/// they act directly on node values. Immutable and shareable once assembled.
struct KernelMatrixSet {
    double lambda = 0.0;
    geom::SurfaceQuadrature quad;
    std::shared_ptr<const pot::PotentialGrid> V;   // null or zero => classical kernels
    std::shared_ptr<const pot::LsFactor> ls;       // null when V is absent/zero
    Eigen::MatrixXcd S, D, Nadj;
    Eigen::MatrixXcd T;  // u_to(z_a, x_j) at active cells for boundary sources

    bool has_potential() const { return ls != nullptr; }
    int size() const { return quad.N; }
};

struct AssembleOptions {
    bool use_openmp = true;  // serial reference path when false
};

/// Kress log-weight Nystrom assembly; the smooth u_sc parts are integrated
/// with the plain trapezoid rule. Throws SolveSingular from the scattering
/// factorization.
KernelMatrixSet assemble(double lambda, const geom::SurfaceQuadrature& quad,
                         std::shared_ptr<const pot::PotentialGrid> V = nullptr,
                         const AssembleOptions& opts = {});

/// Quadrature weights of the periodic log kernel ln(4 sin^2((s-t)/2)),
/// indexed by node offset.
std::vector<double> kress_log_weights(int N);

/// S f and D f at a point off the boundary. Throws TooCloseToBoundary when
/// x is within 2 pi * perimeter / N of a node.
Complex eval_single(const KernelMatrixSet& kernels, const BoundaryDensity& f, Vec2 x);
Complex eval_double(const KernelMatrixSet& kernels, const BoundaryDensity& f, Vec2 x);

enum class Side { inner, outer };
enum class TraceKind { single_dnu, double_value };

/// Jump-relation traces: d_nu(S f)_± = N f -/+ f/2,  (D f)_± = D f +/- f/2.
BoundaryDensity boundary_traces(const KernelMatrixSet& kernels, const BoundaryDensity& f,
                                Side side, TraceKind which);

/// Internal evaluator used by the eigenfunction machinery: the double-layer
/// (or single-layer) potential with a density given on an upsampled node
/// set, plus the grid correction when V is present.
struct PotentialEvaluator {
    double lambda = 0.0;
    geom::SurfaceQuadrature quad;               // upsampled quadrature
    Eigen::VectorXcd density;                   // at upsampled nodes
    bool double_layer = true;
    std::shared_ptr<const pot::LsFactor> ls;    // optional grid part
    Eigen::VectorXcd grid_moment;               // beta~ at active cells
    double guard = 0.0;                         // min distance to nodes

    Complex operator()(Vec2 x) const;
};

/// Build the interior evaluator for density f (values at kernels.quad nodes),
/// spectrally upsampled to n_eval nodes.
PotentialEvaluator make_evaluator(const KernelMatrixSet& kernels, const BoundaryDensity& f,
                                  bool double_layer, int n_eval);

}  // namespace nev::layer

#endif

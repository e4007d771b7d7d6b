#ifndef NEV_POTENTIAL_GRID_HPP
#define NEV_POTENTIAL_GRID_HPP

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "nev/boundary_curve.hpp"
#include "nev/deformation.hpp"

namespace nev::pot {

/// Compactly supported real potential sampled at cell centers of a uniform
/// grid. origin is the lower-left corner of the grid box; cell (i, j) has
/// center origin + ((i+1/2) h, (j+1/2) h) and value values[i * ny + j].
struct PotentialGrid {
    Vec2 origin;
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major

    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h};
    }
    bool is_zero() const;
    double max_abs() const;
    /// Bounding box of the nonzero cells (empty optional when V == 0).
    std::optional<geom::Box> support_box() const;
};

/// Gaussian bump A exp(-|z-c|^2/w^2) truncated at 1e-12, sampled on an
/// n x n grid over [c - half, c + half]^2.
PotentialGrid make_bump(double amplitude, Vec2 center, double width, double half_extent, int n);

/// Winding-number check that every nonzero cell lies strictly inside the
/// curve with the given clearance distance to the quadrature nodes.
bool support_strictly_inside(const PotentialGrid& V, const geom::SurfaceQuadrature& quad,
                             double clearance);

/// Solution of the point-source scattering problem on the grid.
struct ScatterField {
    Vec2 source;
    Eigen::VectorXcd u_to;  // total field at the active cells
    double residual = 0.0;  // relative residual of the linear solve
};

/// Factorized Lippmann-Schwinger volume operator at fixed energy: the dense
/// system (I + B) u_to = u_in over the active cells, B = Phi * (V cw) with a
/// log-singularity-corrected self weight. One factorization serves any
/// number of source points. Immutable after construction.
class LsFactor {
public:
    LsFactor(std::shared_ptr<const PotentialGrid> V, double lambda);

    const PotentialGrid& grid() const { return *V_; }
    double lambda() const { return lambda_; }
    int active_count() const { return static_cast<int>(cells_.size()); }
    const std::vector<Vec2>& active_centers() const { return centers_; }
    const std::vector<double>& active_values() const { return vals_; }
    double condition_estimate() const { return cond_; }

    ScatterField solve(Vec2 source) const;
    /// u_to(z, y_j) for many sources, one column per source.
    Eigen::MatrixXcd solve_many(const std::vector<Vec2>& sources) const;
    /// Grid-to-grid total Green matrix u_to(z_b, z_a) (self cell averaged).
    const Eigen::MatrixXcd& green_grid() const;

    /// Analytically integrated kernel over the equal-area disk of one cell.
    Complex self_cell_weight() const { return selfw_; }

    /// (I + B) u without storing B.
    Eigen::VectorXcd apply_system(const Eigen::VectorXcd& u) const;

private:
    std::shared_ptr<const PotentialGrid> V_;
    double lambda_ = 0.0;
    std::vector<std::pair<int, int>> cells_;
    std::vector<Vec2> centers_;
    std::vector<double> vals_;
    Complex selfw_{0.0, 0.0};
    double cond_ = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    mutable Eigen::MatrixXcd green_;
    mutable std::once_flag green_once_;
};

/// One-shot solve of u_to = u_in - K_lambda[V u_to] for a single source.
/// Throws SolveSingular / ResidualTooLarge.
ScatterField lippmann_schwinger(std::shared_ptr<const PotentialGrid> V, double lambda,
                                Vec2 source);

/// Post-hoc representation evaluation of u_sc(x, source) anywhere.
Complex scattered_eval(const ScatterField& field, const LsFactor& op, Vec2 x);
Complex scattered_eval(const ScatterField& field, std::shared_ptr<const PotentialGrid> V,
                       double lambda, Vec2 x);

enum class KernelPart { value, dnu_x, dnu_y };

/// Total Green kernel u_to(x, y) and its normal derivatives for x, y off the
/// potential support; the y-derivative is taken through the symmetry
/// u_to(x, y) = u_to(y, x).
Complex total_kernel(std::shared_ptr<const PotentialGrid> V, double lambda, Vec2 x, Vec2 y,
                     KernelPart part, Vec2 nu_x = {0, 0}, Vec2 nu_y = {0, 0});

}  // namespace nev::pot

#endif

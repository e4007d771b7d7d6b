#include "nev/neumann_solver.hpp"

#include "nev/special_functions.hpp"

namespace nev::solver {

namespace {
constexpr double kNearEigenCondition = 1e12;
}

Complex VolumePart::eval(Vec2 x) const {
    Complex acc(0.0, 0.0);
    const double cw = h * h;
    for (size_t a = 0; a < centers.size(); ++a) {
        const double r = (x - centers[a]).norm();
        const Complex ker =
            (r < 1e-12) ? selfw : sf::fundamental_solution(lambda, x, centers[a]) * cw;
        acc -= ker * q[a];
    }
    return acc;
}

Complex VolumePart::eval_dnu(Vec2 x, Vec2 nu) const {
    Complex acc(0.0, 0.0);
    const double cw = h * h;
    for (size_t a = 0; a < centers.size(); ++a)
        acc -= sf::grad_fundamental_solution(lambda, x, centers[a]).dot(nu) * q[a] * cw;
    return acc;
}

Complex NeumannSolution::eval(Vec2 x) const {
    Complex acc = layer::eval_single(*kernels, phi, x);
    if (w) acc += w->eval(x);
    return acc;
}

NeumannSolution solve_reduced(std::shared_ptr<const layer::KernelMatrixSet> kernels,
                              const layer::BoundaryDensity& g) {
    const int N = kernels->size();
    if (g.size() != N) throw Error(ErrorCode::DomainError, "g length mismatch");
    Eigen::MatrixXcd A = kernels->Nadj + 0.5 * Eigen::MatrixXcd::Identity(N, N);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double rc = lu.rcond();
    NeumannSolution sol;
    sol.kernels = std::move(kernels);
    sol.condition_estimate = (rc > 0.0) ? 1.0 / rc : 1e300;
    if (sol.condition_estimate > kNearEigenCondition)
        throw Error(ErrorCode::NearEigenvalue,
                    "condition estimate " + std::to_string(sol.condition_estimate) +
                        "; lambda is numerically a Neumann eigenvalue");
    sol.phi = lu.solve(g);
    const double gn = g.norm();
    if (gn > 0.0) {
        const double res = (A * sol.phi - g).norm() / gn;
        if (!(res <= 1e-10))
            throw Error(ErrorCode::ResidualTooLarge,
                        "reduced solve residual " + std::to_string(res));
    }
    return sol;
}

NeumannSolution solve_full(const geom::BoundaryCurve& curve, double lambda,
                           std::shared_ptr<const pot::PotentialGrid> V,
                           const InteriorSource& f1, const layer::BoundaryDensity& f2, int N) {
    auto quad = geom::quadrature(curve, N);
    auto kernels = std::make_shared<layer::KernelMatrixSet>(layer::assemble(lambda, quad, V));
    if (f1.empty()) return solve_reduced(kernels, f2);

    // lattice for the source: f1's own grid, else the potential grid
    const pot::PotentialGrid* lattice = f1.grid ? f1.grid.get() : (V ? V.get() : nullptr);
    if (!lattice)
        throw Error(ErrorCode::DomainError, "interior source needs a grid lattice");

    auto wpart = std::make_shared<VolumePart>();
    wpart->lambda = lambda;
    wpart->h = lattice->h;
    const double k = std::sqrt(lambda);
    const double rho = lattice->h / std::sqrt(pi);
    wpart->selfw = Complex(0.0, 0.5 * pi * rho / k) * sf::hankel1_1(k * rho) - 1.0 / (k * k);

    // f1 values on the lattice cells (grid part + smooth part)
    std::vector<Vec2> cells;
    std::vector<double> f1v, vv;
    for (int i = 0; i < lattice->nx; ++i)
        for (int j = 0; j < lattice->ny; ++j) {
            const Vec2 z = lattice->cell_center(i, j);
            double f = 0.0;
            if (f1.grid) f += f1.grid->values[i * f1.grid->ny + j];
            if (f1.smooth) f += f1.smooth(z);
            double vz = 0.0;
            if (V && !V->is_zero()) {
                // V sampled at z (grids may differ; sample by lookup on V's lattice)
                const int vi = static_cast<int>(std::floor((z.x - V->origin.x) / V->h));
                const int vj = static_cast<int>(std::floor((z.y - V->origin.y) / V->h));
                if (vi >= 0 && vi < V->nx && vj >= 0 && vj < V->ny)
                    vz = V->values[vi * V->ny + vj];
            }
            if (f != 0.0 || vz != 0.0) {
                cells.push_back(z);
                f1v.push_back(f);
                vv.push_back(vz);
            }
        }
    const int M = static_cast<int>(cells.size());
    const double cw = lattice->h * lattice->h;

    // (I + B_V) w = -P[f1] on the cells, then q = f1 + V w
    Eigen::VectorXcd w_cells = Eigen::VectorXcd::Zero(M);
    Eigen::VectorXcd rhs(M);
    for (int a = 0; a < M; ++a) {
        Complex acc(0.0, 0.0);
        for (int b = 0; b < M; ++b) {
            if (f1v[b] == 0.0) continue;
            const Complex ker = (a == b)
                                    ? wpart->selfw
                                    : sf::fundamental_solution(lambda, cells[a], cells[b]) * cw;
            acc -= ker * f1v[b];
        }
        rhs(a) = acc;
    }
    bool haveV = false;
    for (double v : vv) haveV = haveV || v != 0.0;
    if (haveV) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(M, M);
#pragma omp parallel for schedule(static) num_threads(exec::threads())
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b) {
                if (vv[b] == 0.0) continue;
                const Complex ker =
                    (a == b) ? wpart->selfw
                             : sf::fundamental_solution(lambda, cells[a], cells[b]) * cw;
                A(a, b) += ker * vv[b];
            }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        if (!(lu.rcond() > 1e-14))
            throw Error(ErrorCode::SolveSingular, "volume solve singular");
        w_cells = lu.solve(rhs);
    } else {
        w_cells = rhs;
    }
    wpart->centers = cells;
    wpart->q.resize(M);
    for (int a = 0; a < M; ++a) wpart->q[a] = f1v[a] + vv[a] * w_cells(a);

    // g = f2 - dw/dnu at the nodes
    layer::BoundaryDensity g(quad.N);
    for (int j = 0; j < quad.N; ++j)
        g(j) = f2(j) - wpart->eval_dnu(quad.points[j], quad.normals[j]);

    NeumannSolution sol = solve_reduced(kernels, g);
    sol.w = wpart;
    return sol;
}

std::vector<double> solvability_residual(const geom::SurfaceQuadrature& quad,
                                         const InteriorSource& f1,
                                         const layer::BoundaryDensity& f2,
                                         const std::vector<EigenfunctionHandle>& eigfuns) {
    std::vector<double> out;
    out.reserve(eigfuns.size());
    for (const auto& ef : eigfuns) {
        Complex bd(0.0, 0.0);
        for (int j = 0; j < quad.N; ++j)
            bd += f2(j) * ef.boundary_trace[j] * quad.weights[j];
        double vol = 0.0;
        if (f1.grid) {
            for (int i = 0; i < f1.grid->nx; ++i)
                for (int j = 0; j < f1.grid->ny; ++j) {
                    const double v = f1.grid->values[i * f1.grid->ny + j];
                    if (v == 0.0) continue;
                    vol += v * ef.interior(f1.grid->cell_center(i, j)) * f1.grid->h * f1.grid->h;
                }
        }
        if (f1.smooth)
            vol += geom::interior_quadrature(
                quad.curve, [&](Vec2 p) { return f1.smooth(p) * ef.interior(p); });
        out.push_back(std::abs(bd - vol));
    }
    return out;
}

}  // namespace nev::solver

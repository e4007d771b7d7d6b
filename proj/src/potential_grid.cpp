#include "nev/potential_grid.hpp"

#include <mutex>

#include "nev/special_functions.hpp"

namespace nev::pot {

bool PotentialGrid::is_zero() const { return max_abs() == 0.0; }

double PotentialGrid::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::optional<geom::Box> PotentialGrid::support_box() const {
    bool any = false;
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            if (values[i * ny + j] != 0.0) {
                any = true;
                const Vec2 c = cell_center(i, j);
                lo.x = std::min(lo.x, c.x - 0.5 * h);
                lo.y = std::min(lo.y, c.y - 0.5 * h);
                hi.x = std::max(hi.x, c.x + 0.5 * h);
                hi.y = std::max(hi.y, c.y + 0.5 * h);
            }
    if (!any) return std::nullopt;
    return geom::Box{lo, hi};
}

PotentialGrid make_bump(double amplitude, Vec2 center, double width, double half_extent, int n) {
    PotentialGrid g;
    g.origin = {center.x - half_extent, center.y - half_extent};
    g.h = 2.0 * half_extent / n;
    g.nx = g.ny = n;
    g.values.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Vec2 z = g.cell_center(i, j);
            const double r2 = (z - center).dot(z - center);
            double v = amplitude * std::exp(-r2 / (width * width));
            if (std::abs(v) < 1e-12) v = 0.0;
            g.values[i * g.ny + j] = v;
        }
    return g;
}

bool support_strictly_inside(const PotentialGrid& V, const geom::SurfaceQuadrature& quad,
                             double clearance) {
    for (int i = 0; i < V.nx; ++i)
        for (int j = 0; j < V.ny; ++j) {
            if (V.values[i * V.ny + j] == 0.0) continue;
            const Vec2 z = V.cell_center(i, j);
            double winding = 0.0, mind = 1e300;
            for (int q = 0; q < quad.N; ++q) {
                const Vec2 d = quad.points[q] - z;
                mind = std::min(mind, d.norm());
                winding += d.cross(quad.tangents[q]) / d.dot(d) * (2.0 * pi / quad.N);
            }
            if (std::abs(winding / (2.0 * pi) - 1.0) > 1e-6) return false;
            if (mind < clearance) return false;
        }
    return true;
}

LsFactor::LsFactor(std::shared_ptr<const PotentialGrid> V, double lambda)
    : V_(std::move(V)), lambda_(lambda) {
    if (lambda_ < 0.5)
        throw Error(ErrorCode::DomainError, "lambda must be >= 0.5");
    const double k = std::sqrt(lambda_);
    for (int i = 0; i < V_->nx; ++i)
        for (int j = 0; j < V_->ny; ++j)
            if (V_->values[i * V_->ny + j] != 0.0) {
                cells_.emplace_back(i, j);
                centers_.push_back(V_->cell_center(i, j));
                vals_.push_back(V_->values[i * V_->ny + j]);
            }
    const int M = active_count();
    // integral of Phi over the disk of area h^2:
    //   (i pi rho / 2k) H1(k rho) - 1/k^2,  rho = h/sqrt(pi)
    const double rho = V_->h / std::sqrt(pi);
    selfw_ = Complex(0.0, 0.5 * pi * rho / k) * sf::hankel1_1(k * rho) - 1.0 / (k * k);
    if (M == 0) return;

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(M, M);
    const double cw = V_->h * V_->h;
#pragma omp parallel for schedule(static) num_threads(exec::threads())
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) {
            if (a == b) {
                A(a, a) += vals_[a] * selfw_;
            } else {
                A(a, b) += sf::fundamental_solution(lambda_, centers_[a], centers_[b]) *
                           (vals_[b] * cw);
            }
        }
    }
    lu_.compute(A);
    const double rc = lu_.rcond();
    cond_ = (rc > 0.0) ? 1.0 / rc : 1e300;
    if (!(rc > 1e-14))
        throw Error(ErrorCode::SolveSingular,
                    "discrete I + K_lambda V is numerically singular at lambda = " +
                        std::to_string(lambda_));
}

Eigen::VectorXcd LsFactor::apply_system(const Eigen::VectorXcd& u) const {
    const int M = active_count();
    Eigen::VectorXcd out = u;
    const double cw = V_->h * V_->h;
#pragma omp parallel for schedule(static) num_threads(exec::threads())
    for (int a = 0; a < M; ++a) {
        Complex acc(0.0, 0.0);
        for (int b = 0; b < M; ++b) {
            const Complex ker = (a == b) ? selfw_
                                         : sf::fundamental_solution(lambda_, centers_[a],
                                                                    centers_[b]) *
                                               cw;
            acc += ker * vals_[b] * u(b);
        }
        out(a) += acc;
    }
    return out;
}

ScatterField LsFactor::solve(Vec2 source) const {
    ScatterField f;
    f.source = source;
    const int M = active_count();
    if (M == 0) {
        f.u_to.resize(0);
        return f;
    }
    Eigen::VectorXcd uin(M);
    for (int a = 0; a < M; ++a)
        uin(a) = sf::fundamental_solution(lambda_, centers_[a], source);
    f.u_to = lu_.solve(uin);
    f.residual = (apply_system(f.u_to) - uin).norm() / uin.norm();
    if (!(f.residual < 1e-8))
        throw Error(ErrorCode::ResidualTooLarge,
                    "Lippmann-Schwinger relative residual " + std::to_string(f.residual));
    return f;
}

Eigen::MatrixXcd LsFactor::solve_many(const std::vector<Vec2>& sources) const {
    const int M = active_count(), S = static_cast<int>(sources.size());
    Eigen::MatrixXcd uin(M, S);
    for (int a = 0; a < M; ++a)
        for (int s = 0; s < S; ++s)
            uin(a, s) = sf::fundamental_solution(lambda_, centers_[a], sources[s]);
    return lu_.solve(uin);
}

const Eigen::MatrixXcd& LsFactor::green_grid() const {
    std::call_once(green_once_, [this]() {
        const int M = active_count();
        Eigen::MatrixXcd uin(M, M);
        // self cell carries the cell-averaged kernel
        for (int a = 0; a < M; ++a)
            for (int b = 0; b < M; ++b)
                uin(a, b) = (a == b)
                                ? selfw_ / (V_->h * V_->h)
                                : sf::fundamental_solution(lambda_, centers_[a], centers_[b]);
        green_ = lu_.solve(uin);
    });
    return green_;
}

ScatterField lippmann_schwinger(std::shared_ptr<const PotentialGrid> V, double lambda,
                                Vec2 source) {
    LsFactor op(std::move(V), lambda);
    return op.solve(source);
}

Complex scattered_eval(const ScatterField& field, const LsFactor& op, Vec2 x) {
    const int M = op.active_count();
    Complex acc(0.0, 0.0);
    const double cw = op.grid().h * op.grid().h;
    for (int a = 0; a < M; ++a) {
        const double r = (x - op.active_centers()[a]).norm();
        Complex ker;
        if (r < 1e-12)
            ker = op.self_cell_weight();
        else
            ker = sf::fundamental_solution(op.lambda(), x, op.active_centers()[a]) * cw;
        acc -= ker * op.active_values()[a] * field.u_to(a);
    }
    return acc;
}

Complex scattered_eval(const ScatterField& field, std::shared_ptr<const PotentialGrid> V,
                       double lambda, Vec2 x) {
    LsFactor op(std::move(V), lambda);
    return scattered_eval(field, op, x);
}

Complex total_kernel(std::shared_ptr<const PotentialGrid> V, double lambda, Vec2 x, Vec2 y,
                     KernelPart part, Vec2 nu_x, Vec2 nu_y) {
    if ((x - y).norm() == 0.0)
        throw Error(ErrorCode::CoincidentPoints, "total_kernel requires x != y");
    const bool zero = !V || V->is_zero();
    switch (part) {
        case KernelPart::value: {
            Complex uin = sf::fundamental_solution(lambda, x, y);
            if (zero) return uin;
            LsFactor op(V, lambda);
            auto f = op.solve(y);
            return uin + scattered_eval(f, op, x);
        }
        case KernelPart::dnu_x: {
            Complex din = sf::grad_fundamental_solution(lambda, x, y).dot(nu_x);
            if (zero) return din;
            LsFactor op(V, lambda);
            auto f = op.solve(y);
            // d/dnu_x of the representation: the kernel gradient is smooth off supp V
            Complex acc(0.0, 0.0);
            const double cw = V->h * V->h;
            for (int a = 0; a < op.active_count(); ++a)
                acc -= sf::grad_fundamental_solution(lambda, x, op.active_centers()[a]).dot(nu_x) *
                       op.active_values()[a] * f.u_to(a) * cw;
            return din + acc;
        }
        case KernelPart::dnu_y:
            // u_to is symmetric; differentiate the first slot at y instead
            return total_kernel(V, lambda, y, x, KernelPart::dnu_x, nu_y, nu_x);
    }
    throw Error(ErrorCode::DomainError, "unknown kernel part");
}

}  // namespace nev::pot

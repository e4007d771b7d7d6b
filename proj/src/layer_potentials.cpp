#include "nev/layer_potentials.hpp"

#include "nev/special_functions.hpp"

namespace nev::layer {

std::vector<double> kress_log_weights(int N) {
    // R[d] = -(4 pi/N) sum_{m=1}^{N/2-1} cos(2 pi m d / N)/m - (4 pi/N^2)(-1)^d
    std::vector<double> R(N, 0.0);
    for (int d = 0; d < N; ++d) {
        double acc = 0.0;
        for (int m = 1; m < N / 2; ++m) acc += std::cos(2.0 * pi * m * d / N) / m;
        R[d] = -(4.0 * pi / N) * acc - (4.0 * pi / (double(N) * N)) * ((d % 2) ? -1.0 : 1.0);
    }
    return R;
}

namespace {

struct RowContext {
    double k;
    const geom::SurfaceQuadrature* q;
    const std::vector<double>* R;
};

// One row of the u_in Nystrom matrices (Kress log-splitting).
void assemble_row(const RowContext& ctx, int i, Eigen::MatrixXcd& S, Eigen::MatrixXcd& D,
                  Eigen::MatrixXcd& Nadj) {
    const auto& q = *ctx.q;
    const auto& R = *ctx.R;
    const int N = q.N;
    const double k = ctx.k;
    const double tr = 2.0 * pi / N;
    for (int j = 0; j < N; ++j) {
        const double spj = q.speeds[j];
        if (i == j) {
            const Complex m1(-spj / (4.0 * pi), 0.0);
            const Complex m2 =
                (Complex(0.0, 0.25) - euler_gamma / (2.0 * pi) -
                 std::log(k * spj / 2.0) / (2.0 * pi)) *
                spj;
            S(i, i) = R[0] * m1 + tr * m2;
            const Complex dd = tr * (-q.curvature[i] * spj * spj / (4.0 * pi));
            D(i, i) = dd;
            Nadj(i, i) = dd;
            continue;
        }
        const Vec2 dx = q.points[i] - q.points[j];
        const double r = dx.norm();
        const double z = k * r;
        const double sh = std::sin(0.5 * (q.s[i] - q.s[j]));
        const double ln4 = std::log(4.0 * sh * sh);
        const double J0 = sf::bessel_j0(z), J1 = sf::bessel_j1(z);
        const Complex H0(J0, sf::bessel_y0(z)), H1(J1, sf::bessel_y1(z));

        const Complex m1(-J0 * spj / (4.0 * pi), 0.0);
        const Complex m = Complex(0.0, 0.25) * H0 * spj;
        S(i, j) = R[(i - j + N) % N] * m1 + tr * (m - m1 * ln4);

        const Vec2 ntil_j{q.tangents[j].y, -q.tangents[j].x};
        const double c = dx.dot(ntil_j);
        const Complex l = Complex(0.0, 0.25) * k * H1 * (c / r);
        const Complex l1(-(k / (4.0 * pi)) * J1 * (c / r), 0.0);
        D(i, j) = R[(i - j + N) % N] * l1 + tr * (l - l1 * ln4);

        const Vec2 ntil_i{q.tangents[i].y, -q.tangents[i].x};
        const double dd = -dx.dot(ntil_i);  // (x_j - x_i) . ntil_i
        const double ratio = spj / q.speeds[i];
        const Complex nn = Complex(0.0, 0.25) * k * H1 * (dd / r) * ratio;
        const Complex n1(-(k / (4.0 * pi)) * J1 * (dd / r) * ratio, 0.0);
        Nadj(i, j) = R[(i - j + N) % N] * n1 + tr * (nn - n1 * ln4);
    }
}

}  // namespace

KernelMatrixSet assemble(double lambda, const geom::SurfaceQuadrature& quad,
                         std::shared_ptr<const pot::PotentialGrid> V,
                         const AssembleOptions& opts) {
    if (!(lambda >= 0.5)) throw Error(ErrorCode::DomainError, "lambda must be >= 0.5");
    KernelMatrixSet out;
    out.lambda = lambda;
    out.quad = quad;
    const int N = quad.N;
    out.S.resize(N, N);
    out.D.resize(N, N);
    out.Nadj.resize(N, N);

    const auto R = kress_log_weights(N);
    RowContext ctx{std::sqrt(lambda), &quad, &R};
    if (opts.use_openmp) {
#pragma omp parallel for schedule(static) num_threads(exec::threads())
        for (int i = 0; i < N; ++i) assemble_row(ctx, i, out.S, out.D, out.Nadj);
    } else {
        for (int i = 0; i < N; ++i) assemble_row(ctx, i, out.S, out.D, out.Nadj);
    }

    if (V && !V->is_zero()) {
        out.V = V;
        auto ls = std::make_shared<pot::LsFactor>(V, lambda);
        out.ls = ls;
        const int M = ls->active_count();
        out.T = ls->solve_many(quad.points);
        Eigen::MatrixXcd G(N, M), Gn(N, M);
        const double cw = V->h * V->h;
        const auto& zc = ls->active_centers();
        const auto& zv = ls->active_values();
#pragma omp parallel for schedule(static) num_threads(exec::threads()) if (opts.use_openmp)
        for (int i = 0; i < N; ++i) {
            for (int a = 0; a < M; ++a) {
                const double vcw = zv[a] * cw;
                G(i, a) = sf::fundamental_solution(lambda, quad.points[i], zc[a]) * vcw;
                Gn(i, a) =
                    sf::grad_fundamental_solution(lambda, quad.points[i], zc[a]).dot(
                        quad.normals[i]) *
                    vcw;
            }
        }
        Eigen::MatrixXcd GT = G * out.T;    // u_sc(x_i, x_j) = -GT(i,j)
        Eigen::MatrixXcd GnT = Gn * out.T;  // d_nu_x u_sc(x_i, x_j) = -GnT(i,j)
        for (int j = 0; j < N; ++j) {
            const double wj = quad.weights[j];
            for (int i = 0; i < N; ++i) {
                out.S(i, j) -= GT(i, j) * wj;
                out.Nadj(i, j) -= GnT(i, j) * wj;
                out.D(i, j) -= GnT(j, i) * wj;  // swap symmetry of the total kernel
            }
        }
    }
    return out;
}

namespace {

void guard_distance(const KernelMatrixSet& k, Vec2 x) {
    double mind = 1e300;
    for (const auto& p : k.quad.points) mind = std::min(mind, (x - p).norm());
    const double floor = 2.0 * pi * k.quad.perimeter() / k.quad.N;
    if (mind <= floor)
        throw Error(ErrorCode::TooCloseToBoundary,
                    "evaluation point within " + std::to_string(floor) + " of the boundary");
}

// beta~ such that the u_sc contribution equals -sum_a Phi(x - z_a) beta~_a.
Eigen::VectorXcd grid_moment(const KernelMatrixSet& k, const Eigen::VectorXcd& fw,
                             bool double_layer) {
    const auto& ls = *k.ls;
    const int M = ls.active_count(), N = k.quad.N;
    const double cw = k.V->h * k.V->h;
    Eigen::VectorXcd beta = Eigen::VectorXcd::Zero(M);
    for (int a = 0; a < M; ++a) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < N; ++j) {
            if (double_layer)
                acc += sf::grad_fundamental_solution(k.lambda, k.quad.points[j],
                                                     ls.active_centers()[a])
                           .dot(k.quad.normals[j]) *
                       fw(j);
            else
                acc += sf::fundamental_solution(k.lambda, k.quad.points[j],
                                                ls.active_centers()[a]) *
                       fw(j);
        }
        beta(a) = ls.active_values()[a] * cw * acc;
    }
    Eigen::VectorXcd gb = ls.green_grid() * beta;
    for (int a = 0; a < M; ++a) beta(a) -= ls.active_values()[a] * cw * gb(a);
    return beta;
}

Complex eval_kernel_sum(const KernelMatrixSet& k, const BoundaryDensity& f, Vec2 x,
                        bool double_layer) {
    const int N = k.quad.N;
    Complex acc(0.0, 0.0);
    for (int j = 0; j < N; ++j) {
        Complex ker;
        if (double_layer)
            ker = sf::grad_fundamental_solution(k.lambda, k.quad.points[j], x)
                      .dot(k.quad.normals[j]);
        else
            ker = sf::fundamental_solution(k.lambda, x, k.quad.points[j]);
        acc += ker * f(j) * k.quad.weights[j];
    }
    if (k.has_potential()) {
        Eigen::VectorXcd fw(N);
        for (int j = 0; j < N; ++j) fw(j) = f(j) * k.quad.weights[j];
        const Eigen::VectorXcd bt = grid_moment(k, fw, double_layer);
        const auto& ls = *k.ls;
        for (int a = 0; a < ls.active_count(); ++a) {
            const double r = (x - ls.active_centers()[a]).norm();
            Complex ker = (r < 1e-12)
                              ? ls.self_cell_weight() / (k.V->h * k.V->h)
                              : sf::fundamental_solution(k.lambda, x, ls.active_centers()[a]);
            acc -= ker * bt(a);
        }
    }
    return acc;
}

}  // namespace

Complex eval_single(const KernelMatrixSet& kernels, const BoundaryDensity& f, Vec2 x) {
    guard_distance(kernels, x);
    return eval_kernel_sum(kernels, f, x, false);
}

Complex eval_double(const KernelMatrixSet& kernels, const BoundaryDensity& f, Vec2 x) {
    guard_distance(kernels, x);
    return eval_kernel_sum(kernels, f, x, true);
}

BoundaryDensity boundary_traces(const KernelMatrixSet& kernels, const BoundaryDensity& f,
                                Side side, TraceKind which) {
    if (f.size() != kernels.size())
        throw Error(ErrorCode::DomainError, "density length does not match quadrature");
    if (which == TraceKind::single_dnu) {
        // d_nu u_jpm = N f -/+ f/2 (outer -, inner +)
        const double sgn = (side == Side::inner) ? +0.5 : -0.5;
        return kernels.Nadj * f + sgn * f;
    }
    const double sgn = (side == Side::outer) ? +0.5 : -0.5;
    return kernels.D * f + sgn * f;
}

Complex PotentialEvaluator::operator()(Vec2 x) const {
    double mind = 1e300;
    for (const auto& p : quad.points) mind = std::min(mind, (x - p).norm());
    if (mind <= guard)
        throw Error(ErrorCode::TooCloseToBoundary, "evaluator point too close to boundary");
    Complex acc(0.0, 0.0);
    for (int j = 0; j < quad.N; ++j) {
        Complex ker;
        if (double_layer)
            ker = sf::grad_fundamental_solution(lambda, quad.points[j], x).dot(quad.normals[j]);
        else
            ker = sf::fundamental_solution(lambda, x, quad.points[j]);
        acc += ker * density(j) * quad.weights[j];
    }
    if (ls) {
        for (int a = 0; a < ls->active_count(); ++a) {
            const double r = (x - ls->active_centers()[a]).norm();
            Complex ker = (r < 1e-12)
                              ? ls->self_cell_weight() / (ls->grid().h * ls->grid().h)
                              : sf::fundamental_solution(lambda, x, ls->active_centers()[a]);
            acc -= ker * grid_moment(a);
        }
    }
    return acc;
}

PotentialEvaluator make_evaluator(const KernelMatrixSet& kernels, const BoundaryDensity& f,
                                  bool double_layer, int n_eval) {
    const int N = kernels.quad.N;
    PotentialEvaluator ev;
    ev.lambda = kernels.lambda;
    ev.double_layer = double_layer;
    // spectral upsampling of the density
    n_eval = std::max(n_eval, N);
    while (n_eval % N != 0) ++n_eval;  // node set contains the original one
    ev.quad = geom::quadrature(kernels.quad.curve, n_eval);
    std::vector<Complex> hat(N);
    for (int m = 0; m < N; ++m) {
        Complex a(0, 0);
        for (int j = 0; j < N; ++j) a += f(j) * std::exp(Complex(0, -2.0 * pi * m * j / N));
        hat[m] = a / double(N);
    }
    ev.density.resize(n_eval);
    for (int j = 0; j < n_eval; ++j) {
        Complex a(0, 0);
        for (int m = 0; m < N; ++m) {
            int mm = (m <= N / 2) ? m : m - N;
            double scale = (std::abs(mm) == N / 2) ? 0.5 : 1.0;
            // split Nyquist across +-N/2
            a += scale * hat[m] *
                 (std::exp(Complex(0, 2.0 * pi * mm * j / double(n_eval))) +
                  (std::abs(mm) == N / 2
                       ? std::exp(Complex(0, -2.0 * pi * mm * j / double(n_eval)))
                       : Complex(0, 0)));
        }
        ev.density(j) = a;
    }
    if (kernels.has_potential()) {
        ev.ls = kernels.ls;
        Eigen::VectorXcd fw(N);
        for (int j = 0; j < N; ++j) fw(j) = f(j) * kernels.quad.weights[j];
        ev.grid_moment = grid_moment(kernels, fw, double_layer);
    }
    ev.guard = 5.0 * ev.quad.perimeter() / n_eval;
    return ev;
}

}  // namespace nev::layer

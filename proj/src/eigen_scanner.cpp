#include "nev/eigen_scanner.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>

namespace nev::scan {

namespace {

Eigen::VectorXd singular_values(const layer::KernelMatrixSet& k) {
    const int N = k.size();
    Eigen::MatrixXcd A = k.D + 0.5 * Eigen::MatrixXcd::Identity(N, N);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues();
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

}  // namespace

double sigma_min(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
                 double lambda, int N) {
    auto quad = geom::quadrature(curve, N);
    auto kms = layer::assemble(lambda, quad, std::move(V));
    const Eigen::VectorXd sv = singular_values(kms);
    return sv(sv.size() - 1);
}

ScanReport scan(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
                double lmin, double lmax, int steps, int N, const ScanConfig& cfg,
                bool refine_brackets) {
    if (!(lmin >= 0.5)) throw Error(ErrorCode::DomainError, "lambda_min must be >= 0.5");
    if (!(lmax > lmin)) throw Error(ErrorCode::DomainError, "lambda_max must exceed lambda_min");
    if (steps < 16) throw Error(ErrorCode::DomainError, "steps must be >= 16");

    ScanReport rep;
    const int n = steps + 1;
    rep.lambdas.resize(n);
    rep.sigmas.resize(n);
    for (int i = 0; i < n; ++i) rep.lambdas[i] = lmin + (lmax - lmin) * i / steps;

    const auto quad = geom::quadrature(curve, N);
#pragma omp parallel for schedule(dynamic) num_threads(exec::inner_threads())
    for (int i = 0; i < n; ++i) {
        auto kms = layer::assemble(rep.lambdas[i], quad, V);
        const Eigen::VectorXd sv = singular_values(kms);
        rep.sigmas[i] = sv(sv.size() - 1);
    }

    rep.median_sigma = median(rep.sigmas);
    rep.eps_eig = cfg.eps_scale * rep.median_sigma;

    for (int i = 1; i + 1 < n; ++i) {
        if (rep.sigmas[i] <= rep.sigmas[i - 1] && rep.sigmas[i] <= rep.sigmas[i + 1] &&
            rep.sigmas[i] < cfg.dip_fraction * rep.median_sigma) {
            Bracket b;
            b.lo = rep.lambdas[i - 1];
            b.hi = rep.lambdas[i + 1];
            b.lambda_at_min = rep.lambdas[i];
            b.sigma_at_min = rep.sigmas[i];
            rep.brackets.push_back(b);
        }
    }

    if (refine_brackets) {
        for (const auto& b : rep.brackets) {
            const double lam = refine(curve, V, b, N, cfg, rep.eps_eig);
            auto kms = layer::assemble(lam, quad, V);
            const Eigen::VectorXd sv = singular_values(kms);
            int mult = 0;
            for (int q = 0; q < sv.size(); ++q)
                if (sv(q) < cfg.mult_factor * rep.eps_eig) ++mult;
            rep.eigenvalues.push_back({lam, std::max(1, mult)});
        }
    }
    return rep;
}

double refine(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
              const Bracket& bracket, int N, const ScanConfig& cfg, double eps_eig) {
    if (eps_eig <= 0.0) {
        // local threshold from coarse samples across a widened bracket
        const double w = bracket.hi - bracket.lo;
        std::vector<double> probe;
        for (int i = 0; i < 9; ++i) {
            const double lam = std::max(0.5, bracket.lo - w + (2.0 * w + w) * i / 8.0);
            probe.push_back(sigma_min(curve, V, lam, N));
        }
        eps_eig = cfg.eps_scale * median(probe);
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = bracket.lo, b = bracket.hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sigma_min(curve, V, x1, N), f2 = sigma_min(curve, V, x2, N);
    while (b - a > cfg.golden_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sigma_min(curve, V, x1, N);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sigma_min(curve, V, x2, N);
        }
    }
    const double lam = 0.5 * (a + b);
    const double s = sigma_min(curve, V, lam, N);
    if (!(s < eps_eig))
        throw Error(ErrorCode::LostBracket,
                    "sigma_min " + std::to_string(s) + " did not drop below " +
                        std::to_string(eps_eig) + " inside the bracket");
    return lam;
}

double EigenPair::eval_interior(int which, Vec2 x) const {
    return evaluators[which](x).real();
}

double volume_inner_product(const layer::PotentialEvaluator& a,
                            const layer::PotentialEvaluator& b,
                            const std::vector<double>& trace_a,
                            const std::vector<double>& trace_b,
                            const geom::SurfaceQuadrature& quad) {
    const geom::BoundaryCurve& curve = quad.curve;
    const Vec2 c = curve.centroid();
    const int Ns = quad.N;

    // zone 1: tensor Gauss-Legendre x trapezoid on r in [0, r0]
    const double r0 = 0.85;
    const int nr = 28;
    std::vector<double> rn, rw;
    geom::gauss_legendre(nr, 0.0, r0, rn, rw);

    // zone 2: Chebyshev-basis fit through safe samples plus the boundary
    // trace, integrated over [r0, 1]
    const int nfit = 10;
    std::vector<double> fn, fw;
    geom::gauss_legendre(nfit, 0.55, r0, fn, fw);
    const int nz2 = 12;
    std::vector<double> zn, zw;
    geom::gauss_legendre(nz2, r0, 1.0, zn, zw);

    std::vector<double> acc(Ns, 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(exec::threads())
    for (int j = 0; j < Ns; ++j) {
        const double s = quad.s[j];
        const Vec2 g = quad.points[j];
        const double jac = (g - c).cross(quad.tangents[j]);
        auto at = [&](double r) { return Vec2{c.x + r * (g.x - c.x), c.y + r * (g.y - c.y)}; };
        double part = 0.0;
        for (int q = 0; q < nr; ++q)
            part += rw[q] * rn[q] * (a(at(rn[q])).real() * b(at(rn[q])).real());

        // radial slices of both functions on [0.55, 1]: samples + trace
        auto chebfit = [&](const layer::PotentialEvaluator& ev, double bval,
                           std::vector<double>& coef) {
            const int np = nfit + 1;
            Eigen::MatrixXd Vm(np, np);
            Eigen::VectorXd rhs(np);
            auto tmap = [&](double r) { return 2.0 * (r - 0.55) / (1.0 - 0.55) - 1.0; };
            for (int p = 0; p < np; ++p) {
                const double r = (p < nfit) ? fn[p] : 1.0;
                const double t = tmap(r);
                double tm2 = 1.0, tm1 = t;
                for (int m = 0; m < np; ++m) {
                    if (m == 0) {
                        Vm(p, m) = 1.0;
                    } else if (m == 1) {
                        Vm(p, m) = t;
                    } else {
                        const double tm = 2.0 * t * tm1 - tm2;
                        Vm(p, m) = tm;
                        tm2 = tm1;
                        tm1 = tm;
                    }
                }
                rhs(p) = (p < nfit) ? ev(at(r)).real() : bval;
            }
            Eigen::VectorXd ce = Vm.partialPivLu().solve(rhs);
            coef.assign(ce.data(), ce.data() + np);
        };
        std::vector<double> ca, cb;
        chebfit(a, trace_a[j], ca);
        chebfit(b, trace_b[j], cb);
        auto cheb_eval = [&](const std::vector<double>& co, double r) {
            const double t = 2.0 * (r - 0.55) / (1.0 - 0.55) - 1.0;
            double t0 = 1.0, t1 = t, v = co[0] + (co.size() > 1 ? co[1] * t : 0.0);
            for (size_t m = 2; m < co.size(); ++m) {
                const double tn = 2.0 * t * t1 - t0;
                v += co[m] * tn;
                t0 = t1;
                t1 = tn;
            }
            return v;
        };
        for (int q = 0; q < nz2; ++q)
            part += zw[q] * zn[q] * cheb_eval(ca, zn[q]) * cheb_eval(cb, zn[q]);
        acc[j] = part * jac * (2.0 * pi / Ns);
    }
    return std::accumulate(acc.begin(), acc.end(), 0.0);
}

EigenPair eigenpair(const geom::BoundaryCurve& curve,
                    std::shared_ptr<const pot::PotentialGrid> V, double lambda_k, int N,
                    const ScanConfig& cfg, double eps_eig) {
    auto quad = geom::quadrature(curve, N);
    auto kms = std::make_shared<layer::KernelMatrixSet>(layer::assemble(lambda_k, quad, V));
    Eigen::MatrixXcd A = kms->D + 0.5 * Eigen::MatrixXcd::Identity(N, N);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();

    if (eps_eig <= 0.0) {
        std::vector<double> probe;
        for (int i = 0; i < 9; ++i)
            probe.push_back(sigma_min(curve, V, std::max(0.5, lambda_k - 0.4 + 0.1 * i), N));
        eps_eig = cfg.eps_scale * median(probe);
    }
    if (!(sv(sv.size() - 1) < eps_eig))
        throw Error(ErrorCode::NotAnEigenvalue,
                    "sigma_min " + std::to_string(sv(sv.size() - 1)) + " >= eps_eig " +
                        std::to_string(eps_eig) + " at lambda " + std::to_string(lambda_k));
    int mult = 0;
    for (int q = 0; q < sv.size(); ++q)
        if (sv(q) < cfg.mult_factor * eps_eig) ++mult;
    mult = std::max(1, mult);

    EigenPair pair;
    pair.lambda = lambda_k;
    pair.multiplicity = mult;
    pair.kernels = kms;

    std::vector<Eigen::VectorXd> psis;
    for (int i = 0; i < mult; ++i) {
        Eigen::VectorXcd psi = svd.matrixV().col(N - 1 - i);
        // global phase rotating psi onto the real axis: minimize ||Im(e^{it} psi)||
        double saa = 0.0, sbb = 0.0, sab = 0.0;
        for (int j = 0; j < N; ++j) {
            saa += psi(j).real() * psi(j).real();
            sbb += psi(j).imag() * psi(j).imag();
            sab += psi(j).real() * psi(j).imag();
        }
        // minimum of ||Im(e^{it} psi)||^2 = A + sab sin 2t + (sbb-saa)/2 cos 2t
        const double theta = 0.5 * std::atan2(-2.0 * sab, saa - sbb);
        Eigen::VectorXcd rot = std::exp(Complex(0.0, theta)) * psi;
        double res2 = 0.0;
        for (int j = 0; j < N; ++j) res2 += rot(j).imag() * rot(j).imag();
        Eigen::VectorXcd alt = std::exp(Complex(0.0, theta + 0.5 * pi)) * psi;
        double alt2 = 0.0;
        for (int j = 0; j < N; ++j) alt2 += alt(j).imag() * alt(j).imag();
        if (alt2 < res2) {
            rot = alt;
            res2 = alt2;
        }
        pair.imag_residue.push_back(std::sqrt(res2));
        psis.push_back(rot.real());
    }

    // interior representation u = D psi, upsampled density
    const int n_eval = std::max(cfg.n_eval_factor * N, 512);
    auto build_eval = [&](const Eigen::VectorXd& psi) {
        Eigen::VectorXcd cpsi = psi.cast<Complex>();
        return layer::make_evaluator(*kms, cpsi, true, n_eval);
    };
    std::vector<layer::PotentialEvaluator> evs;
    std::vector<std::vector<double>> traces;
    for (int i = 0; i < mult; ++i) {
        evs.push_back(build_eval(psis[i]));
        std::vector<double> tr(N);
        for (int j = 0; j < N; ++j) tr[j] = -psis[i](j);  // u_- = -psi
        traces.push_back(tr);
    }

    // Gram matrix in L2(Omega), then Loewdin orthonormalization
    Eigen::MatrixXd G(mult, mult);
    for (int i = 0; i < mult; ++i)
        for (int j = i; j < mult; ++j) {
            G(i, j) = volume_inner_product(evs[i], evs[j], traces[i], traces[j], quad);
            G(j, i) = G(i, j);
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    if (!(es.eigenvalues().minCoeff() > 0.0))
        throw Error(ErrorCode::NumericFailure, "eigenfunction Gram matrix not positive");
    Eigen::MatrixXd W = es.eigenvectors() *
                        es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();  // G^{-1/2}

    std::vector<Eigen::VectorXd> on_psis(mult, Eigen::VectorXd::Zero(N));
    for (int i = 0; i < mult; ++i)
        for (int j = 0; j < mult; ++j) on_psis[i] += W(j, i) * psis[j];

    // sign convention: boundary trace at node 0 (fallback: largest-|trace| node)
    pair.traces.clear();
    pair.evaluators.clear();
    for (int i = 0; i < mult; ++i) {
        Eigen::VectorXd& psi = on_psis[i];
        int node = 0;
        double mx = 0.0;
        for (int j = 0; j < N; ++j) mx = std::max(mx, std::abs(psi(j)));
        if (std::abs(psi(0)) < 1e-8 * mx) {
            for (int j = 0; j < N; ++j)
                if (std::abs(psi(j)) == mx) {
                    node = j;
                    break;
                }
        }
        pair.sign_node = node;
        if (-psi(node) < 0.0) psi = -psi;  // trace = -psi must be >= 0 there
        pair.evaluators.push_back(build_eval(psi));
        std::vector<double> tr(N);
        for (int j = 0; j < N; ++j) tr[j] = -psi(j);
        pair.traces.push_back(tr);
        double nc = 0.0;
        for (int j = 0; j < mult; ++j) nc += W(j, i) * W(j, i);
        pair.norm_constants.push_back(std::sqrt(nc));
    }
    return pair;
}

}  // namespace nev::scan

#include "nev/shape_derivative.hpp"

namespace nev::shape {

namespace {

std::vector<double> indicator_values(const scan::EigenPair& pair,
                                     const geom::SurfaceQuadrature& quad) {
    const auto& trace = pair.traces[0];
    const auto grad = geom::tangential_gradient(quad, trace);
    std::vector<double> b(quad.N);
    for (int j = 0; j < quad.N; ++j)
        b[j] = grad[j].dot(grad[j]) - pair.lambda * trace[j] * trace[j];
    return b;
}

}  // namespace

DerivativeReport eigenvalue_derivative(const scan::EigenPair& pair,
                                       const geom::DeformationField& field,
                                       const geom::SurfaceQuadrature& quad) {
    if (pair.multiplicity != 1)
        throw Error(ErrorCode::MultipleEigenvalue,
                    "eigenvalue derivative requires a simple eigenvalue");
    DerivativeReport rep;
    rep.indicator = indicator_values(pair, quad);
    rep.sigma = field.normal_component(quad);
    rep.lambda_dot = 0.0;
    for (int j = 0; j < quad.N; ++j)
        rep.lambda_dot += quad.weights[j] * rep.sigma[j] * rep.indicator[j];
    return rep;
}

IndicatorReport boundary_indicator(const scan::EigenPair& pair,
                                   const geom::SurfaceQuadrature& quad) {
    if (pair.multiplicity != 1)
        throw Error(ErrorCode::MultipleEigenvalue, "indicator requires a simple eigenvalue");
    IndicatorReport rep;
    rep.values = indicator_values(pair, quad);
    rep.argmax = 0;
    for (int j = 1; j < quad.N; ++j)
        if (rep.values[j] > rep.values[rep.argmax]) rep.argmax = j;
    // longest circular run of nonnegative values
    const int N = quad.N;
    int best_len = 0, best_start = 0, run = 0, start = 0;
    for (int j = 0; j < 2 * N; ++j) {
        if (rep.values[j % N] >= 0.0) {
            if (run == 0) start = j;
            ++run;
            if (run > best_len && run <= N) {
                best_len = run;
                best_start = start;
            }
        } else {
            run = 0;
        }
    }
    rep.nonneg_begin = best_start % N;
    rep.nonneg_len = std::min(best_len, N);
    return rep;
}

double track_eigenvalue(const geom::BoundaryCurve& deformed,
                        std::shared_ptr<const pot::PotentialGrid> V, double lambda_ref,
                        double window, int N, const scan::ScanConfig& cfg) {
    const double lo = std::max(0.5, lambda_ref - window);
    const double hi = lambda_ref + window;
    const int steps = std::max(24, static_cast<int>(window / 0.01));
    auto rep = scan::scan(deformed, V, lo, hi, steps, N, cfg, true);
    if (rep.eigenvalues.empty())
        throw Error(ErrorCode::LostBracket, "eigenvalue branch lost during tracking");
    double best = rep.eigenvalues[0].lambda;
    for (const auto& e : rep.eigenvalues)
        if (std::abs(e.lambda - lambda_ref) < std::abs(best - lambda_ref)) best = e.lambda;
    return best;
}

FdCheck finite_difference_check(const geom::BoundaryCurve& curve,
                                std::shared_ptr<const pot::PotentialGrid> V, double lambda_k,
                                const geom::DeformationField& field, double t, int N,
                                const scan::ScanConfig& cfg) {
    if (t == 0.0) throw Error(ErrorCode::DomainError, "degenerate step t = 0");
    auto pair = scan::eigenpair(curve, V, lambda_k, N, cfg);
    auto quad = geom::quadrature(curve, N);
    const auto rep = eigenvalue_derivative(pair, field, quad);

    const double window = std::max(0.5, 10.0 * std::abs(t) * std::abs(rep.lambda_dot));
    const auto plus = geom::deform(curve, field, t);
    const auto minus = geom::deform(curve, field, -t);

    double lam_p = 0.0, lam_m = 0.0;
    std::exception_ptr err;
#pragma omp parallel sections num_threads(exec::threads() > 1 ? 2 : 1)
    {
#pragma omp section
        {
            try {
                lam_p = track_eigenvalue(plus, V, lambda_k, window, N, cfg);
            } catch (...) {
                err = std::current_exception();
            }
        }
#pragma omp section
        {
            try {
                lam_m = track_eigenvalue(minus, V, lambda_k, window, N, cfg);
            } catch (...) {
                err = std::current_exception();
            }
        }
    }
    if (err) std::rethrow_exception(err);

    FdCheck out;
    out.lambda_dot_formula = rep.lambda_dot;
    out.lambda_plus = lam_p;
    out.lambda_minus = lam_m;
    out.lambda_dot_fd = (lam_p - lam_m) / (2.0 * t);
    out.discrepancy = std::abs(out.lambda_dot_formula - out.lambda_dot_fd);
    return out;
}

}  // namespace nev::shape

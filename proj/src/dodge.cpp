#include "nev/dodge.hpp"

#include <algorithm>

namespace nev::dodge {

namespace {

double uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int even_at_least(double x) {
    int n = static_cast<int>(std::ceil(x));
    return n + (n % 2);
}

/// Trig-poly coefficients of s -> bump(s - center)^p * base(s) by sampling.
void product_coeffs(const std::function<Vec2(double)>& f, int order, std::vector<Complex>& fx,
                    std::vector<Complex>& fy) {
    const int Nf = 4 * (order + 1);
    fx.assign(2 * order + 1, Complex(0, 0));
    fy.assign(2 * order + 1, Complex(0, 0));
    std::vector<Vec2> vals(Nf);
    for (int q = 0; q < Nf; ++q) vals[q] = f(2.0 * pi * q / Nf);
    for (int m = -order; m <= order; ++m) {
        Complex ax(0, 0), ay(0, 0);
        for (int q = 0; q < Nf; ++q) {
            const Complex ph = std::exp(Complex(0, -2.0 * pi * m * q / Nf));
            ax += vals[q].x * ph;
            ay += vals[q].y * ph;
        }
        fx[m + order] = ax / double(Nf);
        fy[m + order] = ay / double(Nf);
    }
}

void trim_field(std::vector<Complex>& fx, std::vector<Complex>& fy) {
    const int K = (static_cast<int>(fx.size()) - 1) / 2;
    double mx = 0.0;
    for (const auto& c : fx) mx = std::max(mx, std::abs(c));
    for (const auto& c : fy) mx = std::max(mx, std::abs(c));
    int keep = 0;
    for (int m = 1; m <= K; ++m)
        if (std::abs(fx[K + m]) > 1e-13 * mx || std::abs(fx[K - m]) > 1e-13 * mx ||
            std::abs(fy[K + m]) > 1e-13 * mx || std::abs(fy[K - m]) > 1e-13 * mx)
            keep = m;
    if (keep == K) return;
    std::vector<Complex> nx(fx.begin() + (K - keep), fx.begin() + (K + keep + 1));
    std::vector<Complex> ny(fy.begin() + (K - keep), fy.begin() + (K + keep + 1));
    fx.swap(nx);
    fy.swap(ny);
}

geom::DeformationField base_field(const DodgePlan& plan,
                                  const std::shared_ptr<const pot::PotentialGrid>& V) {
    geom::DeformationField f;
    f.sigma0 = plan.sigma0;
    f.sigma1 = plan.sigma1;
    if (V && !V->is_zero()) {
        f.clearance_box = V->support_box();
        f.r_margin = plan.v_margin;
    }
    return f;
}

}  // namespace

void DodgePlan::validate() const {
    if (!(delta > 0.0)) throw Error(ErrorCode::DomainError, "delta must be positive");
    if (!(sigma1 > sigma0)) throw Error(ErrorCode::DomainError, "frozen arc must be nonempty");
    if (!(target >= 0.5)) throw Error(ErrorCode::DomainError, "target must be >= 0.5");
}

Classification classify(const geom::BoundaryCurve& curve,
                        std::shared_ptr<const pot::PotentialGrid> V, double target, double tol,
                        int N, const scan::ScanConfig& cfg) {
    if (!(target >= 0.5)) throw Error(ErrorCode::DomainError, "target must be >= 0.5");
    const double lo = std::max(0.5, target - tol), hi = target + tol;
    const int steps = std::max(32, static_cast<int>((hi - lo) / 0.005));
    auto rep = scan::scan(curve, V, lo, hi, steps, N, cfg, true);
    Classification cls;
    if (rep.eigenvalues.empty()) {
        cls.kind = ClassKind::NotEigen;
        return cls;
    }
    const auto* nearest = &rep.eigenvalues[0];
    for (const auto& e : rep.eigenvalues)
        if (std::abs(e.lambda - target) < std::abs(nearest->lambda - target)) nearest = &e;
    cls.lambda_k = nearest->lambda;
    cls.multiplicity = nearest->multiplicity;
    if (nearest->multiplicity > 1) {
        cls.kind = ClassKind::Multiple;
    } else {
        cls.kind = ClassKind::Simple;
        cls.pair = scan::eigenpair(curve, V, nearest->lambda, N, cfg, rep.eps_eig);
    }
    return cls;
}

geom::DeformationField plan_simple(const scan::EigenPair& pair, const DodgePlan& plan,
                                   const geom::SurfaceQuadrature& quad) {
    if (pair.multiplicity != 1)
        throw Error(ErrorCode::MultipleEigenvalue, "plan_simple needs a simple eigenvalue");
    geom::DeformationField probe = base_field(plan, pair.kernels ? pair.kernels->V : nullptr);
    const auto& trace = pair.traces[0];
    const auto grad = geom::tangential_gradient(quad, trace);
    std::vector<double> b(quad.N);
    for (int j = 0; j < quad.N; ++j)
        b[j] = grad[j].dot(grad[j]) - pair.lambda * trace[j] * trace[j];

    // desired sign of lambda_dot: push the eigenvalue away from the target
    const double diff = pair.lambda - plan.target;
    const int want = (std::abs(diff) < 1e-9) ? 0 : (diff > 0.0 ? +1 : -1);

    // candidate centers: admissible nodes (outside arc + transition)
    std::vector<int> cand;
    for (int j = 0; j < quad.N; ++j)
        if (probe.eta_arc(quad.s[j]) > 0.999) cand.push_back(j);
    if (cand.empty()) throw Error(ErrorCode::PlanFailure, "no admissible bump region");

    auto center_for = [&](int sign_pref) {
        int best = cand[0];
        for (int j : cand) {
            if (sign_pref >= 0 && b[j] > b[best]) best = j;
            if (sign_pref < 0 && b[j] < b[best]) best = j;
        }
        return best;
    };

    // widening loop: p controls the bump's angular width
    for (int p : {12, 6, 3, 1}) {
        for (int sign_try = 0; sign_try < 2; ++sign_try) {
            const int pref = (want != 0) ? (sign_try == 0 ? want : -want)
                                         : (sign_try == 0 ? +1 : -1);
            const int jc = center_for(pref);
            const double sc = quad.s[jc];
            geom::DeformationField f = probe;
            const geom::BoundaryCurve& curve = quad.curve;
            auto fun = [&](double s) {
                const double w = std::pow(0.5 * (1.0 + std::cos(s - sc)), p);
                const Vec2 d = curve.derivative(s);
                return Vec2{w * d.y, -w * d.x};  // outward unnormalized normal
            };
            const int order = curve.effective_order() + p + 1;
            product_coeffs(fun, order, f.fx, f.fy);
            trim_field(f.fx, f.fy);
            const double bound = f.c1_bound(curve);
            if (!(bound > 0.0)) continue;
            const double scale = 0.5 / bound;
            for (auto& c : f.fx) c *= scale;
            for (auto& c : f.fy) c *= scale;
            const auto rep = shape::eigenvalue_derivative(pair, f, quad);
            if (std::abs(rep.lambda_dot) < 1e-8) continue;
            if (want != 0 && sign_try == 0 && rep.lambda_dot * want < 0.0 && p > 1)
                continue;  // desired direction not achieved yet; widen / flip later
            return f;
        }
    }
    throw Error(ErrorCode::PlanFailure,
                "derivative numerically null for every candidate bump (indicator degenerate)");
}

geom::BoundaryCurve split_multiple(const geom::BoundaryCurve& curve,
                                   std::shared_ptr<const pot::PotentialGrid> V, double lambda_k,
                                   const DodgePlan& plan) {
    std::mt19937_64 rng(plan.seed);
    const int retries = 8;
    for (int attempt = 0; attempt < retries; ++attempt) {
        geom::DeformationField f = base_field(plan, V);
        const int modes = 4;
        f.fx.assign(2 * modes + 1, Complex(0, 0));
        f.fy.assign(2 * modes + 1, Complex(0, 0));
        const double bound = 0.5 / modes;
        for (int m = 0; m <= modes; ++m) {
            const double ax = bound * (2.0 * uniform(rng) - 1.0);
            const double bx = bound * (2.0 * uniform(rng) - 1.0);
            const double ay = bound * (2.0 * uniform(rng) - 1.0);
            const double by = bound * (2.0 * uniform(rng) - 1.0);
            if (m == 0) {
                f.fx[modes] = Complex(ax, 0.0);
                f.fy[modes] = Complex(ay, 0.0);
            } else {
                f.fx[modes + m] = 0.5 * Complex(ax, -bx);
                f.fx[modes - m] = 0.5 * Complex(ax, bx);
                f.fy[modes + m] = 0.5 * Complex(ay, -by);
                f.fy[modes - m] = 0.5 * Complex(ay, by);
            }
        }
        const double b = f.c1_bound(curve);
        if (b > 0.0) {
            const double scale = 0.4 / b;
            for (auto& c : f.fx) c *= scale;
            for (auto& c : f.fy) c *= scale;
        }
        const double t = plan.t_schedule[attempt % plan.t_schedule.size()];
        geom::BoundaryCurve cand;
        try {
            cand = geom::deform(curve, f, t);
        } catch (const Error&) {
            continue;
        }
        const double window = 0.4;
        const double lo = std::max(0.5, lambda_k - window), hi = lambda_k + window;
        auto rep = scan::scan(cand, V, lo, hi, std::max(48, int(2 * window / 0.005)), plan.N,
                              plan.scan_cfg, true);
        std::vector<double> simples;
        bool multiple_left = false;
        for (const auto& e : rep.eigenvalues) {
            if (e.multiplicity == 1)
                simples.push_back(e.lambda);
            else
                multiple_left = true;
        }
        if (multiple_left || simples.size() < 2) continue;
        std::sort(simples.begin(), simples.end());
        double min_gap = 1e300;
        for (size_t i = 1; i < simples.size(); ++i)
            min_gap = std::min(min_gap, simples[i] - simples[i - 1]);
        if (min_gap > 10.0 * rep.eps_eig) return cand;
    }
    throw Error(ErrorCode::SplitFailure, "random perturbations failed to split the eigenvalue");
}

DodgeResult dodge(const geom::BoundaryCurve& curve,
                  std::shared_ptr<const pot::PotentialGrid> V, const DodgePlan& plan) {
    plan.validate();
    DodgeResult res;
    geom::BoundaryCurve current = curve;
    const bool haveV = V && !V->is_zero();

    auto working_N = [&](const geom::BoundaryCurve& c) {
        return std::max(plan.N, even_at_least(4.0 * c.effective_order()));
    };
    if (haveV) {
        auto q0 = geom::quadrature(current, working_N(current));
        if (!pot::support_strictly_inside(*V, q0, plan.v_margin))
            throw Error(ErrorCode::DomainError,
                        "potential support not strictly inside the initial curve");
    }

    auto certify = [&](const geom::BoundaryCurve& c) {
        const int Nc = even_at_least(1.5 * working_N(c));
        const double lo = std::max(0.5, plan.target - 5.0 * plan.delta);
        const double hi = plan.target + 5.0 * plan.delta;
        auto rep = scan::scan(c, V, lo, hi, 60, Nc, plan.scan_cfg, true);
        double dist = 1e300;
        for (const auto& e : rep.eigenvalues)
            dist = std::min(dist, std::abs(e.lambda - plan.target));
        return std::make_tuple(rep, Nc, dist);
    };

    for (int iter = 0; iter < std::max(1, plan.max_iter); ++iter) {
        const int Nw = working_N(current);
        auto cls = classify(current, V, plan.target, 5.0 * plan.delta, Nw, plan.scan_cfg);
        const double dist0 =
            (cls.kind == ClassKind::NotEigen) ? 1e300 : std::abs(cls.lambda_k - plan.target);
        res.trajectory.push_back({iter, "classify", 0.0, cls.lambda_k, dist0});

        if (cls.kind == ClassKind::NotEigen || dist0 >= plan.delta) {
            auto [rep, Nc, dist] = certify(current);
            res.history.push_back("certify");
            if (dist >= plan.delta) {
                res.final_curve = current;
                res.final_distance = dist;
                res.certificate = rep;
                res.certificate_N = Nc;
                res.trajectory.push_back({iter, "certify", 0.0, plan.target, dist});
                return res;
            }
            res.history.push_back("certificate-rejected");
            continue;
        }

        if (cls.kind == ClassKind::Multiple) {
            res.history.push_back("split at " + std::to_string(cls.lambda_k));
            current = split_multiple(current, V, cls.lambda_k, plan);
            res.trajectory.push_back({iter, "split", 0.0, cls.lambda_k, dist0});
            continue;
        }

        // Simple: push the eigenvalue off the target along the schedule
        auto quad = geom::quadrature(current, Nw);
        auto field = plan_simple(*cls.pair, plan, quad);
        const auto drep = shape::eigenvalue_derivative(*cls.pair, field, quad);
        res.history.push_back("simple at " + std::to_string(cls.lambda_k) +
                              ", lambda_dot = " + std::to_string(drep.lambda_dot));

        const double bbound = field.c1_bound(current);
        geom::BoundaryCurve best_curve;
        double best_dist = dist0, best_t = 0.0, best_lam = cls.lambda_k;
        bool accepted = false;
        for (double t : plan.t_schedule) {
            if (std::abs(t) * bbound >= 0.9) break;
            geom::BoundaryCurve cand;
            try {
                cand = geom::deform(current, field, t);
            } catch (const Error&) {
                break;
            }
            if (haveV) {
                auto qc = geom::quadrature(cand, working_N(cand));
                if (!pot::support_strictly_inside(*V, qc, plan.v_margin)) break;
            }
            const double window = std::max(0.5, 3.0 * std::abs(t * drep.lambda_dot));
            double lam_t;
            try {
                lam_t = shape::track_eigenvalue(cand, V, cls.lambda_k, window,
                                                working_N(cand), plan.scan_cfg);
            } catch (const Error&) {
                break;
            }
            const double dist_t = std::abs(lam_t - plan.target);
            if (dist_t > best_dist) {
                best_dist = dist_t;
                best_curve = cand;
                best_t = t;
                best_lam = lam_t;
                accepted = true;
            }
            if (dist_t >= plan.delta) {
                // other eigenvalues must stay out of the delta-window
                auto repw = scan::scan(cand, V, std::max(0.5, plan.target - 5.0 * plan.delta),
                                       plan.target + 5.0 * plan.delta, 60, working_N(cand),
                                       plan.scan_cfg, true);
                double dmin = 1e300;
                for (const auto& e : repw.eigenvalues)
                    dmin = std::min(dmin, std::abs(e.lambda - plan.target));
                if (dmin >= plan.delta) break;  // accepted candidate is clean
            }
        }
        if (!accepted)
            throw Error(ErrorCode::PlanFailure,
                        "no schedule step increased the distance to the target");
        current = best_curve;
        res.trajectory.push_back({iter, "simple-step", best_t, best_lam, best_dist});
    }
    throw Error(ErrorCode::IterationBudgetExceeded,
                "dodge loop exceeded max_iter = " + std::to_string(plan.max_iter));
}

}  // namespace nev::dodge

#include "nev/special_functions.hpp"

#include <omp.h>

#include <algorithm>
#include <vector>

namespace nev {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonSimpleCurve: return "NonSimpleCurve";
        case ErrorCode::DegenerateParametrization: return "DegenerateParametrization";
        case ErrorCode::ResolutionTooLow: return "ResolutionTooLow";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::CoincidentPoints: return "CoincidentPoints";
        case ErrorCode::SolveSingular: return "SolveSingular";
        case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
        case ErrorCode::TooCloseToBoundary: return "TooCloseToBoundary";
        case ErrorCode::NearEigenvalue: return "NearEigenvalue";
        case ErrorCode::MultipleEigenvalue: return "MultipleEigenvalue";
        case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
        case ErrorCode::NotStarShaped: return "NotStarShaped";
        case ErrorCode::LostBracket: return "LostBracket";
        case ErrorCode::PlanFailure: return "PlanFailure";
        case ErrorCode::SplitFailure: return "SplitFailure";
        case ErrorCode::IterationBudgetExceeded: return "IterationBudgetExceeded";
        case ErrorCode::DeformationTooLarge: return "DeformationTooLarge";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NumericFailure: return "NumericFailure";
    }
    return "UnknownError";
}

namespace exec {
namespace {
int g_threads = 0;  // 0 = library default (hardware)
}
void set_threads(int n) {
    g_threads = n < 0 ? 0 : n;
    omp_set_max_active_levels(2);
}
int threads() {
    if (g_threads > 0) return g_threads;
    return omp_get_max_threads();
}
int inner_threads() {
    if (omp_in_parallel()) return std::max(1, threads() / 2);
    return threads();
}
}  // namespace exec

}  // namespace nev

namespace nev::sf {

namespace {

// Crossover between the power series (long double, cancellation-safe up to
// here) and the Hankel asymptotic expansion.
constexpr double kSeriesCut = 16.0;
constexpr int kAsymTerms = 18;

long double j0_series_ld(long double x) {
    long double q = x * x / 4.0L, s = 1.0L, t = 1.0L;
    for (int j = 1; j < 80; ++j) {
        t *= -q / (static_cast<long double>(j) * j);
        s += t;
        if (std::abs(t) < 1e-22L) break;
    }
    return s;
}

long double j1_series_ld(long double x) {
    long double q = x * x / 4.0L, s = 0.5L, t = 0.5L;
    for (int j = 1; j < 80; ++j) {
        t *= -q / (static_cast<long double>(j) * (j + 1));
        s += t;
        if (std::abs(t) < 1e-22L) break;
    }
    return x * s;
}

long double y0_series_ld(long double x) {
    long double q = x * x / 4.0L, t = 1.0L, h = 0.0L, acc = 0.0L;
    for (int j = 1; j < 80; ++j) {
        t *= q / (static_cast<long double>(j) * j);
        h += 1.0L / j;
        long double term = ((j % 2) ? h * t : -h * t);
        acc += term;
        if (std::abs(term) < 1e-22L) break;
    }
    const long double g = 0.577215664901532860606512090082402431L;
    return (2.0L / pi) * ((std::log(x / 2.0L) + g) * j0_series_ld(x) + acc);
}

long double y1_series_ld(long double x) {
    long double q = x * x / 4.0L, t = 1.0L, hj = 0.0L, hj1 = 1.0L, acc = 1.0L;
    for (int j = 1; j < 80; ++j) {
        t *= -q / (static_cast<long double>(j) * (j + 1));
        hj += 1.0L / j;
        hj1 += 1.0L / (j + 1);
        long double term = t * (hj + hj1);
        acc += term;
        if (std::abs(term) < 1e-22L * std::abs(acc)) break;
    }
    const long double g = 0.577215664901532860606512090082402431L;
    return (2.0L / pi) * (std::log(x / 2.0L) + g) * j1_series_ld(x) - 2.0L / (pi * x) -
           (x / (2.0L * pi)) * acc;
}

// Hankel asymptotic amplitude/phase series for order 0 (mu=0) and 1 (mu=4).
void asym_pq(double mu, double x, double& P, double& Q) {
    P = 1.0;
    Q = 0.0;
    double t = 1.0;
    int sp = -1, sq = 1;
    for (int k = 1; k <= kAsymTerms; ++k) {
        t *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * x * k);
        if (k % 2 == 1) {
            Q += sq * t;
            sq = -sq;
        } else {
            P += sp * t;
            sp = -sp;
        }
    }
}

void asym_jy(double mu, double phase_shift, double x, double& J, double& Y) {
    double P, Q;
    asym_pq(mu, x, P, Q);
    const double chi = x - phase_shift;
    const double c = std::sqrt(2.0 / (pi * x));
    const double cs = std::cos(chi), sn = std::sin(chi);
    J = c * (P * cs - Q * sn);
    Y = c * (P * sn + Q * cs);
}

void check_finite_nonneg(double x) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw Error(ErrorCode::DomainError, "argument must be finite and nonnegative");
}

}  // namespace

double bessel_j0(double x) {
    check_finite_nonneg(x);
    if (x <= kSeriesCut) return static_cast<double>(j0_series_ld(x));
    double J, Y;
    asym_jy(0.0, pi / 4.0, x, J, Y);
    return J;
}

double bessel_j1(double x) {
    check_finite_nonneg(x);
    if (x <= kSeriesCut) return static_cast<double>(j1_series_ld(x));
    double J, Y;
    asym_jy(4.0, 3.0 * pi / 4.0, x, J, Y);
    return J;
}

double bessel_y0(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Y0 requires x > 0");
    if (x <= kSeriesCut) return static_cast<double>(y0_series_ld(x));
    double J, Y;
    asym_jy(0.0, pi / 4.0, x, J, Y);
    return Y;
}

double bessel_y1(double x) {
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Y1 requires x > 0");
    if (x <= kSeriesCut) return static_cast<double>(y1_series_ld(x));
    double J, Y;
    asym_jy(4.0, 3.0 * pi / 4.0, x, J, Y);
    return Y;
}

double bessel_j(int m, double x) {
    if (m < 0) throw Error(ErrorCode::DomainError, "order must be >= 0");
    check_finite_nonneg(x);
    if (m == 0) return bessel_j0(x);
    if (m == 1) return bessel_j1(x);
    if (x == 0.0) return 0.0;
    if (x > static_cast<double>(m) + 2.0) {
        // upward recurrence, stable for x > m
        double jm1 = bessel_j0(x), j = bessel_j1(x);
        for (int n = 1; n < m; ++n) {
            double jn1 = (2.0 * n / x) * j - jm1;
            jm1 = j;
            j = jn1;
        }
        return j;
    }
    // Miller downward recurrence normalized against J0
    int top = m + 16 + static_cast<int>(x);
    double jp = 0.0, jc = 1e-300, out = 0.0, norm = 0.0;
    for (int n = top; n >= 0; --n) {
        double jm = (2.0 * (n + 1) / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (n == m) out = jc;
        if (n == 0) norm = jc;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            out *= 1e-250;
        }
    }
    return out * (bessel_j0(x) / norm);
}

double bessel_y(int m, double x) {
    if (m < 0) throw Error(ErrorCode::DomainError, "order must be >= 0");
    if (!(x > 0.0)) throw Error(ErrorCode::DomainError, "Ym requires x > 0");
    if (m == 0) return bessel_y0(x);
    if (m == 1) return bessel_y1(x);
    // upward recurrence is stable for Y
    double ym1 = bessel_y0(x), y = bessel_y1(x);
    for (int n = 1; n < m; ++n) {
        double yn1 = (2.0 * n / x) * y - ym1;
        ym1 = y;
        y = yn1;
    }
    return y;
}

Complex hankel1_0(double x) { return {bessel_j0(x), bessel_y0(x)}; }
Complex hankel1_1(double x) { return {bessel_j1(x), bessel_y1(x)}; }

double bessel_deriv_zero(int m, int k) {
    if (m < 0 || k < 1) throw Error(ErrorCode::DomainError, "need m >= 0, k >= 1");
    auto dj = [m](double x) {
        if (m == 0) return -bessel_j1(x);
        return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
    };
    // scan upward for k sign changes of J_m'
    double step = 0.05;
    double x0 = (m == 0) ? 0.5 : std::max(0.5, 0.7 * m);  // skip x=0 stationary point
    double f0 = dj(x0);
    int found = 0;
    for (int it = 0; it < 400000; ++it) {
        double x1 = x0 + step;
        double f1 = dj(x1);
        if ((f0 < 0.0 && f1 >= 0.0) || (f0 > 0.0 && f1 <= 0.0)) {
            ++found;
            if (found == k) {
                double a = x0, b = x1, fa = f0;
                while (b - a > 1e-12) {
                    double mid = 0.5 * (a + b), fm = dj(mid);
                    if ((fa <= 0.0) == (fm <= 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    throw Error(ErrorCode::NumericFailure, "bessel_deriv_zero bracket scan exhausted");
}

Complex fundamental_solution(double lambda, Vec2 x, Vec2 y) {
    const double r = (x - y).norm();
    if (!(r > 0.0)) throw Error(ErrorCode::CoincidentPoints, "x == y in fundamental solution");
    const double z = std::sqrt(lambda) * r;
    return Complex(0.0, 0.25) * hankel1_0(z);
}

CVec2 grad_fundamental_solution(double lambda, Vec2 x, Vec2 y) {
    const Vec2 d = x - y;
    const double r = d.norm();
    if (!(r > 0.0)) throw Error(ErrorCode::CoincidentPoints, "x == y in kernel gradient");
    const double k = std::sqrt(lambda);
    const Complex f = Complex(0.0, -0.25) * k * hankel1_1(k * r) / r;
    return {f * d.x, f * d.y};
}

}  // namespace nev::sf

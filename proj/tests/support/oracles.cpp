#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <stdexcept>

namespace oracle {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kGamma = 0.577215664901532860606512090082402431;
}  // namespace

double j0_series(double x) {
    double q = x * x / 4.0, s = 1.0, t = 1.0;
    for (int j = 1; j < 60; ++j) {
        t *= -q / (double(j) * j);
        s += t;
        if (std::abs(t) < 1e-18) break;
    }
    return s;
}

double j1_series(double x) {
    double q = x * x / 4.0, s = 0.5, t = 0.5;
    for (int j = 1; j < 60; ++j) {
        t *= -q / (double(j) * (j + 1));
        s += t;
        if (std::abs(t) < 1e-18) break;
    }
    return x * s;
}

double jm_series(int m, double x) {
    double t = 1.0;
    for (int i = 1; i <= m; ++i) t *= x / (2.0 * i);
    double s = t;
    const double q = x * x / 4.0;
    for (int j = 1; j < 80; ++j) {
        t *= -q / (double(j) * (j + m));
        s += t;
        if (std::abs(t) < 1e-18 * std::max(1.0, std::abs(s))) break;
    }
    return s;
}

double y0_series(double x) {
    double q = x * x / 4.0, t = 1.0, h = 0.0, acc = 0.0;
    for (int j = 1; j < 60; ++j) {
        t *= q / (double(j) * j);
        h += 1.0 / j;
        acc += ((j % 2) ? h * t : -h * t);
        if (h * t < 1e-18) break;
    }
    return (2.0 / kPi) * ((std::log(x / 2.0) + kGamma) * j0_series(x) + acc);
}

double y1_series(double x) {
    double q = x * x / 4.0, t = 1.0, hj = 0.0, hj1 = 1.0, acc = 1.0;
    for (int j = 1; j < 60; ++j) {
        t *= -q / (double(j) * (j + 1));
        hj += 1.0 / j;
        hj1 += 1.0 / (j + 1);
        acc += t * (hj + hj1);
        if (std::abs(t) * (hj + hj1) < 1e-18 * std::abs(acc)) break;
    }
    return (2.0 / kPi) * (std::log(x / 2.0) + kGamma) * j1_series(x) - 2.0 / (kPi * x) -
           (x / (2.0 * kPi)) * acc;
}

double jprime_zero(int m, int k) {
    auto dj = [m](double x) {
        if (m == 0) return -jm_series(1, x);
        return 0.5 * (jm_series(m - 1, x) - jm_series(m + 1, x));
    };
    double x0 = (m == 0) ? 0.5 : std::max(0.5, 0.7 * m), f0 = dj(x0);
    int found = 0;
    for (int it = 0; it < 200000; ++it) {
        const double x1 = x0 + 0.05, f1 = dj(x1);
        if ((f0 <= 0.0) != (f1 <= 0.0)) {
            if (++found == k) {
                double a = x0, b = x1, fa = f0;
                while (b - a > 1e-13) {
                    const double mid = 0.5 * (a + b), fm = dj(mid);
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
    throw std::runtime_error("jprime_zero: scan exhausted");
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, tol, depth);
}

double arclength(const std::function<double(double)>& speed, double a, double b, double tol) {
    return adaptive_simpson(speed, a, b, tol);
}

std::complex<double> laplace_double_layer(const std::vector<std::pair<double, double>>& pts,
                                          const std::vector<std::pair<double, double>>& normals,
                                          const std::vector<double>& weights,
                                          const std::vector<std::complex<double>>& f, double x0,
                                          double x1) {
    // dG/dnu(y) = (x - y).nu(y) / (2 pi |x - y|^2) for G = -(1/2pi) ln|x-y|
    std::complex<double> acc(0.0, 0.0);
    for (size_t j = 0; j < pts.size(); ++j) {
        const double dx = x0 - pts[j].first, dy = x1 - pts[j].second;
        const double r2 = dx * dx + dy * dy;
        const double ker = (dx * normals[j].first + dy * normals[j].second) / (2.0 * kPi * r2);
        acc += ker * f[j] * weights[j];
    }
    return acc;
}

std::vector<double> fd_disk_eigs_near(double shift, const std::function<double(double, double)>& V,
                                      int Nr, int Nt, int k) {
    using SpMat = Eigen::SparseMatrix<double>;
    const double dr = 1.0 / Nr, dt = 2.0 * kPi / Nt;
    const int n = Nr * Nt;
    auto idx = [&](int i, int j) { return i * Nt + ((j % Nt) + Nt) % Nt; };
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(n) * 5);
    for (int i = 0; i < Nr; ++i) {
        const double r = (i + 0.5) * dr;
        const double rp = r + 0.5 * dr, rm = r - 0.5 * dr;
        for (int j = 0; j < Nt; ++j) {
            double c = 2.0 / (r * r * dt * dt) + V(r, j * dt);
            if (i + 1 < Nr) {
                const double rnext = (i + 1.5) * dr;
                trip.emplace_back(idx(i, j), idx(i + 1, j), -rp / (dr * dr * std::sqrt(r * rnext)));
                c += rp / (r * dr * dr);
            }
            if (i > 0) {
                const double rprev = (i - 0.5) * dr;
                trip.emplace_back(idx(i, j), idx(i - 1, j), -rm / (dr * dr * std::sqrt(r * rprev)));
                c += rm / (r * dr * dr);
            }
            trip.emplace_back(idx(i, j), idx(i, j + 1), -1.0 / (r * r * dt * dt));
            trip.emplace_back(idx(i, j), idx(i, j - 1), -1.0 / (r * r * dt * dt));
            trip.emplace_back(idx(i, j), idx(i, j), c);
        }
    }
    SpMat A(n, n);
    A.setFromTriplets(trip.begin(), trip.end());
    SpMat S(n, n);
    S.setIdentity();
    SpMat As = A - shift * S;
    Eigen::SparseLU<SpMat> lu;
    lu.compute(As);
    if (lu.info() != Eigen::Success) throw std::runtime_error("fd oracle: factorization failed");

    // block shift-invert iteration with Rayleigh-Ritz extraction
    const int blk = k + 3;
    Eigen::MatrixXd Q(n, blk);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto rnd = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state >> 11) * 0x1.0p-53 - 0.5;
    };
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < blk; ++b) Q(i, b) = rnd();
    Eigen::VectorXd ritz_old = Eigen::VectorXd::Zero(blk);
    for (int it = 0; it < 300; ++it) {
        Eigen::MatrixXd Z(n, blk);
        for (int b = 0; b < blk; ++b) Z.col(b) = lu.solve(Q.col(b));
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
        Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, blk);
        Eigen::MatrixXd T = Q.transpose() * (A * Q);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (T + T.transpose()));
        Eigen::VectorXd ritz = es.eigenvalues();
        if (it > 12 && (ritz - ritz_old).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + shift)) {
            ritz_old = ritz;
            break;
        }
        ritz_old = ritz;
        Q = Q * es.eigenvectors();
    }
    std::vector<double> all(ritz_old.data(), ritz_old.data() + blk);
    std::sort(all.begin(), all.end(), [&](double a, double b) {
        return std::abs(a - shift) < std::abs(b - shift);
    });
    all.resize(std::min<size_t>(k, all.size()));
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace oracle

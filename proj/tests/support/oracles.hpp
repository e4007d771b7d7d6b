#ifndef NEV_TEST_ORACLES_HPP
#define NEV_TEST_ORACLES_HPP

// Independent reference implementations used as test oracles. These must not
// share code with the library paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

// Plain power-series evaluations (double precision, small arguments).
double j0_series(double x);
double j1_series(double x);
double jm_series(int m, double x);
double y0_series(double x);  // series plus log, x <= 10
double y1_series(double x);

// k-th positive zero of d/dx J_m(x), bisection on the series/std evaluator.
double jprime_zero(int m, int k);

// Adaptive Simpson quadrature to a requested absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 28);

// Arclength of a parametric curve by adaptive quadrature.
double arclength(const std::function<double(double)>& speed, double a, double b,
                 double tol = 1e-12);

// Laplace double-layer value at x for density given at curve nodes:
//   int dG/dnu(y) f(y) dS(y),  G = -(1/2 pi) ln |x - y|  (test-only mode).
std::complex<double> laplace_double_layer(const std::vector<std::pair<double, double>>& pts,
                                          const std::vector<std::pair<double, double>>& normals,
                                          const std::vector<double>& weights,
                                          const std::vector<std::complex<double>>& f, double x0,
                                          double x1);

// Neumann eigenvalues of -Laplace + V on the unit disk by a conservative
// polar-grid finite-difference scheme; returns the k eigenvalues nearest the
// shift (block shift-invert iteration).
std::vector<double> fd_disk_eigs_near(double shift, const std::function<double(double, double)>& V,
                                      int Nr, int Nt, int k);

}  // namespace oracle

#endif

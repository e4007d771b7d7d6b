#ifndef NEV_SPECIAL_FUNCTIONS_HPP
#define NEV_SPECIAL_FUNCTIONS_HPP

#include "nev/common.hpp"

namespace nev::sf {

// Cylinder functions of integer order, self-contained: power series below the
// crossover argument, Hankel asymptotic expansion above it.

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);  // throws DomainError for x <= 0
double bessel_y1(double x);

double bessel_j(int m, double x);
double bessel_y(int m, double x);

/// First-kind Hankel functions H_0^(1), H_1^(1) for x > 0.
Complex hankel1_0(double x);
Complex hankel1_1(double x);

/// k-th positive zero of J_m' (bracketing + bisection), accurate to 1e-10.
double bessel_deriv_zero(int m, int k);

/// Outgoing fundamental solution of the 2-D Helmholtz operator at energy
/// lambda: Phi(x - y) = (i/4) H_0^(1)(sqrt(lambda) |x - y|).
Complex fundamental_solution(double lambda, Vec2 x, Vec2 y);

/// Gradient in the first argument:
/// grad_x Phi = -(i k/4) H_1^(1)(k r) (x - y)/r,  k = sqrt(lambda).
CVec2 grad_fundamental_solution(double lambda, Vec2 x, Vec2 y);

}  // namespace nev::sf

#endif

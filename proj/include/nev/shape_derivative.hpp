#ifndef NEV_SHAPE_DERIVATIVE_HPP
#define NEV_SHAPE_DERIVATIVE_HPP

#include "nev/deformation.hpp"
#include "nev/eigen_scanner.hpp"

namespace nev::shape {

/// First-order sensitivity of a simple eigenvalue to the boundary
/// deformation h_t = id + t eta X:
///   lambda_dot = int_dOmega (|grad_tan u|^2 - lambda u^2) eta X . nu dS.
struct DerivativeReport {
    double lambda_dot = 0.0;
    std::vector<double> indicator;  // b_j = |grad_tan u|^2 - lambda u^2
    std::vector<double> sigma;      // (eta X . nu)_j
};

/// Throws MultipleEigenvalue when pair.multiplicity > 1.
DerivativeReport eigenvalue_derivative(const scan::EigenPair& pair,
                                       const geom::DeformationField& field,
                                       const geom::SurfaceQuadrature& quad);

/// Boundary indicator with its argmax node and the longest subarc where the
/// indicator is nonnegative (node index range, half-open in circular order).
struct IndicatorReport {
    std::vector<double> values;
    int argmax = 0;
    int nonneg_begin = 0;
    int nonneg_len = 0;
};
IndicatorReport boundary_indicator(const scan::EigenPair& pair,
                                   const geom::SurfaceQuadrature& quad);

struct FdCheck {
    double lambda_dot_formula = 0.0;
    double lambda_dot_fd = 0.0;
    double discrepancy = 0.0;
    double lambda_plus = 0.0, lambda_minus = 0.0;
};

/// Central finite-difference validation: the eigenvalue branch is re-scanned
/// on the curves deformed by +-t and matched to the nearest refined value.
/// The two deformed scans run in parallel internally.
FdCheck finite_difference_check(const geom::BoundaryCurve& curve,
                                std::shared_ptr<const pot::PotentialGrid> V, double lambda_k,
                                const geom::DeformationField& field, double t, int N,
                                const scan::ScanConfig& cfg = {});

/// Track the branch lambda(t): scan a window around the predicted location on
/// the deformed curve and return the nearest refined eigenvalue.
double track_eigenvalue(const geom::BoundaryCurve& deformed,
                        std::shared_ptr<const pot::PotentialGrid> V, double lambda_ref,
                        double window, int N, const scan::ScanConfig& cfg = {});

}  // namespace nev::shape

#endif

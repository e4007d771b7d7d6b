#ifndef NEV_EIGEN_SCANNER_HPP
#define NEV_EIGEN_SCANNER_HPP

#include "nev/neumann_solver.hpp"

namespace nev::scan {

/// Empirical detection thresholds, surfaced for tuning.
struct ScanConfig {
    double eps_scale = 1e-6;      // eps_eig = eps_scale * median sigma_min
    double dip_fraction = 0.25;   // grid minima below dip_fraction * median become brackets
    double mult_factor = 10.0;    // multiplicity: singular values below mult_factor * eps_eig
    double golden_tol = 1e-9;     // refinement tolerance in lambda
    int n_eval_factor = 4;        // density upsampling for interior evaluation
};

struct Bracket {
    double lo = 0.0, hi = 0.0;
    double lambda_at_min = 0.0;
    double sigma_at_min = 0.0;
};

struct RefinedEigenvalue {
    double lambda = 0.0;
    int multiplicity = 0;
};

struct ScanReport {
    std::vector<double> lambdas, sigmas;
    double median_sigma = 0.0;
    double eps_eig = 0.0;
    std::vector<Bracket> brackets;
    std::vector<RefinedEigenvalue> eigenvalues;
};

/// sigma_min of D + I/2 at one energy.
double sigma_min(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
                 double lambda, int N);

/// Sample sigma_min over [lmin, lmax], detect dips, optionally refine them.
/// Scan points run in parallel.
ScanReport scan(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
                double lmin, double lmax, int steps, int N, const ScanConfig& cfg = {},
                bool refine_brackets = true);

/// Golden-section polish of a bracket; throws LostBracket when sigma_min
/// fails to drop below eps_eig inside.
double refine(const geom::BoundaryCurve& curve, std::shared_ptr<const pot::PotentialGrid> V,
              const Bracket& bracket, int N, const ScanConfig& cfg = {},
              double eps_eig = -1.0);

/// Detected eigenvalue with traces and normalized interior eigenfunctions.
/// The interior representation is u = D psi with inner trace u_- = -psi.
class EigenPair {
public:
    double lambda = 0.0;
    int multiplicity = 0;
    std::vector<std::vector<double>> traces;  // u_- at nodes, per function
    std::vector<double> norm_constants;       // applied normalization factors
    std::vector<double> imag_residue;         // dropped imaginary residue per function
    int sign_node = 0;                        // node fixing the sign convention
    std::shared_ptr<const layer::KernelMatrixSet> kernels;
    std::vector<layer::PotentialEvaluator> evaluators;

    /// Normalized eigenfunction value inside the domain.
    double eval_interior(int which, Vec2 x) const;
};

/// Null-space extraction at a refined eigenvalue; throws NotAnEigenvalue.
EigenPair eigenpair(const geom::BoundaryCurve& curve,
                    std::shared_ptr<const pot::PotentialGrid> V, double lambda_k, int N,
                    const ScanConfig& cfg = {}, double eps_eig = -1.0);

/// Domain integral of the product of interior evaluators (trace-assisted
/// near the boundary). Used for eigenfunction normalization.
double volume_inner_product(const layer::PotentialEvaluator& a,
                            const layer::PotentialEvaluator& b,
                            const std::vector<double>& trace_a,
                            const std::vector<double>& trace_b,
                            const geom::SurfaceQuadrature& quad);

using geom::interior_quadrature;

}  // namespace nev::scan

#endif

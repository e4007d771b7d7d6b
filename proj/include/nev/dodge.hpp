#ifndef NEV_DODGE_HPP
#define NEV_DODGE_HPP

#include <random>

#include "nev/shape_derivative.hpp"

namespace nev::dodge {

struct DodgePlan {
    double target = 0.0;        // energy that must not be a Neumann eigenvalue
    double delta = 0.05;        // required final distance to the spectrum
    double sigma0 = 0.0, sigma1 = 0.0;  // frozen arc Sigma'
    double v_margin = 0.05;     // clearance radius around the potential box
    int max_iter = 12;
    std::vector<double> t_schedule{0.01, 0.02, 0.04, 0.08, 0.16};
    std::uint64_t seed = 1;
    int N = 256;                // working boundary resolution
    scan::ScanConfig scan_cfg{};

    void validate() const;
};

enum class ClassKind { NotEigen, Simple, Multiple };

struct Classification {
    ClassKind kind = ClassKind::NotEigen;
    double lambda_k = 0.0;      // nearest detected eigenvalue (if any)
    int multiplicity = 0;
    std::optional<scan::EigenPair> pair;  // for Simple
};

/// Scan [target - tol, target + tol] and classify the nearest eigenvalue.
Classification classify(const geom::BoundaryCurve& curve,
                        std::shared_ptr<const pot::PotentialGrid> V, double target, double tol,
                        int N, const scan::ScanConfig& cfg = {});

/// Outward bump field moving the eigenvalue away from the target; respects
/// the frozen arc and the potential clearance. Throws PlanFailure when the
/// derivative stays numerically null after widening.
geom::DeformationField plan_simple(const scan::EigenPair& pair, const DodgePlan& plan,
                                   const geom::SurfaceQuadrature& quad);

/// Random admissible perturbation splitting a multiple eigenvalue into
/// simple ones (seeded draws). Throws SplitFailure after the retry budget.
geom::BoundaryCurve split_multiple(const geom::BoundaryCurve& curve,
                                   std::shared_ptr<const pot::PotentialGrid> V, double lambda_k,
                                   const DodgePlan& plan);

struct TrajectoryPoint {
    int iteration = 0;
    std::string action;     // "classify", "simple-step", "split", "certify"
    double t = 0.0;
    double lambda_k = 0.0;  // tracked eigenvalue after the action
    double distance = 0.0;  // |lambda_k - target|
};

struct DodgeResult {
    geom::BoundaryCurve final_curve;
    std::vector<TrajectoryPoint> trajectory;
    double final_distance = 0.0;
    std::vector<std::string> history;
    scan::ScanReport certificate;     // fresh scan at 1.5x the working N
    int certificate_N = 0;
};

/// The three-case loop: classify, push a simple eigenvalue off the target,
/// split multiples, certify. Throws IterationBudgetExceeded and propagates
/// PlanFailure / SplitFailure.
DodgeResult dodge(const geom::BoundaryCurve& curve,
                  std::shared_ptr<const pot::PotentialGrid> V, const DodgePlan& plan);

}  // namespace nev::dodge

#endif

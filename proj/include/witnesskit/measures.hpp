#pragma once

// Hilbert-Schmidt distance to the separable set: closed forms for isotropic
// states and a conditional-gradient projection onto the convex hull of pure
// product states for arbitrary bipartite targets.

#include <span>
#include <vector>

#include "witnesskit/states.hpp"
#include "witnesskit/witness.hpp"

namespace witnesskit {

/// Default agreement tolerance between the measure and the maximal violation.
inline constexpr double kBntTol = 5e-4;

struct ProjectionConfig {
  double tol_gap = 1e-9;
  int max_outer_iters = 5000;
  bool away_steps = true;
  double prune_weight = 1e-12;
  SolverConfig inner;
};

struct MeasureResult {
  double distance = 0.0;
  ProductEnsemble nearest;
  double gap_certificate = 0.0;  // f(rho_t) - f* <= gap for f = ||rho - target||^2
  int iterations = 0;
  bool converged = false;
};

/// Thrown when the projection exhausts max_outer_iters; holds the last iterate.
class ProjectionError : public ConvergenceError {
 public:
  ProjectionError(const std::string& what, MeasureResult partial)
      : ConvergenceError(what, partial.distance, partial.iterations), partial_(std::move(partial)) {}
  const MeasureResult& partial() const noexcept { return partial_; }

 private:
  MeasureResult partial_;
};

double hs_distance(const DensityMatrix& r1, const DensityMatrix& r2);

/// sqrt(d^2-1)/d (alpha - 1/(d+1)). Throws DomainError for separable alpha.
double hs_measure_isotropic(const IsotropicParams& p);

/// Nearest separable state by conditional gradient.
///
/// The iterate is kept as a ProductEnsemble. Each step asks
/// min_over_separable for the product vertex minimizing <v, 2(rho_t - target)>
/// and adds it to the active set. With cfg.away_steps the weights over the
/// whole active set are then re-optimized (Wolfe minor cycles: affine
/// minimizers clipped back into the simplex, dropping atoms that hit zero);
/// without it a single exact line search toward the vertex is taken. The run
/// stops once the Frank-Wolfe gap drops below cfg.tol_gap; the final gap is
/// reported as gap_certificate. Throws ProjectionError if the budget runs out.
MeasureResult nearest_separable(const DensityMatrix& target, const ProjectionConfig& cfg);

/// min over separable rho of <rho, A> minus <target, A>.
double gbi_violation(const DensityMatrix& target, const HermitianOperator& witness_op, const SolverConfig& cfg);

struct BntReport {
  double d_value;
  double b_value;
  double discrepancy;
  MeasureResult measure;
};

/// Measure from nearest_separable; violation from the witness built on the
/// numeric nearest state. Throws DomainError when the target is (numerically)
/// separable, since the witness is then undefined.
BntReport bnt_check(const DensityMatrix& target, const ProjectionConfig& cfg);

struct TrendRow {
  int d;
  double alpha;
  double threshold;  // 1/(d+1)
  double distance;   // closed-form measure, 0 in the separable range
};

/// Closed-form measure tabulated for d = 2..d_max over `alphas`.
std::vector<TrendRow> infinite_d_trend(std::span<const double> alphas, int d_max);

}  // namespace witnesskit

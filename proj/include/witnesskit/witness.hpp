#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "witnesskit/linalg.hpp"
#include "witnesskit/states.hpp"

namespace witnesskit {

/// Sign decisions on witness expectations use this absolute tolerance.
inline constexpr double kWitnessTol = 1e-7;

/// Multistart alternating-eigenvector minimization settings.
struct SolverConfig {
  int n_starts = 32;
  int max_iters = 500;
  double tol_conv = 1e-12;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const SolverConfig& cfg);
/// Keys present in `j` override `base`; unknown keys are rejected.
SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base = {});

/// The hyperplane operator through `guess` orthogonal to guess - target,
/// normalized so that its HS distance term is one.
struct WitnessCandidate {
  HermitianOperator op;
  DensityMatrix guess;
  DensityMatrix target;
  double offset_c;  // <guess, guess - target>
};

/// op = (guess - target - <guess, guess - target> 1) / ||guess - target||.
/// Throws DomainError when guess and target coincide within kEigTol and
/// DimensionError when their shapes differ.
WitnessCandidate witness_candidate(const DensityMatrix& guess, const DensityMatrix& target);

struct ProductMinimum {
  double value = 0.0;
  ComplexVector psi;
  ComplexVector phi;
  int start_index = -1;
  int iterations = 0;  // summed over all starts
};

/// Minimum of <psi (x) phi| a |psi (x) phi> over unit psi in C^{d_a}, phi in C^{d_b}.
///
/// Each start draws a random phi, then alternates: psi <- lowest eigenvector of
/// the partial contraction <phi|a|phi>_B, phi <- lowest eigenvector of
/// <psi|a|psi>_A. Every half-step is an exact eigenproblem, so the value never
/// increases. A start stops once one sweep lowers the value by less than
/// cfg.tol_conv. Start s is seeded from (cfg.seed, s) alone, so results do not
/// depend on evaluation order and adding starts can only lower the minimum.
/// `warm_phis` are tried before the random starts.
///
/// Throws ConvergenceError (carrying the best value) if a start exhausts
/// cfg.max_iters.
ProductMinimum min_over_separable(const HermitianOperator& a, int d_a, int d_b, const SolverConfig& cfg,
                                  std::span<const ComplexVector> warm_phis = {});

struct WitnessReport {
  WitnessCandidate candidate;
  double ent_expectation;  // <target, op>
  double sep_minimum;      // min over separable states of <rho, op>
  ProductEnsemble minimizer;
  bool is_witness;
  bool is_optimal;
};

/// Certifies (up to solver confidence) that `guess` is the separable state
/// nearest to `target`: true iff the candidate operator is a witness.
WitnessReport verify_nearest_separable(const DensityMatrix& guess, const DensityMatrix& target,
                                       const SolverConfig& cfg);

/// (d-1)/(d sqrt(d^2-1)) (1 - d/(2(d-1)) Gamma). Throws DomainError when
/// p.alpha is in the separable range.
HermitianOperator optimal_witness_isotropic(const IsotropicParams& p);

using Vec3 = Eigen::Vector3d;

/// a.sigma (x) (b+b').sigma + a'.sigma (x) (b-b').sigma. Throws DomainError for
/// non-unit settings.
HermitianOperator chsh_operator(const Vec3& a, const Vec3& a_p, const Vec3& b, const Vec3& b_p);

struct ChshSettings {
  Vec3 a, a_p, b, b_p;
  double value;  // Tr(rho B)
};

/// Maximizes Tr(rho B) over the four unit vectors by alternating closed-form
/// updates of the (a, a') and (b, b') pairs from cfg.n_starts random starts.
ChshSettings chsh_max(const DensityMatrix& rho, const SolverConfig& cfg);

}  // namespace witnesskit

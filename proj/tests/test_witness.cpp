#include "witnesskit/witness.hpp"

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace witnesskit;

namespace {

oracle::Mat qubit_aopt() { return (identity(4) - oracle::sigma_op()) / (2.0 * std::sqrt(3.0)); }
oracle::Mat qutrit_aopt() { return (identity(9) - 0.75 * oracle::lambda_op()) / (3.0 * std::sqrt(2.0)); }

SolverConfig cfg(int n_starts = 32, std::uint64_t seed = 0) {
  SolverConfig c;
  c.n_starts = n_starts;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(witness, candidate_qubit_closed_form) {
  const DensityMatrix guess = isotropic({2, 1.0 / 3.0});
  for (double alpha : {0.4, 0.7, 1.0}) {
    const WitnessCandidate c = witness_candidate(guess, isotropic({2, alpha}));
    EXPECT_LT(oracle::max_abs_diff(c.op.matrix(), qubit_aopt()), 1e-12) << alpha;
    EXPECT_NEAR(c.offset_c, 0.25 * (1.0 / 3.0 - alpha), 1e-14);
    EXPECT_NEAR(hs_norm(guess.matrix() - c.target.matrix()), std::sqrt(3.0) / 2.0 * (alpha - 1.0 / 3.0), 1e-14);
  }
}

TEST(witness, candidate_qutrit_closed_form) {
  const DensityMatrix guess = isotropic({3, 0.25});
  for (double alpha : {0.5, 1.0}) {
    const WitnessCandidate c = witness_candidate(guess, isotropic({3, alpha}));
    EXPECT_LT(oracle::max_abs_diff(c.op.matrix(), qutrit_aopt()), 1e-12) << alpha;
  }
}

TEST(witness, candidate_invariants_random_pairs) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix g(oracle::random_density(6, rng), 2, 3);
    const DensityMatrix t(oracle::random_density(6, rng), 2, 3);
    const WitnessCandidate c = witness_candidate(g, t);
    const double dist = hs_norm(g.matrix() - t.matrix());
    EXPECT_NEAR(hs_inner(g.matrix() - t.matrix(), c.op.matrix()).real(), dist, kEigTol);
    EXPECT_NEAR(hs_inner(g.matrix(), c.op.matrix()).real(), 0.0, kEigTol);
    EXPECT_NEAR(hs_inner(t.matrix(), c.op.matrix()).real(), -dist, kEigTol);
    // The traceless direction has unit norm.
    const ComplexMatrix dir = c.op.matrix() - (c.op.matrix().trace() / 6.0) * identity(6);
    EXPECT_NEAR(hs_norm(dir), 1.0, kEigTol);
  }
}

TEST(witness, candidate_errors) {
  const DensityMatrix r = isotropic({2, 0.5});
  EXPECT_THROW(witness_candidate(r, r), DomainError);
  EXPECT_THROW(witness_candidate(r, isotropic({3, 0.5})), DimensionError);
}

TEST(witness, min_over_separable_trivial_cases) {
  const ProductMinimum id = min_over_separable(HermitianOperator(identity(4)), 2, 2, cfg());
  EXPECT_NEAR(id.value, 1.0, 1e-12);

  const ComplexMatrix zz = tensor_product(oracle::pauli(2), oracle::pauli(2));
  const ProductMinimum m = min_over_separable(HermitianOperator(zz), 2, 2, cfg());
  EXPECT_NEAR(m.value, -1.0, 1e-12);
  const ComplexVector v = tensor_product(m.psi, m.phi);
  EXPECT_NEAR(std::norm(v(1)) + std::norm(v(2)), 1.0, 1e-9);
}

TEST(witness, min_over_separable_tangency_qubit) {
  const ProductMinimum m = min_over_separable(HermitianOperator(qubit_aopt()), 2, 2, cfg());
  EXPECT_NEAR(m.value, 0.0, kWitnessTol);
  const ComplexVector v = tensor_product(m.psi, m.phi);
  EXPECT_NEAR(v.dot(qubit_aopt() * v).real(), m.value, 1e-12);
}

TEST(witness, min_over_separable_matches_grid_oracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix a = oracle::random_hermitian(4, rng);
    const double grid = oracle::product_min_grid(a, 24);
    const double value = min_over_separable(HermitianOperator(a), 2, 2, cfg()).value;
    EXPECT_LE(value, grid + 1e-12) << trial;
    EXPECT_GT(value, grid - 0.05 * (1.0 + std::abs(grid))) << trial;
    // The product minimum is bounded below by the global minimum eigenvalue.
    EXPECT_GE(value, min_eigenvalue(HermitianOperator(a)) - 1e-12);
  }
}

TEST(witness, min_over_separable_monotone_in_starts) {
  std::mt19937_64 rng(41);
  const ComplexMatrix a = oracle::random_hermitian(9, rng);
  double prev = std::numeric_limits<double>::infinity();
  for (int n : {1, 2, 4, 8, 16, 32}) {
    const double v = min_over_separable(HermitianOperator(a), 3, 3, cfg(n)).value;
    EXPECT_LE(v, prev + 1e-12) << n;
    prev = v;
  }
}

TEST(witness, min_over_separable_deterministic) {
  std::mt19937_64 rng(43);
  const HermitianOperator a(oracle::random_hermitian(6, rng));
  const ProductMinimum m1 = min_over_separable(a, 2, 3, cfg(8, 5));
  const ProductMinimum m2 = min_over_separable(a, 2, 3, cfg(8, 5));
  EXPECT_EQ(m1.value, m2.value);
  EXPECT_EQ(m1.start_index, m2.start_index);
  EXPECT_EQ(m1.psi, m2.psi);
}

TEST(witness, min_over_separable_rejects_bad_shape) {
  EXPECT_THROW(min_over_separable(HermitianOperator(identity(4)), 2, 3, cfg()), DimensionError);
}

TEST(witness, min_over_separable_reports_non_convergence) {
  std::mt19937_64 rng(47);
  const HermitianOperator a(oracle::random_hermitian(16, rng));
  SolverConfig c = cfg(4);
  c.max_iters = 1;
  c.tol_conv = 0.0;
  try {
    min_over_separable(a, 4, 4, c);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(std::isfinite(e.best_value()));
  }
}

TEST(witness, verify_qubit_nearest_state) {
  const WitnessReport r = verify_nearest_separable(isotropic({2, 1.0 / 3.0}), isotropic({2, 0.8}), cfg());
  EXPECT_TRUE(r.is_witness);
  EXPECT_TRUE(r.is_optimal);
  EXPECT_NEAR(r.ent_expectation, -std::sqrt(3.0) / 2.0 * (0.8 - 1.0 / 3.0), 1e-12);
  EXPECT_NEAR(r.ent_expectation, -0.4041, 1e-4);
  EXPECT_NEAR(r.sep_minimum, 0.0, kWitnessTol);
  ASSERT_EQ(r.minimizer.terms.size(), 1u);
  EXPECT_NO_THROW(r.minimizer.validate());
}

TEST(witness, verify_rejects_maximally_mixed_guess) {
  const WitnessReport r = verify_nearest_separable(DensityMatrix::maximally_mixed(2, 2), isotropic({2, 0.8}), cfg());
  EXPECT_FALSE(r.is_witness);
  EXPECT_FALSE(r.is_optimal);
  EXPECT_LT(r.sep_minimum, -1e-3);
}

TEST(witness, verify_qutrit_nearest_state) {
  const WitnessReport r = verify_nearest_separable(isotropic({3, 0.25}), isotropic({3, 1.0}), cfg());
  EXPECT_TRUE(r.is_witness);
  EXPECT_NEAR(r.ent_expectation, -std::sqrt(2.0) / 2.0, 1e-12);
}

TEST(witness, verify_guess_past_threshold_is_not_tangent) {
  // The plane through an entangled guess still separates, but does not touch S.
  const WitnessReport r = verify_nearest_separable(isotropic({2, 0.5}), isotropic({2, 0.9}), cfg());
  EXPECT_TRUE(r.is_witness);
  EXPECT_FALSE(r.is_optimal);
  EXPECT_NEAR(r.sep_minimum, std::sqrt(3.0) / 2.0 * (0.5 - 1.0 / 3.0), 1e-9);
}

TEST(witness, optimal_witness_closed_forms) {
  EXPECT_LT(oracle::max_abs_diff(optimal_witness_isotropic({2, 0.7}).matrix(), qubit_aopt()), 1e-12);
  EXPECT_LT(oracle::max_abs_diff(optimal_witness_isotropic({3, 0.7}).matrix(), qutrit_aopt()), 1e-12);
  const oracle::Mat a4 =
      3.0 / (4.0 * std::sqrt(15.0)) * (identity(16) - (2.0 / 3.0) * oracle::gamma_from_projector(4));
  EXPECT_LT(oracle::max_abs_diff(optimal_witness_isotropic({4, 0.7}).matrix(), a4), 1e-12);
  const WitnessCandidate c = witness_candidate(isotropic({4, 0.2}), isotropic({4, 0.9}));
  EXPECT_LT(oracle::max_abs_diff(c.op.matrix(), a4), 1e-12);
  EXPECT_THROW(optimal_witness_isotropic({3, 0.25}), DomainError);
}

TEST(witness, optimal_witness_tangent_at_threshold) {
  for (int d = 2; d <= 6; ++d) {
    const HermitianOperator a = optimal_witness_isotropic({d, 1.0});
    EXPECT_NEAR(hs_inner(isotropic({d, 1.0 / (d + 1)}).matrix(), a.matrix()).real(), 0.0, 1e-12) << d;
  }
}

TEST(witness, identity_shift_moves_both_expectations) {
  const HermitianOperator a(qubit_aopt());
  const double kappa = 0.37;
  const HermitianOperator shifted(qubit_aopt() + kappa * identity(4));
  const DensityMatrix target = isotropic({2, 0.8});
  EXPECT_NEAR(min_over_separable(shifted, 2, 2, cfg()).value - min_over_separable(a, 2, 2, cfg()).value, kappa,
              1e-10);
  EXPECT_NEAR(hs_inner(target.matrix(), shifted.matrix()).real() - hs_inner(target.matrix(), a.matrix()).real(), kappa,
              1e-14);
}

TEST(witness, chsh_tsirelson_configuration) {
  const double s = 1.0 / std::sqrt(2.0);
  const ComplexVector phi = max_entangled(2);
  // |phi+> has correlations diag(1, -1, 1): settings in the xz plane reach 2 sqrt(2),
  // the same pattern in the xy plane cancels.
  const HermitianOperator xz = chsh_operator(Vec3::UnitX(), Vec3::UnitZ(), Vec3(s, 0, s), Vec3(s, 0, -s));
  EXPECT_NEAR(phi.dot(xz.matrix() * phi).real(), 2.0 * std::sqrt(2.0), 1e-12);
  const HermitianOperator b = chsh_operator(Vec3::UnitX(), Vec3::UnitY(), Vec3(s, s, 0), Vec3(s, -s, 0));
  EXPECT_NEAR(std::abs(phi.dot(b.matrix() * phi)), 0.0, 1e-12);
  const HermitianOperator flipped = chsh_operator(Vec3::UnitX(), -Vec3::UnitY(), Vec3(s, s, 0), Vec3(s, -s, 0));
  EXPECT_NEAR(phi.dot(flipped.matrix() * phi).real(), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(b.matrix().trace()), 0.0, 1e-14);
  EXPECT_THROW(chsh_operator(Vec3(1, 1, 0), Vec3::UnitY(), Vec3::UnitX(), Vec3::UnitX()), DomainError);
}

TEST(witness, chsh_max_matches_horodecki_formula) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho(oracle::random_density(4, rng), 2, 2);
    EXPECT_NEAR(chsh_max(rho, cfg()).value, oracle::chsh_horodecki(rho.matrix()), 1e-6) << trial;
  }
  for (double alpha : {0.3, 0.5, 0.8, 1.0}) {
    const ChshSettings s = chsh_max(isotropic({2, alpha}), cfg());
    EXPECT_NEAR(s.value, 2.0 * std::sqrt(2.0) * alpha, 1e-6);
    const HermitianOperator b = chsh_operator(s.a, s.a_p, s.b, s.b_p);
    EXPECT_NEAR(hs_inner(isotropic({2, alpha}).matrix(), b.matrix()).real(), s.value, 1e-10);
  }
}

TEST(witness, solver_config_json) {
  SolverConfig c = cfg(7, 99);
  const nlohmann::json j = to_json(c);
  const SolverConfig back = solver_config_from_json(j);
  EXPECT_EQ(back.n_starts, 7);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(solver_config_from_json(nlohmann::json{{"n_starts", 3}}).max_iters, 500);
  EXPECT_THROW(solver_config_from_json(nlohmann::json{{"bogus", 1}}), Error);
}

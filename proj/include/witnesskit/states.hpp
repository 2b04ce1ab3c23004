#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <json.hpp>

#include "witnesskit/linalg.hpp"

namespace witnesskit {

/// Hermitian, unit-trace, positive semidefinite operator on C^{d_a} (x) C^{d_b}.
/// Single-party states use d_b = 1.
class DensityMatrix {
 public:
  /// Validates Hermiticity and trace to kHermTol and positivity to kPsdTol.
  DensityMatrix(ComplexMatrix matrix, int d_a, int d_b = 1);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  int d_a() const noexcept { return d_a_; }
  int d_b() const noexcept { return d_b_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  HermitianOperator as_operator() const { return HermitianOperator(matrix_); }

  static DensityMatrix maximally_mixed(int d_a, int d_b);

 private:
  ComplexMatrix matrix_;
  int d_a_;
  int d_b_;
};

/// Isotropic-family parameters: subsystem dimension and mixing weight alpha.
struct IsotropicParams {
  int d = 2;
  double alpha = 0.0;

  /// Lower end of the positive range, -1/(d^2-1).
  double alpha_min() const { return -1.0 / (double(d) * d - 1.0); }
  /// Throws DomainError unless d >= 2 and alpha_min() <= alpha <= 1.
  void validate() const;
};

/// 1/(d+1): largest alpha for which the isotropic state is separable.
double separability_threshold(int d);

/// |phi_+^d> = d^{-1/2} sum_i |i>|i>.
ComplexVector max_entangled(int d);

DensityMatrix isotropic(const IsotropicParams& p);

enum class Separability { Separable, Entangled };

Separability isotropic_separability(const IsotropicParams& p);

/// Sign vector c_i of the expansion d^2|phi_+><phi_+| - 1 = (d/2) sum_i c_i g^i (x) g^i
/// in generalized_basis(d). The expansion is computed, not assumed: any cross
/// term, single-party term or diagonal coefficient other than +-1 raises
/// GammaFormError naming the offending entry.
std::vector<int> gamma_signs(int d);

class GammaFormError : public Error {
 public:
  GammaFormError(const std::string& what, int row, int col, double coefficient)
      : Error(what), row_(row), col_(col), coefficient_(coefficient) {}
  int row() const noexcept { return row_; }
  int col() const noexcept { return col_; }
  double coefficient() const noexcept { return coefficient_; }

 private:
  int row_;
  int col_;
  double coefficient_;
};

/// Gamma := sum_i c_i g^i (x) g^i with the computed signs.
HermitianOperator gamma_operator(int d);

/// (1/d^2)(1 + (d/2) alpha Gamma).
DensityMatrix isotropic_gamma_form(const IsotropicParams& p);

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal folded back into Q.
ComplexMatrix haar_unitary(int n, std::mt19937_64& rng);

/// Haar-random unit vector in C^n.
ComplexVector random_unit_vector(int n, std::mt19937_64& rng);

/// Max over `trials` Haar unitaries U of ||(U (x) U*) rho (U (x) U*)^dagger - rho||.
double twirl_invariance_check(const DensityMatrix& rho, int trials, std::uint64_t seed);

struct ProductTerm {
  double weight = 0.0;
  ComplexVector psi;  // unit vector in C^{d_a}
  ComplexVector phi;  // unit vector in C^{d_b}
};

/// Convex mixture of pure product states.
struct ProductEnsemble {
  int d_a = 0;
  int d_b = 0;
  std::vector<ProductTerm> terms;

  /// Throws DomainError if weights are negative, do not sum to one within
  /// kHermTol, or a vector is not unit norm within kEigTol.
  void validate() const;
};

/// sum_k p_k |psi_k><psi_k| (x) |phi_k><phi_k|, unvalidated.
ComplexMatrix ensemble_matrix(const ProductEnsemble& e);

DensityMatrix ensemble_to_density(const ProductEnsemble& e);

/// Positivity of the partial transpose over B.
bool is_ppt(const DensityMatrix& rho);

/// {"d_a", "d_b", "entries": [[re, im], ...]} with entries row-major.
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const nlohmann::json& j);

}  // namespace witnesskit

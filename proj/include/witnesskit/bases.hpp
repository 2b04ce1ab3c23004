#pragma once

// Traceless Hermitian operator bases (Pauli, Gell-Mann, generalized Gell-Mann)
// normalized to Tr g^i g^j = 2 delta_ij, and Bloch-coefficient conversion.

#include <vector>

#include "witnesskit/linalg.hpp"
#include "witnesskit/states.hpp"

namespace witnesskit {

enum class GeneratorKind { Symmetric, Antisymmetric, Diagonal };

/// Symmetric/antisymmetric generators couple levels j < k. Diagonal generator
/// number l (1..d-1) stores j = l, k = l.
struct GeneratorLabel {
  GeneratorKind kind;
  int j;
  int k;
};

class BasisSet {
 public:
  BasisSet(int d, std::vector<HermitianOperator> generators, std::vector<GeneratorLabel> labels);

  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return generators_.size(); }
  const HermitianOperator& operator[](std::size_t i) const { return generators_.at(i); }
  const GeneratorLabel& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<HermitianOperator>& generators() const noexcept { return generators_; }

 private:
  int d_;
  std::vector<HermitianOperator> generators_;
  std::vector<GeneratorLabel> labels_;
};

/// sigma^x, sigma^y, sigma^z.
BasisSet pauli_basis();

/// lambda^1 .. lambda^8 in the standard order.
BasisSet gell_mann_basis();

/// Generalized Gell-Mann generators for C^d. Order: symmetric pairs in
/// lexicographic (j,k), then antisymmetric pairs, then diagonal. For d = 3
/// the result is permuted into the standard lambda^1..lambda^8 order, so
/// generalized_basis(3) is identical to gell_mann_basis(). Throws DomainError
/// for d < 2.
BasisSet generalized_basis(int d);

/// rho = 1/(d_a d_b) (1 + a_i g^i (x) 1 + b_i 1 (x) g^i + c_ij g^i (x) g^j).
struct BlochVector {
  int d_a = 0;
  int d_b = 0;
  RealVector a;
  RealVector b;
  RealMatrix c;
};

BlochVector bloch_decompose(const DensityMatrix& rho, const BasisSet& basis_a, const BasisSet& basis_b);
BlochVector bloch_decompose(const ComplexMatrix& rho, const BasisSet& basis_a, const BasisSet& basis_b);

ComplexMatrix bloch_compose(const BlochVector& v, const BasisSet& basis_a, const BasisSet& basis_b);

/// Single-party coefficients n of omega = (1/d)(1 + sqrt(d(d-1)/2) n_i g^i).
/// |n| = 1 exactly for pure states.
RealVector bloch_vector(const ComplexMatrix& omega, const BasisSet& basis);

ComplexMatrix bloch_state(const RealVector& n, const BasisSet& basis);

}  // namespace witnesskit

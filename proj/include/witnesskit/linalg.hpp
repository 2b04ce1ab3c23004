#pragma once

// Dense complex linear algebra used by every other module: tensor products,
// the Hilbert-Schmidt inner product, Hermitian eigendecomposition and the
// partial transpose of a bipartite operator.

#include <complex>

#include <Eigen/Dense>

#include "witnesskit/errors.hpp"

namespace witnesskit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Entrywise absolute tolerance for Hermiticity checks.
inline constexpr double kHermTol = 1e-10;
/// Relative tolerance for eigendecomposition residuals.
inline constexpr double kEigTol = 1e-9;
/// Eigenvalues above -kPsdTol count as non-negative.
inline constexpr double kPsdTol = 1e-9;

/// Kronecker product. Entry (i*b.rows()+k, j*b.cols()+l) equals a(i,j)*b(k,l).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);

/// Tr(a^dagger b).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// sqrt(Re Tr(a^dagger a)).
double hs_norm(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol = kHermTol);

ComplexMatrix identity(Eigen::Index dim);

/// A square matrix validated to be Hermitian at construction.
class HermitianOperator {
 public:
  /// Throws DimensionError for non-square input and DomainError when some
  /// entry differs from its mirrored conjugate by more than `tol`.
  explicit HermitianOperator(ComplexMatrix matrix, double tol = kHermTol);

  static HermitianOperator identity(Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  /// <psi| A |psi>, real by Hermiticity.
  double expectation(const ComplexVector& psi) const;

 private:
  ComplexMatrix matrix_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double s, const HermitianOperator& a);

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are the matching eigenvectors
};

/// Full spectrum of a Hermitian operator. Throws ConvergenceError if the
/// underlying QR iteration does not converge.
EigenDecomposition eig_hermitian(const HermitianOperator& a);

/// Smallest eigenvalue only; same contract as eig_hermitian.
double min_eigenvalue(const HermitianOperator& a);

enum class Subsystem { A, B };

/// Partial transpose of a (d_a*d_b)-square operator on the chosen factor.
ComplexMatrix partial_transpose(const ComplexMatrix& rho, int d_a, int d_b, Subsystem subsystem);

}  // namespace witnesskit

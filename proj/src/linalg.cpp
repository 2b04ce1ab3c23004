#include "witnesskit/linalg.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace witnesskit {

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: operands have different shapes");
  }
  // Tr(a^dagger b) = sum_ij conj(a_ij) b_ij
  return a.conjugate().cwiseProduct(b).sum();
}

double hs_norm(const ComplexMatrix& a) {
  return std::sqrt(a.cwiseAbs2().sum());
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol) return false;
    }
  }
  return true;
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

HermitianOperator::HermitianOperator(ComplexMatrix matrix, double tol) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("HermitianOperator: matrix is not square");
  }
  if (!is_hermitian(matrix_, tol)) {
    throw DomainError("HermitianOperator: matrix is not Hermitian");
  }
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(witnesskit::identity(dim));
}

double HermitianOperator::expectation(const ComplexVector& psi) const {
  return psi.dot(matrix_ * psi).real();
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("HermitianOperator +: dimension mismatch");
  return HermitianOperator(a.matrix() + b.matrix());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("HermitianOperator -: dimension mismatch");
  return HermitianOperator(a.matrix() - b.matrix());
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(s * a.matrix());
}

EigenDecomposition eig_hermitian(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eig_hermitian: no convergence for " << a.dim() << "x" << a.dim() << " operator";
    throw ConvergenceError(msg.str(), std::nan(""), 0);
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("min_eigenvalue: no convergence", std::nan(""), 0);
  }
  return solver.eigenvalues()(0);
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int d_a, int d_b, Subsystem subsystem) {
  if (d_a < 1 || d_b < 1 || rho.rows() != Eigen::Index(d_a) * d_b || rho.cols() != rho.rows()) {
    throw DimensionError("partial_transpose: operator side must equal d_a*d_b");
  }
  ComplexMatrix out(rho.rows(), rho.cols());
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      for (int k = 0; k < d_b; ++k) {
        for (int l = 0; l < d_b; ++l) {
          const Complex v = rho(i * d_b + k, j * d_b + l);
          if (subsystem == Subsystem::B) {
            out(i * d_b + l, j * d_b + k) = v;
          } else {
            out(j * d_b + k, i * d_b + l) = v;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace witnesskit

#include "witnesskit/bases.hpp"

#include <array>
#include <cmath>
#include <string>

namespace witnesskit {
namespace {

constexpr Complex kI{0.0, 1.0};

double real_or_throw(Complex z, const char* what) {
  if (std::abs(z.imag()) > kHermTol) {
    throw DomainError(std::string(what) + ": coefficient has non-zero imaginary part");
  }
  return z.real();
}

// Raw generic-order generators: symmetric (j,k), antisymmetric (j,k), diagonal l.
BasisSet generic_basis(int d) {
  std::vector<HermitianOperator> gens;
  std::vector<GeneratorLabel> labels;
  const auto n = static_cast<std::size_t>(d) * d - 1;
  gens.reserve(n);
  labels.reserve(n);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      gens.emplace_back(std::move(m));
      labels.push_back({GeneratorKind::Symmetric, j, k});
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = -kI;
      m(k, j) = kI;
      gens.emplace_back(std::move(m));
      labels.push_back({GeneratorKind::Antisymmetric, j, k});
    }
  }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / (double(l) * (l + 1)));
    for (int m_idx = 0; m_idx < l; ++m_idx) m(m_idx, m_idx) = scale;
    m(l, l) = -scale * l;
    gens.emplace_back(std::move(m));
    labels.push_back({GeneratorKind::Diagonal, l, l});
  }
  return BasisSet(d, std::move(gens), std::move(labels));
}

}  // namespace

BasisSet::BasisSet(int d, std::vector<HermitianOperator> generators, std::vector<GeneratorLabel> labels)
    : d_(d), generators_(std::move(generators)), labels_(std::move(labels)) {
  if (d_ < 2) throw DomainError("BasisSet: d must be at least 2");
  if (generators_.size() != static_cast<std::size_t>(d_) * d_ - 1 || labels_.size() != generators_.size()) {
    throw DimensionError("BasisSet: expected d^2-1 generators with one label each");
  }
  for (const auto& g : generators_) {
    if (g.dim() != d_) throw DimensionError("BasisSet: generator has wrong dimension");
  }
}

BasisSet pauli_basis() {
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, -kI, kI, 0;
  sz << 1, 0, 0, -1;
  return BasisSet(2,
                  {HermitianOperator(sx), HermitianOperator(sy), HermitianOperator(sz)},
                  {{GeneratorKind::Symmetric, 0, 1},
                   {GeneratorKind::Antisymmetric, 0, 1},
                   {GeneratorKind::Diagonal, 1, 1}});
}

BasisSet gell_mann_basis() {
  const double r3 = 1.0 / std::sqrt(3.0);
  std::array<ComplexMatrix, 8> l;
  for (auto& m : l) m = ComplexMatrix::Zero(3, 3);
  l[0] << 0, 1, 0,  1, 0, 0,  0, 0, 0;
  l[1] << 0, -kI, 0,  kI, 0, 0,  0, 0, 0;
  l[2] << 1, 0, 0,  0, -1, 0,  0, 0, 0;
  l[3] << 0, 0, 1,  0, 0, 0,  1, 0, 0;
  l[4] << 0, 0, -kI,  0, 0, 0,  kI, 0, 0;
  l[5] << 0, 0, 0,  0, 0, 1,  0, 1, 0;
  l[6] << 0, 0, 0,  0, 0, -kI,  0, kI, 0;
  l[7] << r3, 0, 0,  0, r3, 0,  0, 0, -2 * r3;
  std::vector<HermitianOperator> gens;
  for (auto& m : l) gens.emplace_back(m);
  return BasisSet(3, std::move(gens),
                  {{GeneratorKind::Symmetric, 0, 1},
                   {GeneratorKind::Antisymmetric, 0, 1},
                   {GeneratorKind::Diagonal, 1, 1},
                   {GeneratorKind::Symmetric, 0, 2},
                   {GeneratorKind::Antisymmetric, 0, 2},
                   {GeneratorKind::Symmetric, 1, 2},
                   {GeneratorKind::Antisymmetric, 1, 2},
                   {GeneratorKind::Diagonal, 2, 2}});
}

BasisSet generalized_basis(int d) {
  if (d < 2) throw DomainError("generalized_basis: d must be at least 2");
  BasisSet generic = generic_basis(d);
  if (d != 3) return generic;

  // generic index -> lambda position: s01 s02 s12 a01 a02 a12 d1 d2
  constexpr std::array<int, 8> kGellMannOrder{0, 3, 5, 1, 4, 6, 2, 7};
  std::vector<HermitianOperator> gens(8, HermitianOperator::identity(3));
  std::vector<GeneratorLabel> labels(8, {GeneratorKind::Diagonal, 0, 0});
  for (std::size_t i = 0; i < 8; ++i) {
    gens[kGellMannOrder[i]] = generic[i];
    labels[kGellMannOrder[i]] = generic.label(i);
  }
  return BasisSet(3, std::move(gens), std::move(labels));
}

BlochVector bloch_decompose(const DensityMatrix& rho, const BasisSet& basis_a, const BasisSet& basis_b) {
  if (rho.d_a() != basis_a.d() || rho.d_b() != basis_b.d()) {
    throw DimensionError("bloch_decompose: state and basis dimensions differ");
  }
  return bloch_decompose(rho.matrix(), basis_a, basis_b);
}

BlochVector bloch_decompose(const ComplexMatrix& rho, const BasisSet& basis_a, const BasisSet& basis_b) {
  const int da = basis_a.d();
  const int db = basis_b.d();
  if (rho.rows() != Eigen::Index(da) * db || rho.cols() != rho.rows()) {
    throw DimensionError("bloch_decompose: matrix side must equal d_a*d_b");
  }
  const auto na = static_cast<Eigen::Index>(basis_a.size());
  const auto nb = static_cast<Eigen::Index>(basis_b.size());
  const ComplexMatrix id_a = identity(da);
  const ComplexMatrix id_b = identity(db);

  BlochVector v{da, db, RealVector(na), RealVector(nb), RealMatrix(na, nb)};
  // Tr(rho X) = hs_inner(X, rho) for Hermitian X.
  for (Eigen::Index i = 0; i < na; ++i) {
    v.a(i) = 0.5 * da * real_or_throw(hs_inner(tensor_product(basis_a[i].matrix(), id_b), rho), "bloch_decompose");
  }
  for (Eigen::Index j = 0; j < nb; ++j) {
    v.b(j) = 0.5 * db * real_or_throw(hs_inner(tensor_product(id_a, basis_b[j].matrix()), rho), "bloch_decompose");
  }
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j) {
      const ComplexMatrix g = tensor_product(basis_a[i].matrix(), basis_b[j].matrix());
      v.c(i, j) = 0.25 * da * db * real_or_throw(hs_inner(g, rho), "bloch_decompose");
    }
  }
  return v;
}

ComplexMatrix bloch_compose(const BlochVector& v, const BasisSet& basis_a, const BasisSet& basis_b) {
  const auto na = static_cast<Eigen::Index>(basis_a.size());
  const auto nb = static_cast<Eigen::Index>(basis_b.size());
  if (v.d_a != basis_a.d() || v.d_b != basis_b.d() || v.a.size() != na || v.b.size() != nb ||
      v.c.rows() != na || v.c.cols() != nb) {
    throw DimensionError("bloch_compose: coefficient lengths do not match the bases");
  }
  const int da = basis_a.d();
  const int db = basis_b.d();
  ComplexMatrix side_a = ComplexMatrix::Zero(da, da);
  for (Eigen::Index i = 0; i < na; ++i) side_a += v.a(i) * basis_a[i].matrix();
  ComplexMatrix side_b = ComplexMatrix::Zero(db, db);
  for (Eigen::Index j = 0; j < nb; ++j) side_b += v.b(j) * basis_b[j].matrix();

  ComplexMatrix out = identity(Eigen::Index(da) * db);
  out += tensor_product(side_a, identity(db));
  out += tensor_product(identity(da), side_b);
  for (Eigen::Index i = 0; i < na; ++i) {
    ComplexMatrix row = ComplexMatrix::Zero(db, db);
    for (Eigen::Index j = 0; j < nb; ++j) row += v.c(i, j) * basis_b[j].matrix();
    out += tensor_product(basis_a[i].matrix(), row);
  }
  return out / double(da * db);
}

RealVector bloch_vector(const ComplexMatrix& omega, const BasisSet& basis) {
  const int d = basis.d();
  if (omega.rows() != d || omega.cols() != d) {
    throw DimensionError("bloch_vector: state and basis dimensions differ");
  }
  const double norm = std::sqrt(0.5 * d * (d - 1));
  RealVector n(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index i = 0; i < n.size(); ++i) {
    n(i) = d * real_or_throw(hs_inner(basis[i].matrix(), omega), "bloch_vector") / (2.0 * norm);
  }
  return n;
}

ComplexMatrix bloch_state(const RealVector& n, const BasisSet& basis) {
  if (n.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionError("bloch_state: vector length must be d^2-1");
  }
  const int d = basis.d();
  const double norm = std::sqrt(0.5 * d * (d - 1));
  ComplexMatrix out = identity(d);
  for (Eigen::Index i = 0; i < n.size(); ++i) out += norm * n(i) * basis[i].matrix();
  return out / double(d);
}

}  // namespace witnesskit

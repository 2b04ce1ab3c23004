#include "witnesskit/states.hpp"

#include <cmath>
#include <sstream>

#include "witnesskit/bases.hpp"

namespace witnesskit {

DensityMatrix::DensityMatrix(ComplexMatrix matrix, int d_a, int d_b)
    : matrix_(std::move(matrix)), d_a_(d_a), d_b_(d_b) {
  if (d_a_ < 1 || d_b_ < 1 || matrix_.rows() != Eigen::Index(d_a_) * d_b_ || matrix_.cols() != matrix_.rows()) {
    throw DimensionError("DensityMatrix: matrix side must equal d_a*d_b");
  }
  if (!is_hermitian(matrix_, kHermTol)) throw DomainError("DensityMatrix: not Hermitian");
  if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kHermTol) {
    throw DomainError("DensityMatrix: trace differs from 1");
  }
  if (min_eigenvalue(HermitianOperator(matrix_)) < -kPsdTol) {
    throw DomainError("DensityMatrix: not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int d_a, int d_b) {
  const auto n = Eigen::Index(d_a) * d_b;
  return DensityMatrix(identity(n) / double(n), d_a, d_b);
}

void IsotropicParams::validate() const {
  if (d < 2) throw DomainError("isotropic: d must be at least 2");
  if (!(alpha >= alpha_min() - 1e-15 && alpha <= 1.0 + 1e-15)) {
    std::ostringstream msg;
    msg << "isotropic: alpha=" << alpha << " outside [" << alpha_min() << ", 1] for d=" << d;
    throw DomainError(msg.str());
  }
}

double separability_threshold(int d) {
  if (d < 2) throw DomainError("separability_threshold: d must be at least 2");
  return 1.0 / (d + 1.0);
}

ComplexVector max_entangled(int d) {
  if (d < 2) throw DomainError("max_entangled: d must be at least 2");
  ComplexVector v = ComplexVector::Zero(Eigen::Index(d) * d);
  const double amp = 1.0 / std::sqrt(double(d));
  for (int i = 0; i < d; ++i) v(i * d + i) = amp;
  return v;
}

namespace {

ComplexMatrix isotropic_matrix(int d, double alpha) {
  const ComplexVector phi = max_entangled(d);
  const auto n = Eigen::Index(d) * d;
  return alpha * (phi * phi.adjoint()) + ((1.0 - alpha) / double(n)) * identity(n);
}

}  // namespace

DensityMatrix isotropic(const IsotropicParams& p) {
  p.validate();
  return DensityMatrix(isotropic_matrix(p.d, p.alpha), p.d, p.d);
}

Separability isotropic_separability(const IsotropicParams& p) {
  p.validate();
  return p.alpha <= separability_threshold(p.d) ? Separability::Separable : Separability::Entangled;
}

std::vector<int> gamma_signs(int d) {
  const BasisSet basis = generalized_basis(d);
  const auto n = Eigen::Index(d) * d;
  const ComplexVector phi = max_entangled(d);
  const ComplexMatrix x = double(n) * (phi * phi.adjoint()) - identity(n);
  const ComplexMatrix id = identity(d);

  auto report = [&](const char* kind, int i, int j, double value) {
    std::ostringstream msg;
    msg << "gamma_signs(d=" << d << "): " << kind << " coefficient (" << i << "," << j << ") = " << value;
    return GammaFormError(msg.str(), i, j, value);
  };

  // With Tr g^i g^j = 2 delta_ij, X = (d/2) sum c_i g^i (x) g^i gives
  // Tr((g^i (x) g^j) X) = 2 d c_i delta_ij.
  std::vector<int> signs(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double single_a = hs_inner(tensor_product(basis[i].matrix(), id), x).real();
    const double single_b = hs_inner(tensor_product(id, basis[i].matrix()), x).real();
    if (std::abs(single_a) > kEigTol) throw report("single-party A", int(i), -1, single_a);
    if (std::abs(single_b) > kEigTol) throw report("single-party B", -1, int(i), single_b);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const Complex raw = hs_inner(tensor_product(basis[i].matrix(), basis[j].matrix()), x);
      const double c = raw.real() / (2.0 * d);
      if (std::abs(raw.imag()) > kEigTol) throw report("complex", int(i), int(j), raw.imag());
      if (i != j) {
        if (std::abs(c) > kEigTol) throw report("cross", int(i), int(j), c);
        continue;
      }
      if (std::abs(std::abs(c) - 1.0) > kEigTol) throw report("diagonal", int(i), int(j), c);
      signs[i] = c > 0 ? 1 : -1;
    }
  }
  return signs;
}

HermitianOperator gamma_operator(int d) {
  const BasisSet basis = generalized_basis(d);
  const std::vector<int> signs = gamma_signs(d);
  ComplexMatrix g = ComplexMatrix::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    g += double(signs[i]) * tensor_product(basis[i].matrix(), basis[i].matrix());
  }
  return HermitianOperator(std::move(g));
}

DensityMatrix isotropic_gamma_form(const IsotropicParams& p) {
  p.validate();
  const auto n = Eigen::Index(p.d) * p.d;
  ComplexMatrix m = identity(n) + (0.5 * p.d * p.alpha) * gamma_operator(p.d).matrix();
  return DensityMatrix(m / double(n), p.d, p.d);
}

ComplexMatrix haar_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex{gauss(rng), gauss(rng)};
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex{gauss(rng), gauss(rng)};
  return v / v.norm();
}

double twirl_invariance_check(const DensityMatrix& rho, int trials, std::uint64_t seed) {
  if (rho.d_a() != rho.d_b()) throw DimensionError("twirl_invariance_check: requires d_a == d_b");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix u = haar_unitary(rho.d_a(), rng);
    const ComplexMatrix w = tensor_product(u, ComplexMatrix(u.conjugate()));
    worst = std::max(worst, hs_norm(w * rho.matrix() * w.adjoint() - rho.matrix()));
  }
  return worst;
}

void ProductEnsemble::validate() const {
  if (terms.empty()) throw DomainError("ProductEnsemble: no terms");
  double total = 0.0;
  for (const auto& t : terms) {
    if (t.weight < 0.0 || t.weight > 1.0 + kHermTol) throw DomainError("ProductEnsemble: weight outside [0,1]");
    if (t.psi.size() != d_a || t.phi.size() != d_b) throw DimensionError("ProductEnsemble: vector length mismatch");
    if (std::abs(t.psi.norm() - 1.0) > kEigTol || std::abs(t.phi.norm() - 1.0) > kEigTol) {
      throw DomainError("ProductEnsemble: factor is not unit norm");
    }
    total += t.weight;
  }
  if (std::abs(total - 1.0) > kHermTol) throw DomainError("ProductEnsemble: weights do not sum to 1");
}

ComplexMatrix ensemble_matrix(const ProductEnsemble& e) {
  const auto n = Eigen::Index(e.d_a) * e.d_b;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& t : e.terms) {
    const ComplexVector v = tensor_product(t.psi, t.phi);
    out.noalias() += t.weight * (v * v.adjoint());
  }
  return out;
}

DensityMatrix ensemble_to_density(const ProductEnsemble& e) {
  e.validate();
  ComplexMatrix m = ensemble_matrix(e);
  // Rounding in the outer products can leave ~1e-17 anti-Hermitian residue.
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), e.d_a, e.d_b);
}

bool is_ppt(const DensityMatrix& rho) {
  const ComplexMatrix pt = partial_transpose(rho.matrix(), rho.d_a(), rho.d_b(), Subsystem::B);
  return min_eigenvalue(HermitianOperator(pt)) >= -kPsdTol;
}

nlohmann::json to_json(const DensityMatrix& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    for (Eigen::Index j = 0; j < rho.dim(); ++j) {
      entries.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
    }
  }
  return {{"d_a", rho.d_a()}, {"d_b", rho.d_b()}, {"entries", std::move(entries)}};
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d_a") || !j.contains("d_b") || !j.contains("entries")) {
    throw DomainError("density JSON: expected object with d_a, d_b, entries");
  }
  const int d_a = j.at("d_a").get<int>();
  const int d_b = j.at("d_b").get<int>();
  const auto& entries = j.at("entries");
  const auto n = Eigen::Index(d_a) * d_b;
  if (d_a < 1 || d_b < 1 || !entries.is_array() || entries.size() != static_cast<std::size_t>(n * n)) {
    throw DimensionError("density JSON: entries must hold (d_a*d_b)^2 [re, im] pairs");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const auto& e = entries.at(static_cast<std::size_t>(k));
    if (!e.is_array() || e.size() != 2) throw DomainError("density JSON: entry is not [re, im]");
    m(k / n, k % n) = Complex{e[0].get<double>(), e[1].get<double>()};
  }
  return DensityMatrix(std::move(m), d_a, d_b);
}

}  // namespace witnesskit

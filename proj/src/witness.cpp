#include "witnesskit/witness.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "witnesskit/bases.hpp"

namespace witnesskit {
namespace {

std::mt19937_64 start_rng(std::uint64_t seed, int start) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start)};
  return std::mt19937_64(seq);
}

// <phi|a|phi> traced over the B factor: d_a x d_a.
ComplexMatrix contract_b(const ComplexMatrix& a, const ComplexVector& phi, int d_a, int d_b) {
  ComplexMatrix out(d_a, d_a);
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      out(i, j) = phi.dot(a.block(i * d_b, j * d_b, d_b, d_b) * phi);
    }
  }
  return 0.5 * (out + out.adjoint());
}

// <psi|a|psi> traced over the A factor: d_b x d_b.
ComplexMatrix contract_a(const ComplexMatrix& a, const ComplexVector& psi, int d_a, int d_b) {
  ComplexMatrix out = ComplexMatrix::Zero(d_b, d_b);
  for (int i = 0; i < d_a; ++i) {
    for (int j = 0; j < d_a; ++j) {
      out += std::conj(psi(i)) * psi(j) * a.block(i * d_b, j * d_b, d_b, d_b);
    }
  }
  return 0.5 * (out + out.adjoint());
}

std::pair<double, ComplexVector> lowest(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("min_over_separable: eigensolver failed", std::nan(""), 0);
  }
  return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

struct StartResult {
  double value;
  ComplexVector psi;
  ComplexVector phi;
  int iterations;
  bool converged;
};

double product_value(const ComplexMatrix& a, const ComplexVector& psi, const ComplexVector& phi) {
  const ComplexVector v = tensor_product(psi, phi);
  return v.dot(a * v).real();
}

// Real coordinates of a complex vector: (Re z, Im z).
Eigen::VectorXd to_real(const ComplexVector& z) {
  Eigen::VectorXd r(2 * z.size());
  r << z.real(), z.imag();
  return r;
}

ComplexVector to_complex(const Eigen::VectorXd& r) {
  const Eigen::Index n = r.size() / 2;
  return r.head(n).cast<Complex>() + Complex{0.0, 1.0} * r.tail(n).cast<Complex>();
}

// Orthonormal basis of the tangent space of the unit sphere at z with the
// phase direction i*z removed (the value is invariant along it).
Eigen::MatrixXd horizontal_basis(const ComplexVector& z) {
  const Eigen::Index m = 2 * z.size();
  Eigen::MatrixXd fixed(m, 2);
  fixed.col(0) = to_real(z);
  fixed.col(1) = to_real(Complex{0.0, 1.0} * z);
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(m, m) - fixed * fixed.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(proj);
  return es.eigenvectors().rightCols(m - 2);
}

struct NewtonStep {
  ComplexVector psi;
  ComplexVector phi;
  double grad_norm;
};

// One Riemannian Newton step for <psi (x) phi|a|psi (x) phi> on the product of
// unit spheres. Indefinite or tiny curvature is replaced by its magnitude
// (floored), which keeps the step a descent direction.
NewtonStep newton_step(const ComplexMatrix& a, const ComplexVector& psi, const ComplexVector& phi, int d_a, int d_b,
                       double f) {
  const ComplexVector v = tensor_product(psi, phi);
  const ComplexVector w = a * v;
  const ComplexMatrix m_b = contract_b(a, phi, d_a, d_b);  // acts on psi
  const ComplexMatrix m_a = contract_a(a, psi, d_a, d_b);  // acts on phi
  // k(i,l) = sum_{k,j} conj(phi_k) a(i d_b + k, j d_b + l) psi_j
  ComplexMatrix k(d_a, d_b);
  for (int i = 0; i < d_a; ++i) {
    for (int l = 0; l < d_b; ++l) {
      Complex acc{};
      for (int kk = 0; kk < d_b; ++kk) {
        for (int j = 0; j < d_a; ++j) acc += std::conj(phi(kk)) * a(i * d_b + kk, j * d_b + l) * psi(j);
      }
      k(i, l) = acc;
    }
  }

  const int na = 2 * d_a;
  const int nb = 2 * d_b;
  auto unit = [](int idx, int dim) {
    return idx < dim ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
  };
  Eigen::VectorXd grad(na + nb);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(na + nb, na + nb);
  auto realify = [](const ComplexMatrix& m) {
    const Eigen::Index n = m.rows();
    Eigen::MatrixXd r(2 * n, 2 * n);
    r << m.real(), -m.imag(), m.imag(), m.real();
    return r;
  };
  hess.topLeftCorner(na, na) = 2.0 * realify(m_b);
  hess.bottomRightCorner(nb, nb) = 2.0 * realify(m_a);
  for (int ia = 0; ia < na; ++ia) {
    const int i = ia % d_a;
    const Complex ca = unit(ia, d_a);
    // d f / d psi along ca*e_i: 2 Re[conj(ca) (M_b psi)_i]
    grad(ia) = 2.0 * (std::conj(ca) * (m_b * psi)(i)).real();
    for (int ib = 0; ib < nb; ++ib) {
      const int l = ib % d_b;
      const Complex cb = unit(ib, d_b);
      const double cross = 2.0 * (std::conj(w(i * d_b + l)) * ca * cb).real() + 2.0 * (std::conj(ca) * cb * k(i, l)).real();
      hess(ia, na + ib) = cross;
      hess(na + ib, ia) = cross;
    }
  }
  for (int ib = 0; ib < nb; ++ib) {
    const int l = ib % d_b;
    grad(na + ib) = 2.0 * (std::conj(unit(ib, d_b)) * (m_a * phi)(l)).real();
  }

  const Eigen::MatrixXd ua = horizontal_basis(psi);
  const Eigen::MatrixXd ub = horizontal_basis(phi);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(na + nb, ua.cols() + ub.cols());
  basis.topLeftCorner(na, ua.cols()) = ua;
  basis.bottomRightCorner(nb, ub.cols()) = ub;

  // Riemannian Hessian on the sphere product: P (H - 2f I) P.
  const Eigen::VectorXd g_red = basis.transpose() * grad;
  const Eigen::MatrixXd h_red =
      basis.transpose() * hess * basis - 2.0 * f * Eigen::MatrixXd::Identity(basis.cols(), basis.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h_red);
  const double floor = 1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd coeff = es.eigenvectors().transpose() * g_red;
  for (Eigen::Index j = 0; j < coeff.size(); ++j) coeff(j) /= std::max(std::abs(es.eigenvalues()(j)), floor);
  Eigen::VectorXd step = -(basis * (es.eigenvectors() * coeff));
  // Stay within a quarter turn of the sphere; larger steps leave the quadratic model.
  if (step.norm() > 0.5) step *= 0.5 / step.norm();

  NewtonStep out{psi, phi, g_red.norm()};
  double scale = 1.0;
  for (int halving = 0; halving < 40; ++halving, scale *= 0.5) {
    ComplexVector psi_new = psi + scale * to_complex(step.head(na));
    ComplexVector phi_new = phi + scale * to_complex(step.tail(nb));
    psi_new.normalize();
    phi_new.normalize();
    if (product_value(a, psi_new, phi_new) < f) {
      out.psi = std::move(psi_new);
      out.phi = std::move(phi_new);
      break;
    }
  }
  return out;
}

// Alternating eigenvector sweeps, each followed by a Newton trial step that is
// kept only if it lowers the value. The value is therefore non-increasing.
StartResult descend(const ComplexMatrix& a, int d_a, int d_b, ComplexVector phi, const SolverConfig& cfg) {
  double prev = std::numeric_limits<double>::infinity();
  StartResult r{prev, ComplexVector(), std::move(phi), 0, false};
  const double grad_tol = std::sqrt(std::max(cfg.tol_conv, 1e-30)) * std::max(1.0, a.cwiseAbs().maxCoeff());
  for (int it = 0; it < cfg.max_iters; ++it) {
    auto [va, psi] = lowest(contract_b(a, r.phi, d_a, d_b));
    auto [vb, phi_next] = lowest(contract_a(a, psi, d_a, d_b));
    r.psi = std::move(psi);
    r.phi = std::move(phi_next);
    r.value = vb;
    r.iterations = it + 1;

    NewtonStep ns = newton_step(a, r.psi, r.phi, d_a, d_b, r.value);
    const double trial = product_value(a, ns.psi, ns.phi);
    if (trial < r.value) {
      r.psi = std::move(ns.psi);
      r.phi = std::move(ns.phi);
      r.value = trial;
    }
    if (prev - r.value < cfg.tol_conv && ns.grad_norm <= grad_tol) {
      r.converged = true;
      break;
    }
    prev = r.value;
  }
  return r;
}

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
  const double n = v.norm();
  return n > 1e-300 ? Vec3(v / n) : fallback;
}

}  // namespace

nlohmann::json to_json(const SolverConfig& cfg) {
  return {{"n_starts", cfg.n_starts}, {"max_iters", cfg.max_iters}, {"tol_conv", cfg.tol_conv}, {"seed", cfg.seed}};
}

SolverConfig solver_config_from_json(const nlohmann::json& j, SolverConfig base) {
  if (!j.is_object()) throw DomainError("solver config JSON: expected an object");
  SolverConfig cfg = base;
  for (const auto& [key, value] : j.items()) {
    if (key == "n_starts") {
      cfg.n_starts = value.get<int>();
    } else if (key == "max_iters") {
      cfg.max_iters = value.get<int>();
    } else if (key == "tol_conv") {
      cfg.tol_conv = value.get<double>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else {
      throw DomainError("solver config JSON: unknown key '" + key + "'");
    }
  }
  if (cfg.n_starts < 1 || cfg.max_iters < 1 || !(cfg.tol_conv >= 0.0)) {
    throw DomainError("solver config JSON: n_starts and max_iters must be positive, tol_conv non-negative");
  }
  return cfg;
}

WitnessCandidate witness_candidate(const DensityMatrix& guess, const DensityMatrix& target) {
  if (guess.d_a() != target.d_a() || guess.d_b() != target.d_b()) {
    throw DimensionError("witness_candidate: guess and target have different dimensions");
  }
  const ComplexMatrix diff = guess.matrix() - target.matrix();
  const double norm = hs_norm(diff);
  if (norm <= kEigTol) throw DomainError("witness_candidate: guess coincides with target");
  const double offset = hs_inner(guess.matrix(), diff).real();
  ComplexMatrix op = (diff - offset * identity(guess.dim())) / norm;
  op = 0.5 * (op + op.adjoint()).eval();
  return {HermitianOperator(std::move(op)), guess, target, offset};
}

ProductMinimum min_over_separable(const HermitianOperator& a, int d_a, int d_b, const SolverConfig& cfg,
                                  std::span<const ComplexVector> warm_phis) {
  if (d_a < 1 || d_b < 1 || a.dim() != Eigen::Index(d_a) * d_b) {
    throw DimensionError("min_over_separable: operator side must equal d_a*d_b");
  }
  if (cfg.n_starts < 1 && warm_phis.empty()) throw DomainError("min_over_separable: no starts");

  ProductMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  const int n_warm = static_cast<int>(warm_phis.size());
  int total_iters = 0;
  for (int s = 0; s < n_warm + cfg.n_starts; ++s) {
    ComplexVector phi;
    if (s < n_warm) {
      if (warm_phis[s].size() != d_b) throw DimensionError("min_over_separable: warm start has wrong length");
      phi = warm_phis[s] / warm_phis[s].norm();
    } else {
      auto rng = start_rng(cfg.seed, s - n_warm);
      phi = random_unit_vector(d_b, rng);
    }
    StartResult r = descend(a.matrix(), d_a, d_b, std::move(phi), cfg);
    total_iters += r.iterations;
    if (!r.converged) {
      std::ostringstream msg;
      msg << "min_over_separable: start " << s << " did not converge in " << cfg.max_iters << " iterations";
      throw ConvergenceError(msg.str(), std::min(best.value, r.value), total_iters);
    }
    if (r.value < best.value) {
      best.value = r.value;
      best.psi = std::move(r.psi);
      best.phi = std::move(r.phi);
      best.start_index = s;
    }
  }
  best.iterations = total_iters;
  return best;
}

WitnessReport verify_nearest_separable(const DensityMatrix& guess, const DensityMatrix& target,
                                       const SolverConfig& cfg) {
  WitnessCandidate cand = witness_candidate(guess, target);
  const double ent = hs_inner(target.matrix(), cand.op.matrix()).real();
  const ProductMinimum m = min_over_separable(cand.op, guess.d_a(), guess.d_b(), cfg);
  ProductEnsemble minimizer{guess.d_a(), guess.d_b(), {{1.0, m.psi, m.phi}}};
  const bool witness = ent < -kWitnessTol && m.value >= -kWitnessTol;
  const bool optimal = witness && std::abs(m.value) <= kWitnessTol;
  return {std::move(cand), ent, m.value, std::move(minimizer), witness, optimal};
}

HermitianOperator optimal_witness_isotropic(const IsotropicParams& p) {
  p.validate();
  if (isotropic_separability(p) == Separability::Separable) {
    std::ostringstream msg;
    msg << "optimal_witness_isotropic: alpha=" << p.alpha << " is separable for d=" << p.d
        << " (threshold " << separability_threshold(p.d) << ")";
    throw DomainError(msg.str());
  }
  const double d = p.d;
  const double scale = (d - 1.0) / (d * std::sqrt(d * d - 1.0));
  const ComplexMatrix id = identity(Eigen::Index(p.d) * p.d);
  return HermitianOperator(scale * (id - (d / (2.0 * (d - 1.0))) * gamma_operator(p.d).matrix()));
}

HermitianOperator chsh_operator(const Vec3& a, const Vec3& a_p, const Vec3& b, const Vec3& b_p) {
  for (const Vec3* v : {&a, &a_p, &b, &b_p}) {
    if (std::abs(v->norm() - 1.0) > kEigTol) throw DomainError("chsh_operator: settings must be unit vectors");
  }
  const BasisSet pauli = pauli_basis();
  auto dot_sigma = [&](const Vec3& v) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    for (int i = 0; i < 3; ++i) m += v(i) * pauli[i].matrix();
    return m;
  };
  ComplexMatrix op = tensor_product(dot_sigma(a), dot_sigma(b + b_p)) + tensor_product(dot_sigma(a_p), dot_sigma(b - b_p));
  return HermitianOperator(std::move(op));
}

ChshSettings chsh_max(const DensityMatrix& rho, const SolverConfig& cfg) {
  if (rho.d_a() != 2 || rho.d_b() != 2) throw DimensionError("chsh_max: requires a two-qubit state");
  const BasisSet pauli = pauli_basis();
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t(i, j) = hs_inner(tensor_product(pauli[i].matrix(), pauli[j].matrix()), rho.matrix()).real();
    }
  }
  // Tr(rho B) = a.T(b+b') + a'.T(b-b'); each pair has a closed-form optimum given the other.
  const Vec3 ex = Vec3::UnitX();
  const Vec3 ey = Vec3::UnitY();
  ChshSettings best{ex, ey, ex, ey, -std::numeric_limits<double>::infinity()};
  for (int s = 0; s < cfg.n_starts; ++s) {
    auto rng = start_rng(cfg.seed, s);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&] { return unit_or(Vec3(gauss(rng), gauss(rng), gauss(rng)), ex); };
    Vec3 a = draw();
    Vec3 a_p = draw();
    Vec3 b = ex;
    Vec3 b_p = ey;
    double prev = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_iters; ++it) {
      const Vec3 u = t.transpose() * a;
      const Vec3 v = t.transpose() * a_p;
      b = unit_or(u + v, b);
      b_p = unit_or(u - v, b_p);
      a = unit_or(t * (b + b_p), a);
      a_p = unit_or(t * (b - b_p), a_p);
      const double value = a.dot(t * (b + b_p)) + a_p.dot(t * (b - b_p));
      if (value - prev < cfg.tol_conv) {
        prev = value;
        break;
      }
      prev = value;
    }
    if (prev > best.value) best = {a, a_p, b, b_p, prev};
  }
  best.value = hs_inner(chsh_operator(best.a, best.a_p, best.b, best.b_p).matrix(), rho.matrix()).real();
  return best;
}

}  // namespace witnesskit

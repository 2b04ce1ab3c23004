#include "witnesskit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace witnesskit {
namespace {

struct Atom {
  ProductTerm term;
  ComplexVector vec;  // psi (x) phi
  RealVector point;   // |vec><vec| - target, flattened
};

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

// Real coordinates in which the dot product is Re Tr(A^dagger B).
RealVector flatten(const ComplexMatrix& m) {
  const Eigen::Index n = m.size();
  RealVector out(2 * n);
  out.head(n) = m.real().reshaped();
  out.tail(n) = m.imag().reshaped();
  return out;
}

Atom make_atom(double weight, ComplexVector psi, ComplexVector phi, const RealVector& target_vec) {
  ComplexVector v = tensor_product(psi, phi);
  RealVector point = flatten(projector(v)) - target_vec;
  return {{weight, std::move(psi), std::move(phi)}, std::move(v), std::move(point)};
}

ComplexMatrix rebuild(const std::vector<Atom>& atoms, Eigen::Index n) {
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (const auto& a : atoms) x.noalias() += a.term.weight * projector(a.vec);
  return x;
}

void renormalize(std::vector<Atom>& atoms) {
  double total = 0.0;
  for (const auto& a : atoms) total += a.term.weight;
  for (auto& a : atoms) a.term.weight /= total;
}

// Minimizer of ||sum_i c_i p_i|| over the affine hull (sum c_i = 1).
RealVector affine_minimizer(const std::vector<Atom>& atoms) {
  const auto k = static_cast<Eigen::Index>(atoms.size());
  RealVector coeff(k);
  if (k == 1) {
    coeff(0) = 1.0;
    return coeff;
  }
  const RealVector& base = atoms.front().point;
  RealMatrix diffs(base.size(), k - 1);
  for (Eigen::Index i = 1; i < k; ++i) diffs.col(i - 1) = atoms[static_cast<std::size_t>(i)].point - base;
  const RealVector beta = diffs.completeOrthogonalDecomposition().solve(-base);
  coeff(0) = 1.0 - beta.sum();
  coeff.tail(k - 1) = beta;
  return coeff;
}

// Minor cycles of the minimum-norm-point method: move the weights to the
// affine minimizer of the active set, dropping atoms whenever the path leaves
// the simplex. The newest atom enters with weight zero.
void corrective_reweight(std::vector<Atom>& atoms, double prune_weight) {
  for (std::size_t cycle = 0; cycle <= atoms.size() + 1 && !atoms.empty(); ++cycle) {
    const RealVector alpha = affine_minimizer(atoms);
    if (alpha.minCoeff() > prune_weight) {
      for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].term.weight = alpha(Eigen::Index(i));
      break;
    }
    double theta = 1.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double lam = atoms[i].term.weight;
      const double a = alpha(Eigen::Index(i));
      if (a <= prune_weight && lam - a > 0.0) theta = std::min(theta, lam / (lam - a));
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      atoms[i].term.weight = theta * alpha(Eigen::Index(i)) + (1.0 - theta) * atoms[i].term.weight;
    }
    std::erase_if(atoms, [&](const Atom& a) { return a.term.weight <= prune_weight; });
  }
  renormalize(atoms);
}

MeasureResult snapshot(const std::vector<Atom>& atoms, int d_a, int d_b, double distance, double gap, int iters,
                       bool converged) {
  MeasureResult r;
  r.distance = distance;
  r.nearest.d_a = d_a;
  r.nearest.d_b = d_b;
  r.nearest.terms.reserve(atoms.size());
  for (const auto& a : atoms) r.nearest.terms.push_back(a.term);
  r.gap_certificate = gap;
  r.iterations = iters;
  r.converged = converged;
  return r;
}

}  // namespace

double hs_distance(const DensityMatrix& r1, const DensityMatrix& r2) {
  if (r1.d_a() != r2.d_a() || r1.d_b() != r2.d_b()) throw DimensionError("hs_distance: dimension mismatch");
  return hs_norm(r1.matrix() - r2.matrix());
}

double hs_measure_isotropic(const IsotropicParams& p) {
  p.validate();
  if (isotropic_separability(p) == Separability::Separable) {
    std::ostringstream msg;
    msg << "hs_measure_isotropic: alpha=" << p.alpha << " is separable for d=" << p.d;
    throw DomainError(msg.str());
  }
  const double d = p.d;
  return std::sqrt(d * d - 1.0) / d * (p.alpha - 1.0 / (d + 1.0));
}

MeasureResult nearest_separable(const DensityMatrix& target, const ProjectionConfig& cfg) {
  const int d_a = target.d_a();
  const int d_b = target.d_b();
  const Eigen::Index n = target.dim();
  const ComplexMatrix& t = target.matrix();
  const RealVector t_vec = flatten(t);

  // Start from the maximally mixed state as a uniform mixture of basis products.
  std::vector<Atom> atoms;
  for (int i = 0; i < d_a; ++i) {
    for (int k = 0; k < d_b; ++k) {
      atoms.push_back(make_atom(1.0 / double(n), ComplexVector::Unit(d_a, i), ComplexVector::Unit(d_b, k), t_vec));
    }
  }
  if (cfg.away_steps) {
    // Corrective mode keeps the active set affinely independent.
    atoms.erase(atoms.begin() + 1, atoms.end());
    atoms.front().term.weight = 1.0;
  }
  ComplexMatrix x = rebuild(atoms, n);

  double gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < cfg.max_outer_iters; ++iter) {
    ComplexMatrix grad = 2.0 * (x - t);
    grad = 0.5 * (grad + grad.adjoint()).eval();
    const HermitianOperator g(grad);

    SolverConfig inner = cfg.inner;
    inner.seed = cfg.inner.seed * 1000003ULL + static_cast<std::uint64_t>(iter);
    // Warm start from the most recently added atoms.
    std::vector<ComplexVector> warm;
    for (auto it = atoms.rbegin(); it != atoms.rend() && warm.size() < 2; ++it) warm.push_back(it->term.phi);
    const ProductMinimum vertex = min_over_separable(g, d_a, d_b, inner, warm);

    gap = hs_inner(x, grad).real() - vertex.value;
    if (gap <= cfg.tol_gap) {
      return snapshot(atoms, d_a, d_b, hs_norm(x - t), std::max(gap, 0.0), iter, true);
    }

    Atom fresh = make_atom(0.0, vertex.psi, vertex.phi, t_vec);
    if (cfg.away_steps) {
      atoms.push_back(std::move(fresh));
      corrective_reweight(atoms, cfg.prune_weight);
    } else {
      // Plain conditional-gradient step with exact line search.
      const ComplexMatrix dir = projector(fresh.vec) - x;
      const double slope = hs_inner(grad, dir).real();
      const double curvature = 2.0 * dir.cwiseAbs2().sum();
      const double gamma = curvature > 0.0 ? std::clamp(-slope / curvature, 0.0, 1.0) : 1.0;
      for (auto& a : atoms) a.term.weight *= (1.0 - gamma);
      fresh.term.weight = gamma;
      atoms.push_back(std::move(fresh));
      std::erase_if(atoms, [&](const Atom& a) { return a.term.weight < cfg.prune_weight; });
      renormalize(atoms);
    }
    x = rebuild(atoms, n);
  }
  MeasureResult partial = snapshot(atoms, d_a, d_b, hs_norm(x - t), gap, iter, false);
  std::ostringstream msg;
  msg << "nearest_separable: gap " << gap << " above " << cfg.tol_gap << " after " << iter << " iterations";
  throw ProjectionError(msg.str(), std::move(partial));
}

double gbi_violation(const DensityMatrix& target, const HermitianOperator& witness_op, const SolverConfig& cfg) {
  if (witness_op.dim() != target.dim()) throw DimensionError("gbi_violation: dimension mismatch");
  const ProductMinimum m = min_over_separable(witness_op, target.d_a(), target.d_b(), cfg);
  return m.value - hs_inner(target.matrix(), witness_op.matrix()).real();
}

BntReport bnt_check(const DensityMatrix& target, const ProjectionConfig& cfg) {
  MeasureResult measure = nearest_separable(target, cfg);
  const DensityMatrix nearest = ensemble_to_density(measure.nearest);
  const WitnessCandidate cand = witness_candidate(nearest, target);
  const double b = gbi_violation(target, cand.op, cfg.inner);
  const double d = measure.distance;
  return {d, b, std::abs(d - b), std::move(measure)};
}

std::vector<TrendRow> infinite_d_trend(std::span<const double> alphas, int d_max) {
  if (d_max < 2) throw DomainError("infinite_d_trend: d_max must be at least 2");
  std::vector<TrendRow> rows;
  for (int d = 2; d <= d_max; ++d) {
    for (double alpha : alphas) {
      const IsotropicParams p{d, alpha};
      p.validate();
      const double thr = separability_threshold(d);
      rows.push_back({d, alpha, thr, alpha > thr ? hs_measure_isotropic(p) : 0.0});
    }
  }
  return rows;
}

}  // namespace witnesskit

#include "hamest/fisher.hpp"

#include <cmath>
#include <string>

#include "hamest/differentiation.hpp"
#include "hamest/errors.hpp"
#include "hamest/tolerances.hpp"

namespace hamest {

QuantumState QuantumState::pure(const ComplexVector& psi) {
  if (psi.size() == 0) throw InvalidState("empty state vector");
  if (!psi.allFinite()) throw NumericalError("state vector has non-finite entries");
  if (std::abs(psi.norm() - 1.0) > tolerances().state_norm) {
    throw InvalidState("state vector is not normalized: norm " + std::to_string(psi.norm()));
  }
  return QuantumState(psi);
}

QuantumState QuantumState::mixed(const ComplexMatrix& rho) {
  const Tolerances& tol = tolerances();
  const HermitianOperator h(rho);
  if (std::abs(rho.trace() - Complex(1.0)) > tol.density_trace) {
    throw InvalidState("density matrix trace is not 1");
  }
  const SpectralData spec = eigendecompose(h, Degeneracy::allow);
  if (spec.min() < -tol.density_positivity) {
    throw InvalidState("density matrix has negative eigenvalue " + std::to_string(spec.min()));
  }
  return QuantumState(h.matrix());
}

Index QuantumState::dim() const noexcept {
  return std::visit([](const auto& d) { return d.rows(); }, data_);
}

const ComplexVector& QuantumState::vector() const {
  if (!is_pure()) throw InvalidState("state is mixed");
  return std::get<ComplexVector>(data_);
}

ComplexMatrix QuantumState::density() const {
  if (is_pure()) {
    const auto& v = std::get<ComplexVector>(data_);
    return v * v.adjoint();
  }
  return std::get<ComplexMatrix>(data_);
}

QuantumState QuantumState::evolved(const ComplexMatrix& u) const {
  if (u.cols() != dim()) throw DimensionMismatch("state evolution: dimension mismatch");
  if (is_pure()) return QuantumState(ComplexVector(u * std::get<ComplexVector>(data_)));
  const auto& rho = std::get<ComplexMatrix>(data_);
  return QuantumState(ComplexMatrix(u * rho * u.adjoint()));
}

Povm::Povm(std::vector<HermitianOperator> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw DimensionMismatch("POVM has no elements");
  if (!labels_.empty() && labels_.size() != elements_.size()) {
    throw DimensionMismatch("POVM label count differs from element count");
  }
  const Tolerances& tol = tolerances();
  const Index d = elements_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].dim() != d) throw DimensionMismatch("POVM elements differ in dimension");
    if (eigendecompose(elements_[i], Degeneracy::allow).min() < -tol.povm_positivity) {
      throw InvalidState("POVM element " + std::to_string(i) + " is not positive");
    }
    sum += elements_[i].matrix();
  }
  if ((sum - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol.povm_completeness) {
    throw InvalidState("POVM elements do not sum to the identity");
  }
}

Povm Povm::projective(const ComplexMatrix& basis) {
  std::vector<HermitianOperator> elements;
  elements.reserve(basis.cols());
  for (Index j = 0; j < basis.cols(); ++j) {
    elements.push_back(HermitianOperator::symmetrized(basis.col(j) * basis.col(j).adjoint()));
  }
  return Povm(std::move(elements));
}

std::string Povm::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_.at(i);
}

ProbDist::ProbDist(std::vector<double> probabilities, std::vector<std::string> labels)
    : p_(std::move(probabilities)), labels_(std::move(labels)) {
  if (p_.empty()) throw DimensionMismatch("empty probability distribution");
  if (!labels_.empty() && labels_.size() != p_.size()) {
    throw DimensionMismatch("label count differs from outcome count");
  }
  const Tolerances& tol = tolerances();
  double sum = 0.0;
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!std::isfinite(p_[i])) throw NumericalError("non-finite probability");
    if (p_[i] < -tol.prob_clip) {
      throw NumericalError("negative probability " + std::to_string(p_[i]) + " at outcome " +
                           std::to_string(i));
    }
    if (p_[i] < 0.0) p_[i] = 0.0;
    sum += p_[i];
  }
  if (std::abs(sum - 1.0) > tol.prob_sum) {
    throw NumericalError("probabilities sum to " + std::to_string(sum));
  }
}

std::string ProbDist::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_.at(i);
}

ProbDist outcome_dist(const QuantumState& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw DimensionMismatch("state and POVM dimensions differ");
  std::vector<double> p(povm.size());
  std::vector<std::string> labels(povm.size());
  if (rho.is_pure()) {
    const ComplexVector& psi = rho.vector();
    for (std::size_t x = 0; x < povm.size(); ++x) {
      p[x] = psi.dot(povm.elements()[x].matrix() * psi).real();
    }
  } else {
    const ComplexMatrix r = rho.density();
    for (std::size_t x = 0; x < povm.size(); ++x) {
      p[x] = (r * povm.elements()[x].matrix()).trace().real();
    }
  }
  for (std::size_t x = 0; x < povm.size(); ++x) labels[x] = povm.label(x);
  return ProbDist(std::move(p), std::move(labels));
}

double fisher_from_samples(const StencilSamples& s, double h) {
  const Tolerances& tol = tolerances();
  const Stencil st{0.0, h};
  const std::size_t n = s.centre.size();
  if (s.minus.size() != n || s.plus.size() != n || s.half_minus.size() != n ||
      s.half_plus.size() != n) {
    throw DimensionMismatch("outcome count changes across the stencil");
  }
  double fi = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double p = s.centre[x];
    const double dp = st.first(s.minus[x], s.plus[x], s.half_minus[x], s.half_plus[x]);
    if (p < tol.fi_min_probability) {
      if (std::abs(dp) > tol.fi_support_derivative) {
        throw SupportBoundary("outcome " + std::to_string(x) + " has probability " +
                              std::to_string(p) + " but derivative " + std::to_string(dp));
      }
      const double d2p = st.second(p, s.minus[x], s.plus[x], s.half_minus[x], s.half_plus[x]);
      fi += std::max(0.0, 2.0 * d2p);
    } else {
      fi += dp * dp / p;
    }
  }
  return fi;
}

double classical_fi(const DistributionFn& dist_fn, double xi, double step) {
  const Stencil st = make_stencil(xi, step);
  StencilSamples s{dist_fn(xi).probabilities(), dist_fn(st.minus()).probabilities(),
                   dist_fn(st.plus()).probabilities(), dist_fn(st.half_minus()).probabilities(),
                   dist_fn(st.half_plus()).probabilities()};
  return fisher_from_samples(s, st.h);
}

HermitianOperator sld(const StateFn& rho_fn, double xi, double step) {
  const Stencil st = make_stencil(xi, step);
  const QuantumState centre = rho_fn(xi);
  const ComplexMatrix drho = st.first<ComplexMatrix>(
      rho_fn(st.minus()).density(), rho_fn(st.plus()).density(),
      rho_fn(st.half_minus()).density(), rho_fn(st.half_plus()).density());

  if (centre.is_pure()) return HermitianOperator::symmetrized(2.0 * drho);

  const SpectralData spec =
      eigendecompose(HermitianOperator(centre.density()), Degeneracy::allow);
  const ComplexMatrix& v = spec.eigenvectors;
  const ComplexMatrix d = v.adjoint() * drho * v;
  ComplexMatrix l = ComplexMatrix::Zero(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      const double denom = spec.eigenvalues(i) + spec.eigenvalues(j);
      if (denom >= 1e-10) l(i, j) = 2.0 * d(i, j) / denom;
    }
  }
  return HermitianOperator::symmetrized(v * l * v.adjoint());
}

double qfi_from_sld(const QuantumState& rho, const HermitianOperator& l) {
  const ComplexMatrix& lm = l.matrix();
  return (rho.density() * lm * lm).trace().real();
}

double qfi_pure(const HamiltonianFamily& fam, const QuantumState& psi0, double xi, double t) {
  const ComplexVector psi = evolution(fam, xi, t).matrix() * psi0.vector();
  return 4.0 * variance(generator_of_evolution(fam, xi, t), psi);
}

double cqfi(const HamiltonianFamily& fam, double xi, double t) {
  const double gap = spectral_gap(generator_of_evolution(fam, xi, t));
  return gap * gap;
}

QuantumState optimal_bc_preparation(const HamiltonianFamily& fam, double xi, double t) {
  const SpectralData spec =
      eigendecompose(generator_of_evolution(fam, xi, t), Degeneracy::allow);
  const ComplexVector target =
      (spec.vector(0) + spec.vector(spec.dim() - 1)).normalized();
  return QuantumState::pure(evolution(fam, xi, t).matrix().adjoint() * target);
}

}  // namespace hamest

#include "hamest/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "hamest/differentiation.hpp"
#include "hamest/errors.hpp"
#include "hamest/tolerances.hpp"

namespace hamest {

namespace {

constexpr int kRegistrationSamples = 20;
constexpr double kDerivativeCheck = 1e-6;

// Sampling window for registration checks on unbounded ranges.
Interval sample_window(const Interval& range) {
  Interval w{std::max(range.lo, -3.0), std::min(range.hi, 3.0)};
  if (w.lo > w.hi) w = range;
  return w;
}

HermitianOperator checked_generator(const ComplexMatrix& g, const char* what) {
  const double scale = std::max(1.0, g.norm());
  const double asym = (g - g.adjoint()).norm();
  if (asym > tolerances().generator_hermitian * scale) {
    throw NumericalError(std::string(what) + " is not Hermitian: ||g - g^dagger||_F = " +
                         std::to_string(asym));
  }
  return HermitianOperator::symmetrized(g);
}

// sin(x)/x, accurate near 0.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void require_stencil(const HamiltonianFamily& fam, const Stencil& s) {
  if (!fam.range().contains(s.minus()) || !fam.range().contains(s.plus())) {
    throw OutOfRange("finite-difference stencil [" + std::to_string(s.minus()) + ", " +
                     std::to_string(s.plus()) + "] leaves the parameter range of " + fam.name());
  }
}

}  // namespace

HamiltonianFamily::HamiltonianFamily(std::string name, Index dim, Interval range,
                                     MatrixFn evaluate, MatrixFn derivative)
    : name_(std::move(name)),
      dim_(dim),
      range_(range),
      evaluate_(std::move(evaluate)),
      derivative_(std::move(derivative)) {
  if (dim_ < 1) throw DimensionMismatch("family " + name_ + ": dimension must be >= 1");
  if (!(range_.lo < range_.hi)) throw OutOfRange("family " + name_ + ": empty parameter range");
  if (!evaluate_) throw Error("family " + name_ + ": missing evaluator");

  const Interval window = sample_window(range_);
  Rng rng(0x5eed0f);
  std::uniform_real_distribution<double> uniform(window.lo, window.hi);
  for (int k = 0; k < kRegistrationSamples; ++k) {
    const double xi = uniform(rng);
    const HermitianOperator h = this->evaluate(xi);
    if (h.dim() != dim_) throw DimensionMismatch("family " + name_ + ": evaluator dimension");
    if (!derivative_) continue;
    const Stencil s = make_stencil(xi, 0.0);
    if (!range_.contains(s.minus()) || !range_.contains(s.plus())) continue;
    const ComplexMatrix fd = s.first<ComplexMatrix>(
        evaluate_(s.minus()), evaluate_(s.plus()), evaluate_(s.half_minus()),
        evaluate_(s.half_plus()));
    const ComplexMatrix exact = this->derivative(xi).matrix();
    if ((exact - fd).norm() > kDerivativeCheck * std::max(1.0, exact.norm())) {
      throw Error("family " + name_ + ": analytic derivative disagrees with finite differences at xi=" +
                  std::to_string(xi));
    }
  }
}

void HamiltonianFamily::require_in_range(double xi) const {
  if (!range_.contains(xi)) {
    throw OutOfRange("xi=" + std::to_string(xi) + " outside the parameter range of " + name_);
  }
}

HermitianOperator HamiltonianFamily::evaluate(double xi) const {
  require_in_range(xi);
  return HermitianOperator(evaluate_(xi));
}

HermitianOperator HamiltonianFamily::derivative(double xi) const {
  if (!derivative_) throw Error("family " + name_ + " has no analytic derivative");
  require_in_range(xi);
  return HermitianOperator(derivative_(xi));
}

EnergyBasis energy_basis(const HamiltonianFamily& fam, double xi) {
  const SpectralData spec = eigendecompose(fam.evaluate(xi));
  return EnergyBasis{spec.eigenvalues.reverse(), spec.eigenvectors.rowwise().reverse()};
}

UnitaryOperator evolution(const HamiltonianFamily& fam, double xi, double t) {
  return herm_exp(fam.evaluate(xi), -t);
}

UnitaryOperator diagonalizer(const HamiltonianFamily& fam, double xi) {
  return UnitaryOperator(ComplexMatrix(energy_basis(fam, xi).vectors.adjoint()));
}

HermitianOperator generator_of_evolution_fd(const HamiltonianFamily& fam, double xi, double t,
                                            double step) {
  const Stencil s = make_stencil(xi, step);
  require_stencil(fam, s);
  auto u = [&](double x) { return evolution(fam, x, t).matrix(); };
  const ComplexMatrix du = s.first<ComplexMatrix>(u(s.minus()), u(s.plus()), u(s.half_minus()),
                                                  u(s.half_plus()));
  return checked_generator(kI * du * u(xi).adjoint(), "generator of U_t");
}

HermitianOperator generator_of_evolution(const HamiltonianFamily& fam, double xi, double t,
                                         double step) {
  if (!fam.has_derivative()) return generator_of_evolution_fd(fam, xi, t, step);

  // ∂U = V (B ∘ F) V† with B = V† ∂H V and the divided differences
  // F_jk = (e^{−itλ_j} − e^{−itλ_k}) / (λ_j − λ_k).
  const SpectralData spec = eigendecompose(fam.evaluate(xi), Degeneracy::allow);
  const ComplexMatrix& v = spec.eigenvectors;
  const ComplexMatrix b = v.adjoint() * fam.derivative(xi).matrix() * v;
  const Index d = spec.dim();
  ComplexMatrix weighted(d, d);
  ComplexVector phase(d);
  for (Index j = 0; j < d; ++j) {
    phase(j) = std::exp(-kI * (t * spec.eigenvalues(j)));
    for (Index k = 0; k < d; ++k) {
      const double lj = spec.eigenvalues(j), lk = spec.eigenvalues(k);
      const Complex f = -kI * t * std::exp(-kI * (0.5 * t * (lj + lk))) * sinc(0.5 * t * (lj - lk));
      weighted(j, k) = b(j, k) * f;
    }
  }
  // i ∂U U† in the eigenbasis: U† = V diag(conj phase) V†.
  const ComplexMatrix g = kI * v * weighted * phase.conjugate().asDiagonal() * v.adjoint();
  return checked_generator(g, "generator of U_t");
}

HermitianOperator generator_of_diagonalizer_fd(const HamiltonianFamily& fam, double xi,
                                               double step) {
  const Stencil s = make_stencil(xi, step);
  require_stencil(fam, s);
  const EnergyBasis ref = energy_basis(fam, xi);
  const double min_overlap = tolerances().gauge_overlap;

  // S at a nearby point with each eigenvector rephased onto the reference.
  auto transported = [&](double x) -> ComplexMatrix {
    EnergyBasis eb = energy_basis(fam, x);
    for (Index j = 0; j < eb.vectors.cols(); ++j) {
      const Complex overlap = ref.vectors.col(j).dot(eb.vectors.col(j));
      const double mag = std::abs(overlap);
      if (mag < min_overlap) {
        throw GaugeMatchFailure("eigenvector " + std::to_string(j) + " at xi=" +
                                std::to_string(x) + " has overlap " + std::to_string(mag) +
                                " with the reference; step too large or level crossing");
      }
      eb.vectors.col(j) *= std::conj(overlap) / mag;
    }
    return eb.vectors.adjoint();
  };

  const ComplexMatrix ds =
      s.first<ComplexMatrix>(transported(s.minus()), transported(s.plus()),
                             transported(s.half_minus()), transported(s.half_plus()));
  return checked_generator(kI * ds * ref.vectors, "generator of S_xi");
}

HermitianOperator generator_of_diagonalizer(const HamiltonianFamily& fam, double xi,
                                            double step) {
  if (!fam.has_derivative()) return generator_of_diagonalizer_fd(fam, xi, step);

  // (∂S S†)_jk = ⟨E_j|∂H|E_k⟩ / (E_j − E_k) off the diagonal, 0 on it.
  const EnergyBasis eb = energy_basis(fam, xi);
  const ComplexMatrix b = eb.vectors.adjoint() * fam.derivative(xi).matrix() * eb.vectors;
  const Index d = eb.energies.size();
  ComplexMatrix g = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < d; ++k)
      if (j != k) g(j, k) = kI * b(j, k) / (eb.energies(j) - eb.energies(k));
  return checked_generator(g, "generator of S_xi");
}

GeneratorPair generators(const HamiltonianFamily& fam, double xi, double t) {
  return GeneratorPair{generator_of_evolution(fam, xi, t), generator_of_diagonalizer(fam, xi), xi,
                       t};
}

}  // namespace hamest

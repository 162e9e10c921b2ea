#pragma once

// Classical Fisher information of a measurement, the symmetric logarithmic
// derivative, pure-state QFI via the local generator and the channel QFI via
// its spectral gap.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hamest/hamiltonian.hpp"
#include "hamest/linalg.hpp"

namespace hamest {

/// Pure (unit vector) or mixed (density matrix) state.
class QuantumState {
 public:
  static QuantumState pure(const ComplexVector& psi);
  static QuantumState mixed(const ComplexMatrix& rho);

  bool is_pure() const noexcept { return std::holds_alternative<ComplexVector>(data_); }
  Index dim() const noexcept;
  /// Throws InvalidState for mixed states.
  const ComplexVector& vector() const;
  ComplexMatrix density() const;
  QuantumState evolved(const ComplexMatrix& u) const;

 private:
  explicit QuantumState(std::variant<ComplexVector, ComplexMatrix> d) : data_(std::move(d)) {}
  std::variant<ComplexVector, ComplexMatrix> data_;
};

/// Positive operators summing to the identity.  Empty labels mean "0", "1", ….
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> elements, std::vector<std::string> labels = {});

  /// Rank-1 projectors onto the columns of an orthonormal basis.
  static Povm projective(const ComplexMatrix& basis);

  std::size_t size() const noexcept { return elements_.size(); }
  Index dim() const noexcept { return elements_.front().dim(); }
  const std::vector<HermitianOperator>& elements() const noexcept { return elements_; }
  std::string label(std::size_t i) const;

 private:
  std::vector<HermitianOperator> elements_;
  std::vector<std::string> labels_;
};

/// Probability vector; entries in [−1e-12, 0) are clipped to 0.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> probabilities, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probabilities() const noexcept { return p_; }
  std::string label(std::size_t i) const;

 private:
  std::vector<double> p_;
  std::vector<std::string> labels_;
};

/// p_x = tr[ρ Π_x].
ProbDist outcome_dist(const QuantumState& rho, const Povm& povm);

using DistributionFn = std::function<ProbDist(double)>;
using StateFn = std::function<QuantumState(double)>;

/// Distributions sampled on a Richardson stencil around ξ.
struct StencilSamples {
  std::vector<double> centre, minus, plus, half_minus, half_plus;
};

/// Σ_x (∂p_x)²/p_x from stencil samples.  Outcomes with p_x < 1e-12 contribute
/// the limit 2·∂²p_x of a quadratic zero, or raise SupportBoundary when
/// |∂p_x| > 1e-6.
double fisher_from_samples(const StencilSamples& samples, double h);

/// Classical Fisher information of ξ ↦ dist_fn(ξ) at ξ (central differences).
double classical_fi(const DistributionFn& dist_fn, double xi, double step = 0.0);

/// Symmetric logarithmic derivative L with ∂ρ = ½{ρ, L}.  Pure states use
/// L = 2∂ρ (= 2|∂ψ⟩⟨ψ| + 2|ψ⟩⟨∂ψ|); mixed states are solved in the eigenbasis
/// of ρ, dropping pairs with λ_i + λ_j < 1e-10.
HermitianOperator sld(const StateFn& rho_fn, double xi, double step = 0.0);

/// tr[ρ L²].
double qfi_from_sld(const QuantumState& rho, const HermitianOperator& l);

/// 4 Var_{ψ_ξ} 𝔤_U with ψ_ξ = U_t ψ_0.
double qfi_pure(const HamiltonianFamily& fam, const QuantumState& psi0, double xi, double t);

/// Channel QFI σ(𝔤_U)².
double cqfi(const HamiltonianFamily& fam, double xi, double t);

/// U_t† (v_max + v_min)/√2 for the extremal eigenvectors of 𝔤_U.
QuantumState optimal_bc_preparation(const HamiltonianFamily& fam, double xi, double t);

}  // namespace hamest

#pragma once

// Parametrized Hamiltonians ξ ↦ H_ξ (ħ = 1), the encoding U_t = exp(−itH_ξ),
// the diagonalizing similarity S_ξ, and the local generators
// 𝔤_U = i ∂_ξU U† and 𝔤_S = i ∂_ξS S†.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hamest/linalg.hpp"

namespace hamest {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Immutable parametrized Hamiltonian.  When an analytic ∂_ξH is supplied it is
/// checked against central differences of `evaluate` at construction.
class HamiltonianFamily {
 public:
  using MatrixFn = std::function<ComplexMatrix(double)>;

  HamiltonianFamily(std::string name, Index dim, Interval range, MatrixFn evaluate,
                    MatrixFn derivative = nullptr);

  const std::string& name() const noexcept { return name_; }
  Index dim() const noexcept { return dim_; }
  const Interval& range() const noexcept { return range_; }
  bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }

  HermitianOperator evaluate(double xi) const;
  HermitianOperator derivative(double xi) const;

  /// Throws OutOfRange unless ξ ∈ Ξ.
  void require_in_range(double xi) const;

 private:
  std::string name_;
  Index dim_;
  Interval range_;
  MatrixFn evaluate_;
  MatrixFn derivative_;
};

/// Energies E_0 < … < E_{d−1} with their gauge-fixed eigenvectors as columns.
struct EnergyBasis {
  RealVector energies;
  ComplexMatrix vectors;
};

EnergyBasis energy_basis(const HamiltonianFamily& fam, double xi);

/// U_t = exp(−itH_ξ).
UnitaryOperator evolution(const HamiltonianFamily& fam, double xi, double t);

/// S_ξ with ⟨j|S_ξ|k⟩ = ⟨E_j|k⟩ (row j is the conjugated j-th eigenvector,
/// energies increasing), so S_ξ H_ξ S_ξ† is diagonal.
UnitaryOperator diagonalizer(const HamiltonianFamily& fam, double xi);

/// 𝔤_U.  Uses the divided-difference formula for ∂_ξU when the family has an
/// analytic derivative, otherwise Richardson central differences.  step <= 0
/// selects the default step.
HermitianOperator generator_of_evolution(const HamiltonianFamily& fam, double xi, double t,
                                         double step = 0.0);

/// 𝔤_S in the parallel-transport gauge (vanishing diagonal).  Analytic
/// families use first-order perturbation theory; others difference
/// eigenvectors matched and rephased against the reference at ξ.
HermitianOperator generator_of_diagonalizer(const HamiltonianFamily& fam, double xi,
                                            double step = 0.0);

/// Same as above but always by finite differences, regardless of the family.
HermitianOperator generator_of_diagonalizer_fd(const HamiltonianFamily& fam, double xi,
                                               double step = 0.0);
/// Same as generator_of_evolution but always by finite differences.
HermitianOperator generator_of_evolution_fd(const HamiltonianFamily& fam, double xi, double t,
                                            double step = 0.0);

struct GeneratorPair {
  HermitianOperator g_u;
  HermitianOperator g_s;
  double at_xi;
  double at_t;
};

GeneratorPair generators(const HamiltonianFamily& fam, double xi, double t);

namespace families {

/// H_ξ = ω(cos ξ σ_z + sin ξ σ_x).
HamiltonianFamily qubit_angle(double omega = 1.0);

/// H_ξ = −ω σ_z + ξ σ_x.
HamiltonianFamily qubit_component(double omega = 1.0);

struct NvParameters {
  double mu = 1.0;
  double zero_field = 0.0;  // D
  double strain = 0.05;     // E

  /// D = π·1.44, E = π·5e-5 (GHz units), μ = 1.
  static NvParameters ghz_preset();
};

/// H = μ ξ S_z + D S_z² + E(S_x² − S_y²) with the spin matrices
/// S_x = √2[[0,1,0],[1,0,1],[0,1,0]], S_y = √2 i[[0,−1,0],[1,0,−1],[0,1,0]],
/// S_z = 2 diag(1,0,−1).
HamiltonianFamily nv_center(const NvParameters& params = {});

/// H_ξ = ξ G.
HamiltonianFamily phase_parameter(const HermitianOperator& generator);

namespace spin1 {
ComplexMatrix sx();
ComplexMatrix sy();
ComplexMatrix sz();
}  // namespace spin1

/// Parameters accepted by `by_name`; unset fields take the family defaults.
struct FamilyParameters {
  std::optional<double> omega;
  std::optional<double> mu;
  std::optional<double> zero_field;
  std::optional<double> strain;
  std::optional<std::string> preset;
  std::optional<ComplexMatrix> generator;
};

/// Registry lookup: "qubit-angle", "qubit-component", "nv-center", "phase-parameter".
HamiltonianFamily by_name(std::string_view name, const FamilyParameters& params = {});

}  // namespace families

}  // namespace hamest

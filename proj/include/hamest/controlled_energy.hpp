#pragma once

// Controlled energy measurements ℳ_{V,ξ} (POVM V† P_{E_j,ξ} V), the auxiliary
// model 𝒰_V = S_ξ V U_t, the bound 𝒢_ξ ≤ (σ[𝔤_U] + σ[𝔤_S])² with its
// saturating control and preparation, and a multistart simplex search that
// maximizes the Fisher information directly.

#include <cstdint>
#include <vector>

#include "hamest/fisher.hpp"
#include "hamest/hamiltonian.hpp"
#include "hamest/linalg.hpp"

namespace hamest {

/// Outcome j ↦ V† P_{E_j,ξ} V, energies increasing, labels "0" … "d−1".
Povm cem_povm(const HamiltonianFamily& fam, double xi, const UnitaryOperator& v);

/// S_ξ V U_t.
UnitaryOperator aux_encoding(const HamiltonianFamily& fam, double xi, double t,
                             const UnitaryOperator& v);

/// Fisher information of a controlled energy measurement, evaluated on the
/// auxiliary model for many (V, ψ_0) at one (ξ, t).  S_ξ' U_t(ξ') is cached at
/// the stencil points, so each evaluation is a few d×d products.
class AuxFisherEvaluator {
 public:
  AuxFisherEvaluator(const HamiltonianFamily& fam, double xi, double t, double step = 0.0);

  double operator()(const ComplexMatrix& v, const QuantumState& psi0) const;
  double operator()(const ComplexMatrix& v, const ComplexVector& psi0) const;

  Index dim() const noexcept { return dim_; }

 private:
  std::vector<double> probabilities(std::size_t point, const ComplexMatrix& v,
                                    const ComplexMatrix& rho) const;
  std::vector<double> probabilities(std::size_t point, const ComplexMatrix& v,
                                    const ComplexVector& psi) const;

  Index dim_;
  double h_;
  // centre, minus, plus, half_minus, half_plus
  std::vector<ComplexMatrix> s_;
  std::vector<ComplexMatrix> u_;
};

/// ℱ_ξ(ρ_0, ℳ_{V,ξ}) with V and ρ_0 held fixed under differentiation.
double aux_fi(const HamiltonianFamily& fam, double xi, double t, const UnitaryOperator& v,
              const QuantumState& psi0, double step = 0.0);

struct GapSumMaximizer {
  UnitaryOperator u;
  double value;
};

/// U* = R_1† R_2 maximizing σ(M_1 + U M_2 U†); value σ(M_1) + σ(M_2).
GapSumMaximizer gap_sum_maximizer(const HermitianOperator& m1, const HermitianOperator& m2);

/// R with R M R† = diag(λ_1 ≥ … ≥ λ_d); ties ordered lexicographically by the
/// gauge-fixed eigenvectors.
UnitaryOperator decreasing_diagonalizer(const HermitianOperator& m);

/// |⟨j|v_1⟩| = |⟨j|v_2⟩| for every j, within `tolerance`.
bool equioriented(const ComplexVector& v1, const ComplexVector& v2, double tolerance);
bool equioriented(const ComplexVector& v1, const ComplexVector& v2);

struct GBoundReport {
  double g_bound = 0.0;  // (σ[𝔤_U] + σ[𝔤_S])²
  double cqfi = 0.0;     // σ[𝔤_U]²
  double delta = 0.0;    // g_bound − cqfi
  double sigma_u = 0.0;
  double sigma_s = 0.0;
  bool equioriented = false;
  UnitaryOperator v_opt = UnitaryOperator::identity(1);
  QuantumState psi0_opt = QuantumState::pure(ComplexVector::Ones(1));
  double fi_at_optimum = 0.0;
};

/// Bound, optimal control V_opt = S_ξ† R_1† R_2 and preparation
/// (S_ξ V_opt U_t)† (v_max(𝔤_S) + e^{iφ} v_min(𝔤_S))/√2.
GBoundReport g_bound(const HamiltonianFamily& fam, double xi, double t, double phi = 0.0);

struct MaximizeSettings {
  int restarts = 8;  // random starts on top of the two warm starts
  std::uint64_t seed = 1;
  int max_iterations = 2000;
  double initial_step = 0.2;
};

struct FiMaximum {
  UnitaryOperator control;
  QuantumState preparation;
  double value;
  double warm_start_value;    // best over the analytic and Braunstein–Caves starts
  double random_start_value;  // best over random starts only (−1 when none)
};

/// Maximizes the controlled-energy Fisher information over V = V_ref·exp(iA)
/// and pure ψ_0.  Deterministic for a given seed.
FiMaximum maximize_fi(const HamiltonianFamily& fam, double xi, double t,
                      const MaximizeSettings& settings = {});

/// Local chart parametrizations shared by the optimizers.
namespace chart {
/// d² reals → Hermitian A (diagonal first, then upper-triangle re/im pairs).
HermitianOperator hermitian_from(std::span<const double> coords, Index dim);
/// Unitary Q with Q e_0 ∝ psi.
ComplexMatrix completion(const ComplexVector& psi);
/// 2d−2 reals → Q · normalize(e_0 + Σ_k (c_{2k−2} + i c_{2k−1}) e_k).
ComplexVector state_from(std::span<const double> coords, const ComplexMatrix& q);
}  // namespace chart

}  // namespace hamest

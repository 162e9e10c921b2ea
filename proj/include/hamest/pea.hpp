#pragma once

// Realistic controlled energy measurement: phase estimation with n control
// qubits, where each controlled evolution is replaced by m repetitions of the
// universal-controllization channel Γ.  Closed-form outcome distributions and
// an independent density-matrix simulation of the same circuit.

#include "hamest/controlled_energy.hpp"
#include "hamest/fisher.hpp"
#include "hamest/hamiltonian.hpp"
#include "hamest/linalg.hpp"

namespace hamest {

struct PeaConfig {
  int n = 1;                 // control qubits
  int m = 1;                 // controllization subintervals per unit application
  double tau = 0.1;          // measurement timescale
  UnitaryOperator control = UnitaryOperator::identity(1);
  QuantumState preparation = QuantumState::pure(ComplexVector::Ones(1));
  double interrogation_t = 0.0;

  /// Throws Error unless n ≥ 1, m ≥ 1, τ > 0 and dimensions agree with `dim`.
  void validate(Index dim) const;
};

/// (1/d) tr U = a e^{iφ}.
struct ControllizationFactors {
  double a;
  double phi;
};

ControllizationFactors controllization_factors(const UnitaryOperator& u);

/// ε_m = [tr(U_sub)/d]^m − 1.
Complex controllization_error(const UnitaryOperator& u_sub, int m);

/// C_U = |0⟩⟨0| ⊗ 𝕀 + |1⟩⟨1| ⊗ U (control first).
UnitaryOperator controlled_evolution(const UnitaryOperator& u);

/// Controlled SWAP on control ⊗ system ⊗ ancilla, swapping system and ancilla
/// when the control is |0⟩.
ComplexMatrix controlled_swap(Index dim);

/// W = C_SWAP (𝕀_2 ⊗ U ⊗ 𝕀_d) C_SWAP.
ComplexMatrix controllization_gadget(const UnitaryOperator& u_sub);

/// Γ[ρ] = tr_a(W (ρ ⊗ 𝕀_d/d) W†) for ρ on control ⊗ system.
ComplexMatrix controllization_step(const ComplexMatrix& rho, const UnitaryOperator& u_sub);

/// Kraus operators of Γ on control ⊗ system, read off W with the ancilla
/// basis: K_ab = d^{−1/2} (𝕀 ⊗ ⟨a|) W (𝕀 ⊗ |b⟩).
std::vector<ComplexMatrix> controllization_kraus(const UnitaryOperator& u_sub);

/// Energies E_j (increasing) and populations ⟨E_j|V U_t ρ_0 U_t† V†|E_j⟩.
struct EnergyPopulations {
  RealVector energies;
  std::vector<double> populations;
};

EnergyPopulations energy_populations(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg);

/// Squared Dirichlet (Fejér) kernel form over Q = 0 … 2ⁿ−1.
std::vector<double> fejer_distribution(const EnergyPopulations& ep, int n, double tau);

/// Product-of-cosines form with damping a and phase φ.
std::vector<double> controllized_distribution(const EnergyPopulations& ep, int n, int m,
                                              double tau, const ControllizationFactors& f);

/// Outcome labels are the binary strings q_n … q_1 of Q = q_1 + 2 q_2 + ….
ProbDist pea_probs_ideal(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg);
ProbDist pea_probs_controllized(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg);

enum class ControlledGate { controllized, exact };

struct CircuitOptions {
  ControlledGate gate = ControlledGate::controllized;
  bool check_invariants = true;  // trace 1 and positivity after every layer
};

/// Largest register 2ⁿ·d accepted by the density-matrix simulator.
inline constexpr Index kMaxCircuitDim = 4096;

/// Dense density-matrix simulation of the circuit; returns the distribution of
/// the control register.  Throws ResourceLimit when 2ⁿ·d > kMaxCircuitDim.
ProbDist pea_simulate_circuit(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg,
                              const CircuitOptions& options = {});

/// Fisher information of q ↦ p_{q,ξ} (controllized form) with V, ρ_0, τ fixed.
double pea_fi(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg, double step = 0.0);

struct PeaMaximum {
  UnitaryOperator control;
  QuantumState preparation;
  double value;
  double warm_start_value;  // pea_fi at the balanced analytic optimum, before refinement
};

/// Maximizes pea_fi over the control V and pure preparation ψ_0 for fixed
/// (n, m, τ, t).  The warm start is the analytic optimum with relative phase
/// φ = π/2, which spreads the population evenly over the two extremal levels;
/// random restarts follow `settings`.
PeaMaximum maximize_pea_fi(const HamiltonianFamily& fam, double xi, double t, int n, int m,
                           double tau, const MaximizeSettings& settings = {});

}  // namespace hamest

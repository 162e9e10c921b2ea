#pragma once

// Dense complex linear algebra used by every other module: checked operator
// types, ordered and gauge-fixed eigendecomposition, exponentials, tensor
// products and partial traces.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace hamest {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr Complex kI{0.0, 1.0};

/// Square complex matrix equal to its adjoint.  Construction checks the
/// invariant and then symmetrizes, so small rounding asymmetries never leak.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m);
  HermitianOperator(const ComplexMatrix& m, double tolerance);

  static HermitianOperator zero(Index dim);
  /// Projects onto the Hermitian part without checking.
  static HermitianOperator symmetrized(const ComplexMatrix& m);

  Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(const ComplexMatrix& m);
  UnitaryOperator(const ComplexMatrix& m, double tolerance);

  static UnitaryOperator identity(Index dim);

  Index dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  UnitaryOperator adjoint() const;

  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

 private:
  struct Unchecked {};
  UnitaryOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Eigenvalues sorted decreasingly; column i of `eigenvectors` pairs with
/// eigenvalues[i].  Each eigenvector has its largest-magnitude component
/// (lowest index on ties) real and non-negative.
struct SpectralData {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Index dim() const noexcept { return eigenvalues.size(); }
  ComplexVector vector(Index i) const { return eigenvectors.col(i); }
  double max() const { return eigenvalues(0); }
  double min() const { return eigenvalues(dim() - 1); }
};

enum class Degeneracy { reject, allow };

/// Throws DegenerateSpectrum under Degeneracy::reject when two eigenvalues are
/// closer than tolerances().degeneracy · max(1, spectral radius).
SpectralData eigendecompose(const HermitianOperator& m, Degeneracy policy = Degeneracy::reject);

/// λ_max − λ_min (never negative).
double spectral_gap(const HermitianOperator& m);

/// exp(i · scale · M), computed in the eigenbasis of M.
UnitaryOperator herm_exp(const HermitianOperator& m, double scale);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every subsystem not listed in `keep`.  Subsystems are ordered
/// as in `dims` (first = most significant); kept subsystems stay in order.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep);

/// Rotates the phase of v so its largest-magnitude entry is real and >= 0.
void fix_gauge(Eigen::Ref<ComplexVector> v);

/// Variance ⟨ψ|M²|ψ⟩ − ⟨ψ|M|ψ⟩² for a unit vector ψ.
double variance(const HermitianOperator& m, const ComplexVector& psi);

/// (G + G†)/2 with standard normal real and imaginary parts.
HermitianOperator random_hermitian(Index dim, Rng& rng);
/// Haar-random unitary: QR of a Ginibre matrix with the phases of diag(R) removed.
UnitaryOperator random_unitary(Index dim, Rng& rng);
/// Haar-random unit vector.
ComplexVector random_state(Index dim, Rng& rng);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

}  // namespace hamest

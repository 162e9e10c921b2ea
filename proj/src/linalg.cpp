#include "hamest/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hamest/errors.hpp"
#include "hamest/tolerances.hpp"

namespace hamest {

namespace {

void require_square_finite(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m)
    : HermitianOperator(m, tolerances().hermitian) {}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double tolerance) {
  require_square_finite(m, "HermitianOperator");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tolerance * scale) {
    throw NotHermitian("matrix is not Hermitian: max |M - M^dagger| = " + std::to_string(asym));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::zero(Index dim) {
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square_finite(m, "HermitianOperator");
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

UnitaryOperator::UnitaryOperator(const ComplexMatrix& m)
    : UnitaryOperator(m, tolerances().unitary) {}

UnitaryOperator::UnitaryOperator(const ComplexMatrix& m, double tolerance) {
  require_square_finite(m, "UnitaryOperator");
  const ComplexMatrix defect = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  if (defect.norm() > tolerance) {
    throw NotUnitary("matrix is not unitary: ||U^dagger U - I||_F = " +
                     std::to_string(defect.norm()));
  }
  m_ = m;
}

UnitaryOperator UnitaryOperator::identity(Index dim) {
  return UnitaryOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

UnitaryOperator UnitaryOperator::adjoint() const {
  return UnitaryOperator(ComplexMatrix(m_.adjoint()), Unchecked{});
}

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("unitary product: dimension mismatch");
  return UnitaryOperator(ComplexMatrix(a.m_ * b.m_), UnitaryOperator::Unchecked{});
}

void fix_gauge(Eigen::Ref<ComplexVector> v) {
  Index best = 0;
  double best_mag = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best_mag + 1e-12) {
      best = i;
      best_mag = mag;
    }
  }
  if (best_mag <= 0.0) return;
  v *= std::conj(v(best)) / best_mag;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

SpectralData eigendecompose(const HermitianOperator& m, Degeneracy policy) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  const Index d = m.dim();
  SpectralData out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Index i = 0; i < d; ++i) fix_gauge(out.eigenvectors.col(i));

  if (policy == Degeneracy::reject && d > 1) {
    const double radius = out.eigenvalues.cwiseAbs().maxCoeff();
    const double threshold = tolerances().degeneracy * std::max(1.0, radius);
    double min_gap = std::numeric_limits<double>::infinity();
    for (Index i = 0; i + 1 < d; ++i) {
      min_gap = std::min(min_gap, out.eigenvalues(i) - out.eigenvalues(i + 1));
    }
    if (min_gap < threshold) throw DegenerateSpectrum(min_gap, threshold);
  }
  return out;
}

double spectral_gap(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");
  const auto& w = solver.eigenvalues();
  return w(w.size() - 1) - w(0);
}

UnitaryOperator herm_exp(const HermitianOperator& m, double scale) {
  const SpectralData spec = eigendecompose(m, Degeneracy::allow);
  ComplexVector phases(spec.dim());
  for (Index i = 0; i < spec.dim(); ++i) {
    phases(i) = std::exp(kI * (scale * spec.eigenvalues(i)));
  }
  const ComplexMatrix& v = spec.eigenvectors;
  return UnitaryOperator(ComplexMatrix(v * phases.asDiagonal() * v.adjoint()));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const Index> dims,
                            std::span<const Index> keep) {
  if (dims.empty() || keep.empty()) throw DimensionMismatch("partial_trace: empty subsystem list");
  const Index total = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
  if (rho.rows() != total || rho.cols() != total) {
    throw DimensionMismatch("partial_trace: matrix is " + std::to_string(rho.rows()) + "x" +
                            std::to_string(rho.cols()) + " but subsystems multiply to " +
                            std::to_string(total));
  }
  const Index n = static_cast<Index>(dims.size());
  std::vector<bool> kept(n, false);
  for (Index k : keep) {
    if (k < 0 || k >= n || kept[k]) throw DimensionMismatch("partial_trace: invalid keep index");
    kept[k] = true;
  }

  // Split every full index into (kept index, traced index).
  std::vector<Index> kept_of(total), traced_of(total);
  Index kept_dim = 1;
  for (Index s = 0; s < n; ++s)
    if (kept[s]) kept_dim *= dims[s];
  for (Index f = 0; f < total; ++f) {
    Index rem = f, k = 0, t = 0, kmul = 1, tmul = 1;
    for (Index s = n - 1; s >= 0; --s) {
      const Index digit = rem % dims[s];
      rem /= dims[s];
      if (kept[s]) {
        k += digit * kmul;
        kmul *= dims[s];
      } else {
        t += digit * tmul;
        tmul *= dims[s];
      }
    }
    kept_of[f] = k;
    traced_of[f] = t;
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (Index f = 0; f < total; ++f) {
    for (Index g = 0; g < total; ++g) {
      if (traced_of[f] == traced_of[g]) out(kept_of[f], kept_of[g]) += rho(f, g);
    }
  }
  return out;
}

double variance(const HermitianOperator& m, const ComplexVector& psi) {
  const ComplexVector mpsi = m.matrix() * psi;
  const double mean = psi.dot(mpsi).real();
  return mpsi.squaredNorm() - mean * mean;
}

namespace {

ComplexMatrix ginibre(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

}  // namespace

HermitianOperator random_hermitian(Index dim, Rng& rng) {
  if (dim < 1) throw DimensionMismatch("random_hermitian: dim must be >= 1");
  return HermitianOperator::symmetrized(ginibre(dim, rng));
}

UnitaryOperator random_unitary(Index dim, Rng& rng) {
  if (dim < 1) throw DimensionMismatch("random_unitary: dim must be >= 1");
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(dim, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return UnitaryOperator(q);
}

ComplexVector random_state(Index dim, Rng& rng) {
  if (dim < 1) throw DimensionMismatch("random_state: dim must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v.normalized();
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace hamest

#include "hamest/controlled_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "hamest/differentiation.hpp"
#include "hamest/errors.hpp"
#include "hamest/nelder_mead.hpp"
#include "hamest/tolerances.hpp"

namespace hamest {

Povm cem_povm(const HamiltonianFamily& fam, double xi, const UnitaryOperator& v) {
  if (v.dim() != fam.dim()) throw DimensionMismatch("control dimension differs from the family");
  const EnergyBasis eb = energy_basis(fam, xi);
  return Povm::projective(v.matrix().adjoint() * eb.vectors);
}

UnitaryOperator aux_encoding(const HamiltonianFamily& fam, double xi, double t,
                             const UnitaryOperator& v) {
  return diagonalizer(fam, xi) * v * evolution(fam, xi, t);
}

AuxFisherEvaluator::AuxFisherEvaluator(const HamiltonianFamily& fam, double xi, double t,
                                       double step)
    : dim_(fam.dim()) {
  const Stencil st = make_stencil(xi, step);
  h_ = st.h;
  for (double x : {xi, st.minus(), st.plus(), st.half_minus(), st.half_plus()}) {
    s_.push_back(diagonalizer(fam, x).matrix());
    u_.push_back(evolution(fam, x, t).matrix());
  }
}

std::vector<double> AuxFisherEvaluator::probabilities(std::size_t k, const ComplexMatrix& v,
                                                      const ComplexVector& psi) const {
  const ComplexVector amp = s_[k] * (v * (u_[k] * psi));
  std::vector<double> p(dim_);
  for (Index j = 0; j < dim_; ++j) p[j] = std::norm(amp(j));
  return p;
}

std::vector<double> AuxFisherEvaluator::probabilities(std::size_t k, const ComplexMatrix& v,
                                                      const ComplexMatrix& rho) const {
  const ComplexMatrix enc = s_[k] * v * u_[k];
  const ComplexMatrix out = enc * rho * enc.adjoint();
  std::vector<double> p(dim_);
  for (Index j = 0; j < dim_; ++j) p[j] = out(j, j).real();
  return p;
}

double AuxFisherEvaluator::operator()(const ComplexMatrix& v, const ComplexVector& psi0) const {
  if (v.rows() != dim_ || psi0.size() != dim_) throw DimensionMismatch("aux_fi: dimension mismatch");
  StencilSamples s{probabilities(0, v, psi0), probabilities(1, v, psi0), probabilities(2, v, psi0),
                   probabilities(3, v, psi0), probabilities(4, v, psi0)};
  return fisher_from_samples(s, h_);
}

double AuxFisherEvaluator::operator()(const ComplexMatrix& v, const QuantumState& psi0) const {
  if (psi0.is_pure()) return (*this)(v, psi0.vector());
  if (v.rows() != dim_ || psi0.dim() != dim_) throw DimensionMismatch("aux_fi: dimension mismatch");
  const ComplexMatrix rho = psi0.density();
  StencilSamples s{probabilities(0, v, rho), probabilities(1, v, rho), probabilities(2, v, rho),
                   probabilities(3, v, rho), probabilities(4, v, rho)};
  return fisher_from_samples(s, h_);
}

double aux_fi(const HamiltonianFamily& fam, double xi, double t, const UnitaryOperator& v,
              const QuantumState& psi0, double step) {
  return AuxFisherEvaluator(fam, xi, t, step)(v.matrix(), psi0);
}

UnitaryOperator decreasing_diagonalizer(const HermitianOperator& m) {
  SpectralData spec = eigendecompose(m, Degeneracy::allow);
  const Index d = spec.dim();
  const double tie = 1e-12 * std::max(1.0, spec.eigenvalues.cwiseAbs().maxCoeff());
  auto lexicographic_less = [&](Index a, Index b) {
    for (Index i = 0; i < d; ++i) {
      const Complex x = spec.eigenvectors(i, a), y = spec.eigenvectors(i, b);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
  };
  std::vector<Index> order(d);
  std::iota(order.begin(), order.end(), Index{0});
  for (Index start = 0; start < d;) {
    Index end = start + 1;
    while (end < d && spec.eigenvalues(start) - spec.eigenvalues(end) <= tie) ++end;
    std::sort(order.begin() + start, order.begin() + end, lexicographic_less);
    start = end;
  }
  ComplexMatrix columns(d, d);
  for (Index i = 0; i < d; ++i) columns.col(i) = spec.eigenvectors.col(order[i]);
  return UnitaryOperator(ComplexMatrix(columns.adjoint()));
}

GapSumMaximizer gap_sum_maximizer(const HermitianOperator& m1, const HermitianOperator& m2) {
  if (m1.dim() != m2.dim()) throw DimensionMismatch("gap_sum_maximizer: dimension mismatch");
  const UnitaryOperator r1 = decreasing_diagonalizer(m1);
  const UnitaryOperator r2 = decreasing_diagonalizer(m2);
  return GapSumMaximizer{r1.adjoint() * r2, spectral_gap(m1) + spectral_gap(m2)};
}

bool equioriented(const ComplexVector& v1, const ComplexVector& v2, double tolerance) {
  if (v1.size() != v2.size()) throw DimensionMismatch("equioriented: dimension mismatch");
  return (v1.cwiseAbs() - v2.cwiseAbs()).cwiseAbs().maxCoeff() <= tolerance;
}

bool equioriented(const ComplexVector& v1, const ComplexVector& v2) {
  return equioriented(v1, v2, tolerances().equiorientation);
}

namespace {

// Rows: (e_0 + e_1)/√2, e_2, …, e_{d−1}, (e_0 − e_1)/√2.  Used as the
// eigenbasis of a vanishing 𝔤_S, whose extremal eigenvectors are otherwise
// arbitrary; this choice makes them equioriented.
ComplexMatrix equioriented_rows(Index d) {
  ComplexMatrix r = ComplexMatrix::Zero(d, d);
  const double s = 1.0 / std::numbers::sqrt2;
  r(0, 0) = s;
  r(0, 1) = s;
  for (Index k = 2; k < d; ++k) r(k - 1, k) = 1.0;
  r(d - 1, 0) = s;
  r(d - 1, 1) = -s;
  return r;
}

}  // namespace

GBoundReport g_bound(const HamiltonianFamily& fam, double xi, double t, double phi) {
  const Index d = fam.dim();
  const HermitianOperator g_u = generator_of_evolution(fam, xi, t);
  const HermitianOperator g_s = generator_of_diagonalizer(fam, xi);
  const UnitaryOperator s = diagonalizer(fam, xi);
  const UnitaryOperator u = evolution(fam, xi, t);

  GBoundReport report;
  report.sigma_u = spectral_gap(g_u);
  report.sigma_s = spectral_gap(g_s);
  report.cqfi = report.sigma_u * report.sigma_u;
  const double sum = report.sigma_u + report.sigma_s;
  report.g_bound = sum * sum;
  report.delta = report.g_bound - report.cqfi;

  const bool vanishing_gs = d >= 2 && report.sigma_s <= 1e-9 * std::max(1.0, report.sigma_u);
  const UnitaryOperator r1 =
      vanishing_gs ? UnitaryOperator(equioriented_rows(d)) : decreasing_diagonalizer(g_s);
  const UnitaryOperator r2 = decreasing_diagonalizer(g_u);

  const ComplexVector v_max = r1.matrix().adjoint().col(0);
  const ComplexVector v_min = r1.matrix().adjoint().col(d - 1);
  report.equioriented = d >= 2 && equioriented(v_max, v_min);

  report.v_opt = s.adjoint() * r1.adjoint() * r2;
  const UnitaryOperator enc = s * report.v_opt * u;
  const ComplexVector target =
      d >= 2 ? ComplexVector((v_max + std::exp(kI * phi) * v_min) / std::numbers::sqrt2) : v_max;
  report.psi0_opt = QuantumState::pure(enc.matrix().adjoint() * target);
  report.fi_at_optimum = aux_fi(fam, xi, t, report.v_opt, report.psi0_opt);
  return report;
}

namespace chart {

HermitianOperator hermitian_from(std::span<const double> c, Index d) {
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  std::size_t k = 0;
  for (Index i = 0; i < d; ++i) a(i, i) = c[k++];
  for (Index i = 0; i < d; ++i) {
    for (Index j = i + 1; j < d; ++j) {
      a(i, j) = Complex(c[k], c[k + 1]);
      a(j, i) = std::conj(a(i, j));
      k += 2;
    }
  }
  return HermitianOperator::symmetrized(a);
}

ComplexMatrix completion(const ComplexVector& psi) {
  const Index d = psi.size();
  ComplexMatrix m = ComplexMatrix::Identity(d, d);
  m.col(0) = psi;
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ();
}

ComplexVector state_from(std::span<const double> c, const ComplexMatrix& q) {
  const Index d = q.rows();
  ComplexVector local = ComplexVector::Zero(d);
  local(0) = 1.0;
  for (Index k = 1; k < d; ++k) local(k) = Complex(c[2 * (k - 1)], c[2 * (k - 1) + 1]);
  return q * local.normalized();
}

}  // namespace chart

FiMaximum maximize_fi(const HamiltonianFamily& fam, double xi, double t,
                      const MaximizeSettings& settings) {
  const Index d = fam.dim();
  const AuxFisherEvaluator evaluate(fam, xi, t);
  const GBoundReport report = g_bound(fam, xi, t);
  const QuantumState bc = optimal_bc_preparation(fam, xi, t);

  struct Start {
    ComplexMatrix v;
    ComplexVector psi;
    bool warm;
  };
  std::vector<Start> starts{{report.v_opt.matrix(), report.psi0_opt.vector(), true},
                            {ComplexMatrix::Identity(d, d), bc.vector(), true}};
  Rng rng(settings.seed);
  for (int r = 0; r < settings.restarts; ++r) {
    starts.push_back({random_unitary(d, rng).matrix(), random_state(d, rng), false});
  }

  const std::size_t n_unitary = static_cast<std::size_t>(d * d);
  const std::size_t n_state = static_cast<std::size_t>(2 * d - 2);
  NelderMeadOptions options;
  options.max_iterations = settings.max_iterations;
  options.initial_step = settings.initial_step;

  FiMaximum best{UnitaryOperator::identity(d), bc, -1.0, -1.0, -1.0};
  for (const Start& start : starts) {
    const ComplexMatrix q = chart::completion(start.psi);
    auto unpack = [&](std::span<const double> x) {
      const ComplexMatrix v =
          start.v * herm_exp(chart::hermitian_from(x.first(n_unitary), d), 1.0).matrix();
      return std::pair{v, chart::state_from(x.subspan(n_unitary), q)};
    };
    auto objective = [&](std::span<const double> x) {
      const auto [v, psi] = unpack(x);
      try {
        return -evaluate(v, psi);
      } catch (const SupportBoundary&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const NelderMeadResult nm =
        nelder_mead_minimize(objective, std::vector<double>(n_unitary + n_state, 0.0), options);
    const double value = -nm.value;
    if (start.warm) {
      best.warm_start_value = std::max(best.warm_start_value, value);
    } else {
      best.random_start_value = std::max(best.random_start_value, value);
    }
    if (value > best.value) {
      const auto [v, psi] = unpack(nm.x);
      best.control = UnitaryOperator(v, 1e-8);
      best.preparation = QuantumState::pure(psi);
      best.value = value;
    }
  }
  return best;
}

}  // namespace hamest

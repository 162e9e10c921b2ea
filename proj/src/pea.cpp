#include "hamest/pea.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hamest/errors.hpp"
#include "hamest/nelder_mead.hpp"

namespace hamest {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::string> bit_labels(int n) {
  const std::size_t count = std::size_t{1} << n;
  std::vector<std::string> labels(count);
  for (std::size_t q = 0; q < count; ++q) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int l = 0; l < n; ++l)
      if ((q >> l) & 1U) s[static_cast<std::size_t>(n - 1 - l)] = '1';
    labels[q] = std::move(s);
  }
  return labels;
}

// Dense operator on the full register acting as `k` on (control qubit `qubit`
// counted from 0 = least significant, system) and as the identity elsewhere.
ComplexMatrix embed_on_control(const ComplexMatrix& k, int qubit, int n, Index d) {
  const Index controls = Index{1} << n;
  const Index mask = Index{1} << qubit;
  ComplexMatrix full = ComplexMatrix::Zero(controls * d, controls * d);
  for (Index x = 0; x < controls; ++x) {
    const Index bx = (x & mask) ? 1 : 0;
    for (Index y : {x, x ^ mask}) {
      const Index by = (y & mask) ? 1 : 0;
      full.block(x * d, y * d, d, d) = k.block(bx * d, by * d, d, d);
    }
  }
  return full;
}

class DensityRegister {
 public:
  DensityRegister(ComplexMatrix rho, bool check) : rho_(std::move(rho)), check_(check) {}

  void apply(const ComplexMatrix& op, const char* layer) {
    rho_ = op * rho_ * op.adjoint();
    verify(layer);
  }

  void apply_channel(const std::vector<ComplexMatrix>& kraus, const char* layer) {
    ComplexMatrix out = ComplexMatrix::Zero(rho_.rows(), rho_.cols());
    for (const auto& k : kraus) out.noalias() += k * rho_ * k.adjoint();
    rho_ = std::move(out);
    verify(layer);
  }

  const ComplexMatrix& rho() const { return rho_; }

 private:
  void verify(const char* layer) const {
    if (!check_) return;
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > 1e-9) {
      throw NumericalError(std::string("circuit layer '") + layer + "' broke trace: " +
                           std::to_string(trace));
    }
    const double min_eig =
        eigendecompose(HermitianOperator::symmetrized(rho_), Degeneracy::allow).min();
    if (min_eig < -1e-9) {
      throw NumericalError(std::string("circuit layer '") + layer + "' broke positivity: " +
                           std::to_string(min_eig));
    }
  }

  ComplexMatrix rho_;
  bool check_;
};

}  // namespace

void PeaConfig::validate(Index dim) const {
  if (n < 1) throw Error("PEA config: n must be >= 1");
  if (n > 30) throw ResourceLimit("PEA config: n too large");
  if (m < 1) throw Error("PEA config: m must be >= 1");
  if (!(tau > 0.0)) throw Error("PEA config: tau must be > 0");
  if (control.dim() != dim || preparation.dim() != dim) {
    throw DimensionMismatch("PEA config: control/preparation dimension differs from the family");
  }
}

ControllizationFactors controllization_factors(const UnitaryOperator& u) {
  const Complex z = u.matrix().trace() / static_cast<double>(u.dim());
  return ControllizationFactors{std::abs(z), std::arg(z)};
}

Complex controllization_error(const UnitaryOperator& u_sub, int m) {
  const Complex z = u_sub.matrix().trace() / static_cast<double>(u_sub.dim());
  return std::pow(z, m) - 1.0;
}

UnitaryOperator controlled_evolution(const UnitaryOperator& u) {
  const Index d = u.dim();
  ComplexMatrix c = ComplexMatrix::Zero(2 * d, 2 * d);
  c.topLeftCorner(d, d).setIdentity();
  c.bottomRightCorner(d, d) = u.matrix();
  return UnitaryOperator(c);
}

ComplexMatrix controlled_swap(Index d) {
  const Index dim = 2 * d * d;
  ComplexMatrix sw = ComplexMatrix::Zero(dim, dim);
  for (Index c = 0; c < 2; ++c) {
    for (Index s = 0; s < d; ++s) {
      for (Index a = 0; a < d; ++a) {
        const Index from = (c * d + s) * d + a;
        const Index to = c == 0 ? (c * d + a) * d + s : from;
        sw(to, from) = 1.0;
      }
    }
  }
  return sw;
}

ComplexMatrix controllization_gadget(const UnitaryOperator& u_sub) {
  const Index d = u_sub.dim();
  const ComplexMatrix sw = controlled_swap(d);
  const ComplexMatrix middle =
      kron(kron(pauli::identity(), u_sub.matrix()), ComplexMatrix::Identity(d, d));
  return sw * middle * sw;
}

ComplexMatrix controllization_step(const ComplexMatrix& rho, const UnitaryOperator& u_sub) {
  const Index d = u_sub.dim();
  if (rho.rows() != 2 * d || rho.cols() != 2 * d) {
    throw DimensionMismatch("controllization_step: state must act on control (2) x system (" +
                            std::to_string(d) + ")");
  }
  const ComplexMatrix ancilla = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  const ComplexMatrix w = controllization_gadget(u_sub);
  const ComplexMatrix big = w * kron(rho, ancilla) * w.adjoint();
  const std::array<Index, 3> dims{2, d, d};
  const std::array<Index, 2> keep{0, 1};
  return partial_trace(big, dims, keep);
}

std::vector<ComplexMatrix> controllization_kraus(const UnitaryOperator& u_sub) {
  const Index d = u_sub.dim();
  const ComplexMatrix w = controllization_gadget(u_sub);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(d * d));
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      ComplexMatrix k(2 * d, 2 * d);
      for (Index r = 0; r < 2 * d; ++r)
        for (Index c = 0; c < 2 * d; ++c) k(r, c) = norm * w(r * d + a, c * d + b);
      kraus.push_back(std::move(k));
    }
  }
  return kraus;
}

EnergyPopulations energy_populations(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg) {
  cfg.validate(fam.dim());
  const EnergyBasis eb = energy_basis(fam, xi);
  const ComplexMatrix vu = cfg.control.matrix() * evolution(fam, xi, cfg.interrogation_t).matrix();
  const QuantumState state = cfg.preparation.evolved(vu);
  EnergyPopulations out{eb.energies, std::vector<double>(eb.energies.size())};
  if (state.is_pure()) {
    const ComplexVector amp = eb.vectors.adjoint() * state.vector();
    for (Index j = 0; j < amp.size(); ++j) out.populations[j] = std::norm(amp(j));
  } else {
    const ComplexMatrix r = eb.vectors.adjoint() * state.density() * eb.vectors;
    for (Index j = 0; j < r.rows(); ++j) out.populations[j] = r(j, j).real();
  }
  return out;
}

std::vector<double> fejer_distribution(const EnergyPopulations& ep, int n, double tau) {
  const std::size_t count = std::size_t{1} << n;
  const double big_n = static_cast<double>(count);
  std::vector<double> p(count, 0.0);
  for (std::size_t q = 0; q < count; ++q) {
    for (Index j = 0; j < ep.energies.size(); ++j) {
      const double alpha = tau * ep.energies(j) + kTwoPi * static_cast<double>(q) / big_n;
      const double s = std::sin(0.5 * alpha);
      double kernel;
      if (std::abs(s) < 1e-8) {
        const double delta = alpha - kTwoPi * std::round(alpha / kTwoPi);
        kernel = 1.0 - (big_n * big_n - 1.0) * delta * delta / 12.0;
      } else {
        const double ratio = std::sin(0.5 * big_n * alpha) / (big_n * s);
        kernel = ratio * ratio;
      }
      p[q] += ep.populations[j] * kernel;
    }
  }
  return p;
}

std::vector<double> controllized_distribution(const EnergyPopulations& ep, int n, int m,
                                              double tau, const ControllizationFactors& f) {
  const std::size_t count = std::size_t{1} << n;
  const double big_n = static_cast<double>(count);
  std::vector<double> damping(n);
  for (int l = 0; l < n; ++l) damping[l] = std::pow(f.a, std::ldexp(1.0, l) * m);
  std::vector<double> p(count, 0.0);
  for (std::size_t q = 0; q < count; ++q) {
    for (Index j = 0; j < ep.energies.size(); ++j) {
      const double beta = tau * ep.energies(j) + kTwoPi * static_cast<double>(q) / big_n + m * f.phi;
      double product = 1.0;
      for (int l = 0; l < n; ++l) product *= 1.0 + damping[l] * std::cos(std::ldexp(beta, l));
      p[q] += ep.populations[j] * product / big_n;
    }
  }
  return p;
}

ProbDist pea_probs_ideal(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg) {
  return ProbDist(fejer_distribution(energy_populations(fam, xi, cfg), cfg.n, cfg.tau),
                  bit_labels(cfg.n));
}

ProbDist pea_probs_controllized(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg) {
  const ControllizationFactors f = controllization_factors(evolution(fam, xi, cfg.tau / cfg.m));
  return ProbDist(controllized_distribution(energy_populations(fam, xi, cfg), cfg.n, cfg.m,
                                            cfg.tau, f),
                  bit_labels(cfg.n));
}

ProbDist pea_simulate_circuit(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg,
                              const CircuitOptions& options) {
  const Index d = fam.dim();
  cfg.validate(d);
  const int n = cfg.n;
  if (n > 12 || (Index{1} << n) * d > kMaxCircuitDim) {
    throw ResourceLimit("circuit register 2^" + std::to_string(n) + " x " + std::to_string(d) +
                        " exceeds the simulation limit of " + std::to_string(kMaxCircuitDim));
  }
  const Index controls = Index{1} << n;
  const Index dim = controls * d;

  ComplexMatrix rho0 = ComplexMatrix::Zero(dim, dim);
  rho0.topLeftCorner(d, d) = cfg.preparation.density();
  DensityRegister reg(std::move(rho0), options.check_invariants);

  ComplexMatrix hadamards(controls, controls);
  const double hn = 1.0 / std::sqrt(static_cast<double>(controls));
  for (Index x = 0; x < controls; ++x)
    for (Index y = 0; y < controls; ++y)
      hadamards(x, y) = (std::popcount(static_cast<std::uint64_t>(x & y)) % 2 ? -hn : hn);
  reg.apply(kron(hadamards, ComplexMatrix::Identity(d, d)), "hadamard");

  const ComplexMatrix encode =
      cfg.control.matrix() * evolution(fam, xi, cfg.interrogation_t).matrix();
  reg.apply(kron(ComplexMatrix::Identity(controls, controls), encode), "encode+control");

  if (options.gate == ControlledGate::exact) {
    for (int l = 0; l < n; ++l) {
      const UnitaryOperator power = evolution(fam, xi, cfg.tau * std::ldexp(1.0, l));
      reg.apply(embed_on_control(controlled_evolution(power).matrix(), l, n, d), "controlled-U");
    }
  } else {
    const std::vector<ComplexMatrix> local = controllization_kraus(evolution(fam, xi, cfg.tau / cfg.m));
    for (int l = 0; l < n; ++l) {
      std::vector<ComplexMatrix> kraus;
      for (const auto& k : local) kraus.push_back(embed_on_control(k, l, n, d));
      const long repetitions = (1L << l) * cfg.m;
      for (long r = 0; r < repetitions; ++r) reg.apply_channel(kraus, "controllization");
    }
  }

  ComplexMatrix iqft(controls, controls);
  for (Index q = 0; q < controls; ++q)
    for (Index x = 0; x < controls; ++x)
      iqft(q, x) = hn * std::exp(-kI * (kTwoPi * static_cast<double>((x * q) % controls) /
                                        static_cast<double>(controls)));
  reg.apply(kron(iqft, ComplexMatrix::Identity(d, d)), "inverse-qft");

  std::vector<double> p(static_cast<std::size_t>(controls), 0.0);
  for (Index q = 0; q < controls; ++q)
    for (Index s = 0; s < d; ++s) p[q] += reg.rho()(q * d + s, q * d + s).real();
  return ProbDist(std::move(p), bit_labels(n));
}

double pea_fi(const HamiltonianFamily& fam, double xi, const PeaConfig& cfg, double step) {
  return classical_fi([&](double x) { return pea_probs_controllized(fam, x, cfg); }, xi, step);
}

PeaMaximum maximize_pea_fi(const HamiltonianFamily& fam, double xi, double t, int n, int m,
                           double tau, const MaximizeSettings& settings) {
  const Index d = fam.dim();
  const GBoundReport report = g_bound(fam, xi, t, 0.5 * std::numbers::pi);

  PeaConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.tau = tau;
  cfg.interrogation_t = t;
  cfg.control = report.v_opt;
  cfg.preparation = report.psi0_opt;
  cfg.validate(d);

  std::vector<std::pair<ComplexMatrix, ComplexVector>> starts{
      {report.v_opt.matrix(), report.psi0_opt.vector()}};
  Rng rng(settings.seed);
  for (int r = 0; r < settings.restarts; ++r)
    starts.emplace_back(random_unitary(d, rng).matrix(), random_state(d, rng));

  const std::size_t n_unitary = static_cast<std::size_t>(d * d);
  const std::size_t n_state = static_cast<std::size_t>(2 * d - 2);
  NelderMeadOptions options;
  options.max_iterations = settings.max_iterations;
  options.initial_step = settings.initial_step;

  PeaMaximum best{report.v_opt, report.psi0_opt, -1.0, -1.0};
  try {
    best.warm_start_value = pea_fi(fam, xi, cfg);
  } catch (const SupportBoundary&) {
  }
  for (const auto& [v_ref, psi_ref] : starts) {
    const ComplexMatrix q = chart::completion(psi_ref);
    auto unpack = [&](std::span<const double> x) {
      const ComplexMatrix v =
          v_ref * herm_exp(chart::hermitian_from(x.first(n_unitary), d), 1.0).matrix();
      return std::pair{UnitaryOperator(v, 1e-8),
                       QuantumState::pure(chart::state_from(x.subspan(n_unitary), q))};
    };
    auto objective = [&](std::span<const double> x) {
      auto [v, psi] = unpack(x);
      PeaConfig trial = cfg;
      trial.control = std::move(v);
      trial.preparation = std::move(psi);
      try {
        return -pea_fi(fam, xi, trial);
      } catch (const SupportBoundary&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const NelderMeadResult nm =
        nelder_mead_minimize(objective, std::vector<double>(n_unitary + n_state, 0.0), options);
    if (-nm.value > best.value) {
      auto [v, psi] = unpack(nm.x);
      best.control = std::move(v);
      best.preparation = std::move(psi);
      best.value = -nm.value;
    }
  }
  return best;
}

}  // namespace hamest

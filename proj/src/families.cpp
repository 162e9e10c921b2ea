#include <cmath>
#include <numbers>
#include <string>

#include "hamest/errors.hpp"
#include "hamest/hamiltonian.hpp"

namespace hamest::families {

namespace spin1 {

ComplexMatrix sx() {
  ComplexMatrix m(3, 3);
  m << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return std::sqrt(2.0) * m;
}

ComplexMatrix sy() {
  ComplexMatrix m(3, 3);
  m << 0, -1, 0, 1, 0, -1, 0, 1, 0;
  return std::sqrt(2.0) * kI * m;
}

ComplexMatrix sz() {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(2, 2) = -2.0;
  return m;
}

}  // namespace spin1

HamiltonianFamily qubit_angle(double omega) {
  const ComplexMatrix sz = pauli::z(), sx = pauli::x();
  return HamiltonianFamily(
      "qubit-angle", 2, Interval{},
      [=](double xi) -> ComplexMatrix { return omega * (std::cos(xi) * sz + std::sin(xi) * sx); },
      [=](double xi) -> ComplexMatrix { return omega * (-std::sin(xi) * sz + std::cos(xi) * sx); });
}

HamiltonianFamily qubit_component(double omega) {
  const ComplexMatrix sz = pauli::z(), sx = pauli::x();
  return HamiltonianFamily(
      "qubit-component", 2, Interval{},
      [=](double xi) -> ComplexMatrix { return -omega * sz + xi * sx; },
      [=](double) -> ComplexMatrix { return sx; });
}

NvParameters NvParameters::ghz_preset() {
  return NvParameters{1.0, std::numbers::pi * 1.44, std::numbers::pi * 5e-5};
}

HamiltonianFamily nv_center(const NvParameters& p) {
  const ComplexMatrix sx = spin1::sx(), sy = spin1::sy(), sz = spin1::sz();
  const ComplexMatrix fixed = p.zero_field * sz * sz + p.strain * (sx * sx - sy * sy);
  const double mu = p.mu;
  return HamiltonianFamily(
      "nv-center", 3, Interval{},
      [=](double xi) -> ComplexMatrix { return mu * xi * sz + fixed; },
      [=](double) -> ComplexMatrix { return mu * sz; });
}

HamiltonianFamily phase_parameter(const HermitianOperator& generator) {
  const ComplexMatrix g = generator.matrix();
  return HamiltonianFamily(
      "phase-parameter", generator.dim(), Interval{},
      [=](double xi) -> ComplexMatrix { return xi * g; },
      [=](double) -> ComplexMatrix { return g; });
}

HamiltonianFamily by_name(std::string_view name, const FamilyParameters& params) {
  auto reject = [&](bool present, const char* field) {
    if (present) {
      throw ConfigError("parameter '" + std::string(field) + "' does not apply to family " +
                        std::string(name));
    }
  };
  if (name == "qubit-angle" || name == "qubit-component") {
    reject(params.mu.has_value(), "mu");
    reject(params.zero_field.has_value(), "D");
    reject(params.strain.has_value(), "E");
    reject(params.preset.has_value(), "preset");
    reject(params.generator.has_value(), "generator");
    const double omega = params.omega.value_or(1.0);
    return name == "qubit-angle" ? qubit_angle(omega) : qubit_component(omega);
  }
  if (name == "nv-center") {
    reject(params.omega.has_value(), "omega");
    reject(params.generator.has_value(), "generator");
    NvParameters p;
    if (params.preset) {
      if (*params.preset != "ghz") throw ConfigError("unknown nv-center preset '" + *params.preset + "'");
      p = NvParameters::ghz_preset();
    }
    if (params.mu) p.mu = *params.mu;
    if (params.zero_field) p.zero_field = *params.zero_field;
    if (params.strain) p.strain = *params.strain;
    return nv_center(p);
  }
  if (name == "phase-parameter") {
    reject(params.omega.has_value(), "omega");
    reject(params.mu.has_value(), "mu");
    reject(params.zero_field.has_value(), "D");
    reject(params.strain.has_value(), "E");
    reject(params.preset.has_value(), "preset");
    if (!params.generator) throw ConfigError("phase-parameter family needs a 'generator' matrix");
    return phase_parameter(HermitianOperator(*params.generator));
  }
  throw ConfigError("unknown family '" + std::string(name) + "'");
}

}  // namespace hamest::families

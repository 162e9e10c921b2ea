#include "hamest/tolerances.hpp"

#include <cstdlib>
#include <string>

#include "hamest/errors.hpp"

namespace hamest {

Tolerances tolerance_profile(std::string_view name) {
  if (name.empty() || name == "default") return Tolerances{};
  if (name == "loose") {
    Tolerances t;
    t.hermitian = 1e-10;
    t.unitary = 1e-8;
    t.generator_hermitian = 1e-6;
    t.state_norm = 1e-10;
    t.density_trace = 1e-8;
    t.density_positivity = 1e-8;
    t.povm_positivity = 1e-8;
    t.povm_completeness = 1e-7;
    t.prob_sum = 1e-7;
    t.equiorientation = 1e-6;
    return t;
  }
  throw ConfigError("unknown tolerance profile '" + std::string(name) + "'");
}

const Tolerances& tolerances() {
  static const Tolerances active = [] {
    const char* env = std::getenv("HAMEST_TOLERANCES");
    return tolerance_profile(env ? std::string_view(env) : std::string_view{});
  }();
  return active;
}

}  // namespace hamest

#pragma once

#include <string_view>

namespace hamest {

/// Numerical thresholds shared by every module.
struct Tolerances {
  double hermitian = 1e-12;        // ‖M − M†‖ (max-abs) accepted at construction
  double unitary = 1e-10;          // ‖U†U − 𝕀‖_F
  double degeneracy = 1e-9;        // relative eigenvalue separation
  double generator_hermitian = 1e-8;
  double state_norm = 1e-12;
  double density_trace = 1e-10;
  double density_positivity = 1e-10;
  double povm_positivity = 1e-10;
  double povm_completeness = 1e-9;
  double prob_clip = 1e-12;
  double prob_sum = 1e-9;
  double fi_min_probability = 1e-12;
  double fi_support_derivative = 1e-6;
  double gauge_overlap = 0.9;
  double equiorientation = 1e-8;
};

/// Returns the named profile ("default" or "loose"); throws ConfigError otherwise.
Tolerances tolerance_profile(std::string_view name);

/// Process-wide tolerances, selected once from HAMEST_TOLERANCES (default profile when unset).
const Tolerances& tolerances();

}  // namespace hamest

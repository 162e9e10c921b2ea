#pragma once

// Batch experiments driven by a YAML config: sweeps over the interrogation
// time comparing the CQFI with the controlled-energy bound, numerical
// saturation checks, phase-estimation sweeps over (n, m), gap-sum maximizer
// runs and family grid dumps.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hamest/controlled_energy.hpp"
#include "hamest/custom_family.hpp"
#include "hamest/hamiltonian.hpp"

namespace hamest {

enum class Mode { bound_compare, optimize, pea_sweep, lemma_test, dump_family };
enum class OutputFormat { csv, json };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

struct FamilySpec {
  std::string name = "qubit-angle";
  families::FamilyParameters params;
  std::optional<std::filesystem::path> path;  // custom families only
};

struct PeaSweepSpec {
  std::vector<int> n_list{6};
  std::vector<int> m_list{5};
  double tau = 0.1;
  bool optimize = false;
};

struct LemmaSpec {
  int trials = 500;
  int dim = 3;
  int samples_per_pair = 100;
};

struct DumpSpec {
  double lo = 0.0;
  double hi = 1.0;
  int points = 201;
};

struct OutputSpec {
  std::filesystem::path path;
  OutputFormat format = OutputFormat::csv;
};

struct ExperimentConfig {
  std::optional<Mode> mode;
  FamilySpec family;
  double xi = 0.0;
  std::vector<double> t_grid;
  MaximizeSettings optimizer;
  PeaSweepSpec pea;
  LemmaSpec lemma;
  DumpSpec dump;
  OutputSpec output;
};

/// Parses YAML text.  Unknown keys, wrong types and empty grids raise
/// ConfigError naming the line and field.  Relative paths resolve against
/// `base_dir`.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

HamiltonianFamily make_family(const FamilySpec& spec);

/// One row of a time sweep.  n and m are set for phase-estimation rows only.
struct SweepRecord {
  double t = 0.0;
  std::optional<int> n;
  std::optional<int> m;
  double cqfi = 0.0;
  double g_bound = 0.0;
  double delta = 0.0;
  double fi_optimized = 0.0;
  std::optional<double> fi_pea;
  bool equioriented = false;
  // Whether fi_pea is held to g_bound: only when the spectrum does not move
  // with ξ, otherwise phase estimation also reads out the energies.
  bool pea_bounded = true;

  /// Throws NumericalError on non-finite values or fi > g_bound + 1e-6.
  void validate() const;
};

struct LemmaRecord {
  int trial = 0;
  int dim = 0;
  double predicted = 0.0;   // σ(M₁) + σ(M₂)
  double achieved = 0.0;    // σ(M₁ + U* M₂ U*†)
  double best_random = 0.0; // max over random V of σ(M₁ + V M₂ V†)
  bool violation = false;
};

struct Summary {
  std::size_t records = 0;
  double max_delta = 0.0;
  double min_saturation = 0.0;  // min fi_optimized / g_bound
  std::size_t violations = 0;   // lemma-test only
};

struct RunResult {
  Mode mode = Mode::bound_compare;
  std::vector<SweepRecord> sweep;
  std::vector<LemmaRecord> lemma;
  FamilyGrid grid;
  Summary summary;
};

/// Runs `mode` with up to `jobs` worker threads.  Records come back in grid
/// order; computation errors are rethrown with the grid point attached.
RunResult run(const ExperimentConfig& config, Mode mode, int jobs = 1);

std::string format_csv(const RunResult& result);
std::string format_json(const RunResult& result, const ExperimentConfig& config);
std::string format_summary(const RunResult& result);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace hamest

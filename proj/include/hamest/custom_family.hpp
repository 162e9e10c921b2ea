#pragma once

// Families tabulated on a uniform ξ grid, read from and written to a plain
// text format: one line per grid point holding ξ followed by the d² matrix
// entries as "re,im" pairs in row-major order.  Blank lines and lines
// starting with '#' are ignored.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hamest/hamiltonian.hpp"

namespace hamest {

struct FamilyGrid {
  std::vector<double> xi;
  std::vector<ComplexMatrix> matrices;
};

/// Smallest accepted grid.
inline constexpr std::size_t kMinGridPoints = 5;

/// Throws ConfigError on malformed text, citing `source` and the line.
FamilyGrid read_family_grid(std::istream& in, const std::string& source = "<stream>");
void write_family_grid(std::ostream& out, const FamilyGrid& grid);

/// `points` evaluations of `fam` on the uniform grid [lo, hi].
FamilyGrid sample_family(const HamiltonianFamily& fam, double lo, double hi, std::size_t points);

/// Cubic B-spline interpolation of every entry, with the spline's derivative
/// as ∂_ξH.  Requires ≥ 5 points, uniform spacing and Hermitian samples; the
/// error names the offending grid index.
HamiltonianFamily family_from_grid(const FamilyGrid& grid, std::string name = "custom");

HamiltonianFamily load_custom_family(const std::filesystem::path& path);

}  // namespace hamest

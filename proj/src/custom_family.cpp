#include "hamest/custom_family.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "hamest/errors.hpp"
#include "hamest/tolerances.hpp"

namespace hamest {

namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;

std::string at_line(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

// Splines for the real and imaginary part of every entry.
struct EntrySplines {
  Index dim = 0;
  std::vector<Spline> re, im;

  ComplexMatrix value(double x) const {
    ComplexMatrix m(dim, dim);
    for (Index k = 0; k < dim * dim; ++k) m(k / dim, k % dim) = Complex(re[k](x), im[k](x));
    return HermitianOperator::symmetrized(m).matrix();
  }

  ComplexMatrix slope(double x) const {
    ComplexMatrix m(dim, dim);
    for (Index k = 0; k < dim * dim; ++k)
      m(k / dim, k % dim) = Complex(re[k].prime(x), im[k].prime(x));
    return HermitianOperator::symmetrized(m).matrix();
  }
};

}  // namespace

FamilyGrid read_family_grid(std::istream& in, const std::string& source) {
  FamilyGrid grid;
  std::string line;
  std::size_t line_no = 0;
  Index dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double xi;
    if (!(fields >> xi)) throw ConfigError(at_line(source, line_no) + "expected a xi value");
    std::vector<Complex> entries;
    std::string token;
    while (fields >> token) {
      const auto comma = token.find(',');
      if (comma == std::string::npos) {
        throw ConfigError(at_line(source, line_no) + "entry '" + token + "' is not a re,im pair");
      }
      try {
        std::size_t used_re = 0, used_im = 0;
        const double re = std::stod(token.substr(0, comma), &used_re);
        const std::string im_text = token.substr(comma + 1);
        const double im = std::stod(im_text, &used_im);
        if (used_re != comma || used_im != im_text.size()) throw std::invalid_argument(token);
        entries.emplace_back(re, im);
      } catch (const std::exception&) {
        throw ConfigError(at_line(source, line_no) + "cannot parse entry '" + token + "'");
      }
    }
    const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (n < 1 || n * n != static_cast<Index>(entries.size())) {
      throw ConfigError(at_line(source, line_no) + "expected d^2 entries, found " +
                        std::to_string(entries.size()));
    }
    if (dim >= 0 && n != dim) {
      throw ConfigError(at_line(source, line_no) + "matrix dimension changes from " +
                        std::to_string(dim) + " to " + std::to_string(n));
    }
    dim = n;
    ComplexMatrix m(n, n);
    for (Index k = 0; k < n * n; ++k) m(k / n, k % n) = entries[static_cast<std::size_t>(k)];
    grid.xi.push_back(xi);
    grid.matrices.push_back(std::move(m));
  }
  return grid;
}

void write_family_grid(std::ostream& out, const FamilyGrid& grid) {
  char buf[64];
  for (std::size_t i = 0; i < grid.xi.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", grid.xi[i]);
    out << buf;
    const ComplexMatrix& m = grid.matrices[i];
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) {
        std::snprintf(buf, sizeof buf, " %.17g,%.17g", m(r, c).real(), m(r, c).imag());
        out << buf;
      }
    }
    out << '\n';
  }
}

FamilyGrid sample_family(const HamiltonianFamily& fam, double lo, double hi, std::size_t points) {
  if (points < kMinGridPoints) {
    throw ConfigError("family grid needs at least " + std::to_string(kMinGridPoints) + " points");
  }
  if (!(lo < hi)) throw ConfigError("family grid needs lo < hi");
  FamilyGrid grid;
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double xi = i + 1 == points ? hi : lo + step * static_cast<double>(i);
    grid.xi.push_back(xi);
    grid.matrices.push_back(fam.evaluate(xi).matrix());
  }
  return grid;
}

HamiltonianFamily family_from_grid(const FamilyGrid& grid, std::string name) {
  const std::size_t count = grid.xi.size();
  if (count < kMinGridPoints || grid.matrices.size() != count) {
    throw ConfigError("custom family '" + name + "': grid has " + std::to_string(count) +
                      " points, at least " + std::to_string(kMinGridPoints) + " required");
  }
  const Index dim = grid.matrices.front().rows();
  const double lo = grid.xi.front(), hi = grid.xi.back();
  const double step = (hi - lo) / static_cast<double>(count - 1);
  if (!(step > 0.0)) throw ConfigError("custom family '" + name + "': xi must increase");
  for (std::size_t i = 0; i < count; ++i) {
    const ComplexMatrix& m = grid.matrices[i];
    if (m.rows() != dim || m.cols() != dim) {
      throw ConfigError("custom family '" + name + "': grid index " + std::to_string(i) +
                        " has the wrong dimension");
    }
    const double expected = lo + step * static_cast<double>(i);
    if (std::abs(grid.xi[i] - expected) > 1e-9 * std::max(1.0, std::abs(hi - lo))) {
      throw ConfigError("custom family '" + name + "': grid index " + std::to_string(i) +
                        " breaks uniform spacing");
    }
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerances().hermitian * scale) {
      throw ConfigError("custom family '" + name + "': matrix at grid index " + std::to_string(i) +
                        " (xi=" + std::to_string(grid.xi[i]) + ") is not Hermitian");
    }
  }

  auto splines = std::make_shared<EntrySplines>();
  splines->dim = dim;
  std::vector<double> re(count), im(count);
  for (Index k = 0; k < dim * dim; ++k) {
    for (std::size_t i = 0; i < count; ++i) {
      re[i] = grid.matrices[i](k / dim, k % dim).real();
      im[i] = grid.matrices[i](k / dim, k % dim).imag();
    }
    splines->re.emplace_back(re.data(), count, lo, step);
    splines->im.emplace_back(im.data(), count, lo, step);
  }
  return HamiltonianFamily(
      std::move(name), dim, Interval{lo, hi},
      [splines](double x) { return splines->value(x); },
      [splines](double x) { return splines->slope(x); });
}

HamiltonianFamily load_custom_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open custom family file '" + path.string() + "'");
  return family_from_grid(read_family_grid(in, path.string()), path.stem().string());
}

}  // namespace hamest

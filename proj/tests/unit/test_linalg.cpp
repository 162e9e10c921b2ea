#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "hamest/errors.hpp"
#include "hamest/linalg.hpp"
#include "hamest/tolerances.hpp"

using namespace hamest;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(values.size(), values.size());
  Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("eigendecompose of a diagonal matrix keeps the basis") {
  const SpectralData s = eigendecompose(HermitianOperator(diag({1.0, -1.0})));
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(-1.0));
  CHECK(max_abs(s.eigenvectors - ComplexMatrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("eigendecompose of sigma_x follows the gauge rule") {
  const SpectralData s = eigendecompose(HermitianOperator(pauli::x()));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(s.max() == doctest::Approx(1.0));
  CHECK(s.min() == doctest::Approx(-1.0));
  ComplexVector plus(2), minus(2);
  plus << r, r;
  minus << r, -r;
  CHECK((s.vector(0) - plus).norm() < 1e-12);
  CHECK((s.vector(1) - minus).norm() < 1e-12);
}

TEST_CASE("eigendecompose flags degenerate spectra") {
  const HermitianOperator m(diag({2.0, 2.0, -1.0}));
  CHECK_THROWS_AS(eigendecompose(m), DegenerateSpectrum);
  try {
    eigendecompose(m);
  } catch (const DegenerateSpectrum& e) {
    CHECK(e.gap() == doctest::Approx(0.0));
  }
  CHECK_NOTHROW(eigendecompose(m, Degeneracy::allow));
}

TEST_CASE("eigendecompose is deterministic") {
  Rng rng(11);
  const HermitianOperator m = random_hermitian(5, rng);
  const SpectralData a = eigendecompose(m);
  const SpectralData b = eigendecompose(m);
  CHECK(max_abs(a.eigenvectors - b.eigenvectors) == 0.0);
  CHECK((a.eigenvalues - b.eigenvalues).norm() == 0.0);
}

TEST_CASE("Hermitian and unitary constructors validate") {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(HermitianOperator{m}, NotHermitian);
  CHECK_THROWS_AS(UnitaryOperator{m}, NotUnitary);
  CHECK_THROWS_AS(HermitianOperator{ComplexMatrix::Zero(2, 3)}, DimensionMismatch);
}

TEST_CASE("spectral gap examples") {
  CHECK(spectral_gap(HermitianOperator(pauli::z())) == doctest::Approx(2.0));
  CHECK(spectral_gap(HermitianOperator(diag({3.0, 1.0, 0.0}))) == doctest::Approx(3.0));
  CHECK(spectral_gap(HermitianOperator(0.5 * pauli::y())) == doctest::Approx(1.0));
}

TEST_CASE("herm_exp examples") {
  CHECK(max_abs(herm_exp(HermitianOperator(pauli::x()), 0.0).matrix() -
                ComplexMatrix::Identity(2, 2)) < 1e-14);

  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = Complex(0, -1);
  expected(1, 1) = Complex(0, 1);
  CHECK(max_abs(herm_exp(HermitianOperator(pauli::z()), -std::numbers::pi / 2).matrix() -
                expected) < 1e-12);

  const double xi = std::numbers::pi / 4, t = 1.0;
  const HermitianOperator h(std::cos(xi) * pauli::z() + std::sin(xi) * pauli::x());
  const Complex a(std::cos(t), -std::cos(xi) * std::sin(t));
  const Complex b(0.0, -std::sin(xi) * std::sin(t));
  ComplexMatrix closed(2, 2);
  closed << a, b, b, std::conj(a);
  CHECK(max_abs(herm_exp(h, -t).matrix() - closed) < 1e-12);
}

TEST_CASE("kron examples") {
  CHECK(max_abs(kron(pauli::identity(), pauli::identity()) - ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  const ComplexMatrix k = kron(p0, pauli::x());
  CHECK(max_abs(k.topLeftCorner(2, 2) - pauli::x()) == 0.0);
  CHECK(max_abs(k.bottomRows(2)) == 0.0);
  CHECK(max_abs(kron(pauli::z(), pauli::identity()) - diag({1, 1, -1, -1})) == 0.0);
}

TEST_CASE("partial trace examples") {
  const std::array<Index, 2> dims{2, 2};
  const std::array<Index, 1> keep_a{0}, keep_b{1};

  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz(0, 0) = 1.0;
  CHECK(max_abs(partial_trace(zz, dims, keep_a) - diag({1.0, 0.0})) < 1e-15);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix rho = bell * bell.adjoint();
  CHECK(max_abs(partial_trace(rho, dims, keep_b) - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);

  CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(3, 3), dims, keep_a), DimensionMismatch);
}

TEST_CASE("random generators are deterministic per seed") {
  Rng a(42), b(42);
  CHECK(max_abs(random_unitary(2, a).matrix() - random_unitary(2, b).matrix()) == 0.0);
  CHECK(max_abs(random_hermitian(3, a).matrix() - random_hermitian(3, b).matrix()) == 0.0);
}

TEST_CASE("random unitaries are unitary") {
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const ComplexMatrix u = random_unitary(1 + k % 6, rng).matrix();
    REQUIRE(max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) < 1e-10);
  }
}

TEST_CASE("Haar second moment of the trace at d=2") {
  // E|tr U|^2 = 1 for Haar-random U(d).
  Rng rng(2024);
  double sum = 0.0;
  const int draws = 2000;
  for (int k = 0; k < draws; ++k) sum += std::norm(random_unitary(2, rng).matrix().trace());
  CHECK(std::abs(sum / draws - 1.0) < 0.1);
}

TEST_CASE("property: eigendecomposition reconstructs the matrix") {
  Rng rng(7);
  for (int k = 0; k < 500; ++k) {
    const Index d = 2 + k % 7;
    const HermitianOperator m = random_hermitian(d, rng);
    const SpectralData s = eigendecompose(m, Degeneracy::allow);
    const ComplexMatrix rebuilt =
        s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    REQUIRE((rebuilt - m.matrix()).norm() <= 1e-9 * (1.0 + m.matrix().norm()));
    for (Index i = 1; i < d; ++i) REQUIRE(s.eigenvalues(i - 1) >= s.eigenvalues(i));
  }
}

TEST_CASE("property: spectral gap is unitarily invariant") {
  Rng rng(8);
  for (int k = 0; k < 200; ++k) {
    const Index d = 2 + k % 5;
    const HermitianOperator m = random_hermitian(d, rng);
    const ComplexMatrix u = random_unitary(d, rng).matrix();
    const HermitianOperator rotated = HermitianOperator::symmetrized(u * m.matrix() * u.adjoint());
    REQUIRE(std::abs(spectral_gap(rotated) - spectral_gap(m)) < 1e-9);
  }
}

TEST_CASE("property: herm_exp group law") {
  Rng rng(9);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const HermitianOperator m = random_hermitian(2 + k % 4, rng);
    const double a = coeff(rng), b = coeff(rng);
    const ComplexMatrix lhs = herm_exp(m, a).matrix() * herm_exp(m, b).matrix();
    REQUIRE(max_abs(lhs - herm_exp(m, a + b).matrix()) < 1e-9);
  }
}

TEST_CASE("property: partial trace of a product state") {
  Rng rng(10);
  for (int k = 0; k < 50; ++k) {
    const Index da = 1 + k % 3, db = 2 + k % 4;
    const ComplexMatrix a = random_hermitian(da, rng).matrix();
    const ComplexMatrix b = random_hermitian(db, rng).matrix();
    const std::array<Index, 2> dims{da, db};
    const std::array<Index, 1> keep_a{0}, keep_b{1};
    REQUIRE(max_abs(partial_trace(kron(a, b), dims, keep_a) - a * b.trace()) < 1e-12);
    REQUIRE(max_abs(partial_trace(kron(a, b), dims, keep_b) - b * a.trace()) < 1e-12);
  }
}

TEST_CASE("three-party partial trace keeps the requested factors") {
  Rng rng(12);
  const ComplexMatrix a = random_hermitian(2, rng).matrix();
  const ComplexMatrix b = random_hermitian(3, rng).matrix();
  const ComplexMatrix c = random_hermitian(2, rng).matrix();
  const std::array<Index, 3> dims{2, 3, 2};
  const std::array<Index, 2> keep{0, 2};
  CHECK(max_abs(partial_trace(kron(kron(a, b), c), dims, keep) - kron(a, c) * b.trace()) < 1e-12);
}

TEST_CASE("tolerance profiles") {
  CHECK(tolerance_profile("default").degeneracy == doctest::Approx(1e-9));
  CHECK(tolerance_profile("loose").unitary > tolerance_profile("default").unitary);
  CHECK(tolerance_profile("loose").degeneracy == tolerance_profile("default").degeneracy);
  CHECK_THROWS_AS(tolerance_profile("bogus"), ConfigError);
}

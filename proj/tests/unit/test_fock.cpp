#include "doctest.h"

#include <random>
#include <vector>

#include "homent/error.hpp"
#include "homent/fock.hpp"
#include "support/generators.hpp"

using namespace homent;
using namespace homent::fock;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("state_from_amplitudes normalizes without stripping phase") {
  const auto s1 = state_from_amplitudes(1.0, 0.0, 0.0);
  CHECK(close(s1.amp20(), 1.0));
  CHECK(close(s1.amp11(), 0.0));

  const auto s2 = state_from_amplitudes(1.0, 0.0, 1.0);
  CHECK(close(s2.amp20(), 1.0 / std::sqrt(2.0)));
  CHECK(close(s2.amp02(), 1.0 / std::sqrt(2.0)));

  const auto s3 = state_from_amplitudes(Complex(0.0, 2.0), 0.0, 0.0);
  CHECK(close(s3.amp20(), Complex(0.0, 1.0)));

  CHECK(s2.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state_from_amplitudes rejects the zero vector") {
  try {
    (void)state_from_amplitudes(0.0, 0.0, 0.0);
    FAIL("expected zero-state error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroState);
  }
}

TEST_CASE("density_from_pure") {
  const auto rho20 = density_from_pure(state_from_amplitudes(1.0, 0.0, 0.0));
  CHECK(rho20.matrix().isApprox(Matrix3c(Eigen::Vector3cd(1.0, 0.0, 0.0).asDiagonal()), 1e-15));

  const auto noon = density_from_pure(state_from_amplitudes(1.0, 0.0, 1.0));
  for (int i : {0, 2})
    for (int j : {0, 2}) CHECK(close(noon(i, j), 0.5));
  CHECK(close(noon(1, 1), 0.0));

  const auto noon_i = density_from_pure(state_from_amplitudes(1.0, 0.0, Complex(0.0, 1.0)));
  CHECK(close(noon_i(0, 2), Complex(0.0, -0.5)));
  CHECK(close(noon_i(2, 0), Complex(0.0, 0.5)));

  // Rank one, trace one.
  Eigen::SelfAdjointEigenSolver<Matrix3c> es(noon.matrix());
  CHECK(es.eigenvalues()(2) == doctest::Approx(1.0));
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-12);
  CHECK(std::abs(es.eigenvalues()(1)) < 1e-12);
}

TEST_CASE("mix: convex combinations and weight validation") {
  const auto p20 = DensityMatrix::basis_projector(0);
  const auto p11 = DensityMatrix::basis_projector(1);
  const auto p02 = DensityMatrix::basis_projector(2);

  const std::vector<DensityMatrix> two = {p20, p02};
  const std::vector<double> halves = {0.5, 0.5};
  const auto dephased = mix(two, halves);
  CHECK(dephased.populations().isApprox(Eigen::Vector3d(0.5, 0.0, 0.5)));
  CHECK(close(dephased(0, 2), 0.0));

  const std::vector<DensityMatrix> one = {p11};
  const std::vector<double> w1 = {1.0};
  CHECK(mix(one, w1).matrix().isApprox(p11.matrix()));

  const std::vector<DensityMatrix> three = {p02, p11, p20};
  const std::vector<double> w3 = {0.25, 0.25, 0.5};
  CHECK(mix(three, w3).populations().isApprox(Eigen::Vector3d(0.5, 0.25, 0.25)));

  const std::vector<double> bad = {0.5, 0.6};
  CHECK_THROWS_AS(mix(two, bad), Error);
  try {
    (void)mix(two, bad);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadWeights);
  }
  const std::vector<double> negative = {1.5, -0.5};
  CHECK_THROWS_AS(mix(two, negative), Error);
}

TEST_CASE("dephase_corner") {
  const auto noon = density_from_pure(state_from_amplitudes(1.0, 0.0, 1.0));
  CHECK(dephase_corner(noon, 1.0).matrix().isApprox(noon.matrix()));

  const auto flat = dephase_corner(noon, 0.0);
  CHECK(flat.populations().isApprox(Eigen::Vector3d(0.5, 0.0, 0.5)));
  CHECK(close(flat(0, 2), 0.0));

  const auto half = dephase_corner(noon, 0.5);
  CHECK(std::abs(half(0, 2)) == doctest::Approx(0.25));
  CHECK(std::abs(half(2, 0)) == doctest::Approx(0.25));

  try {
    (void)dephase_corner(noon, 1.5);
    FAIL("expected range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Range);
  }
  CHECK_THROWS_AS(dephase_corner(noon, -0.1), Error);

  // A pure state with weight on all three levels has det = -|abc|^2 (1-d)^2
  // after corner dephasing, so only d = 1 is allowed.
  const auto spread = density_from_pure(state_from_amplitudes(1.0, 1.0, 1.0));
  CHECK(dephase_corner(spread, 1.0).matrix().isApprox(spread.matrix()));
  try {
    (void)dephase_corner(spread, 0.9);
    FAIL("expected physicality error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Physicality);
  }
}

TEST_CASE("is_physical examples") {
  const DensityMatrix good(Matrix3c(Eigen::Vector3cd(0.5, 0.0, 0.5).asDiagonal()));
  CHECK(is_physical(good).physical);

  const auto neg = is_physical(Matrix3c(Eigen::Vector3cd(1.2, -0.2, 0.0).asDiagonal()));
  CHECK_FALSE(neg.physical);
  CHECK_FALSE(neg.positive_ok);
  CHECK(neg.trace_ok);
  CHECK(neg.min_eigenvalue == doctest::Approx(-0.2));

  // Corner block [[0.5, 0.6], [0.6, 0.5]] has eigenvalues 0.5 +- 0.6.
  Matrix3c m = Matrix3c::Zero();
  m(0, 0) = 0.5;
  m(2, 2) = 0.5;
  m(0, 2) = 0.6;
  m(2, 0) = 0.6;
  const auto r = is_physical(m);
  CHECK_FALSE(r.physical);
  CHECK(r.min_eigenvalue == doctest::Approx(-0.1).epsilon(1e-12));

  Matrix3c nonherm = good.matrix();
  nonherm(0, 1) = 0.1;
  const auto h = is_physical(nonherm);
  CHECK_FALSE(h.hermitian_ok);
  CHECK_FALSE(h.physical);

  Matrix3c scaled = 2.0 * good.matrix();
  CHECK_FALSE(is_physical(scaled).trace_ok);
  CHECK(is_physical(scaled, 1.5).physical);
}

TEST_CASE("property: operations preserve physicality and compose") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const DensityMatrix a(testing::random_density3(rng, 1 + trial % 3));
    const DensityMatrix b(testing::random_density3(rng));
    const double w = unit(rng);
    const std::vector<DensityMatrix> states = {a, b};
    const std::vector<double> weights = {w, 1.0 - w};
    const auto mixed = mix(states, weights);
    REQUIRE(is_physical(mixed).physical);
    CHECK(std::abs(mixed.matrix().trace() - 1.0) < 1e-12);
    CHECK((mixed.matrix() - mixed.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    // Without |1,1> coherences corner dephasing is a pinching and stays physical.
    Matrix3c block = a.matrix();
    block(0, 1) = block(1, 0) = block(1, 2) = block(2, 1) = 0.0;
    const DensityMatrix cut(block);
    const double d1 = unit(rng);
    const double d2 = unit(rng);
    const auto twice = dephase_corner(dephase_corner(cut, d1), d2);
    const auto once = dephase_corner(cut, d1 * d2);
    CHECK((twice.matrix() - once.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(is_physical(twice).physical);

    // density_from_pure o state_from_amplitudes ignores overall scale.
    const Complex s = testing::random_complex(rng);
    const Complex x = testing::random_complex(rng), y = testing::random_complex(rng),
                  z = testing::random_complex(rng);
    const auto r1 = density_from_pure(state_from_amplitudes(x, y, z));
    const auto r2 = density_from_pure(state_from_amplitudes(s * x, s * y, s * z));
    CHECK((r1.matrix() - r2.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_physical(r1).physical);
  }
}

#include <random>

#include "doctest.h"

#include "gpcons/control.hpp"
#include "gpcons/fusion.hpp"
#include "test_support.hpp"

using namespace gpcons;

namespace {

Vector stack(const Matrix& rows) {
  Vector v(rows.size());
  for (Index i = 0; i < rows.rows(); ++i) v.segment(i * rows.cols(), rows.cols()) = rows.row(i).transpose();
  return v;
}

}  // namespace

TEST_SUITE("control") {

TEST_CASE("perfect consensus") {
  const Vector xl = (Vector(2) << 0.3, -0.2).finished();
  Matrix x(4, 2);
  for (Index i = 0; i < 4; ++i) x.row(i) = xl.transpose();
  const ConsensusState cs = consensus_error(x, xl, reference_topology());
  CHECK(cs.e.norm() == 0.0);
  CHECK(cs.xi.norm() == 0.0);
}

TEST_CASE("unit error at agent 1 gives the first column of the grounded laplacian") {
  const Topology t = reference_topology();
  Matrix x = Matrix::Zero(4, 2);
  x(0, 1) = 1.0;
  const ConsensusState cs = consensus_error(x, Vector::Zero(2), t);
  const Matrix Lt = grounded_laplacian(t).matrix;
  for (Index i = 0; i < 4; ++i) {
    CHECK(cs.xi(i, 0) == 0.0);
    CHECK(cs.xi(i, 1) == Lt(i, 0));
  }
}

TEST_CASE("scalar two-agent chain") {
  const Topology t = Topology::from_edges(2, {{0, 1}}, {0});
  Matrix x(2, 1);
  x << 1.0, 0.0;
  const ConsensusState cs = consensus_error(x, Vector::Zero(1), t);
  CHECK(cs.xi(0, 0) == 2.0);
  CHECK(cs.xi(1, 0) == -1.0);
}

TEST_CASE("per-agent consensus equals the stacked product") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<Index> size(1, 10), dim(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology t = testing_support::random_topology(rng, size(rng));
    const Index m = dim(rng);
    const Matrix x = testing_support::random_matrix(rng, t.size(), m, -3.0, 3.0);
    const Vector xl = testing_support::random_matrix(rng, m, 1, -3.0, 3.0);
    const ConsensusState cs = consensus_error(x, xl, t);
    const Vector expected = testing_support::stacked_grounded_product(t, stack(cs.e), m);
    CHECK((stack(cs.xi) - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("control inputs") {
  const Vector zero = Vector::Zero(2);
  CHECK(control_input(ControlMode::DistributedGP, 2.0, zero, zero).norm() == 0.0);
  const Vector xi = (Vector(2) << 1.0, -1.0).finished();
  CHECK(control_input(ControlMode::NoLearning, 2.0, xi, std::nullopt) == (Vector(2) << -2.0, 2.0).finished());

  const std::vector<LocalPrediction> nb{{1, 0, 0.0, 4.0}};
  const std::vector<double> a{0.0, 1.0};
  const double fused = fuse({0, 0, 1.0, 1.0}, nb, a).mean;
  const Vector pred = (Vector(2) << fused, 0.0).finished();
  const Vector u = control_input(ControlMode::DistributedGP, 2.0, xi, pred);
  CHECK(u(0) == doctest::Approx(-2.0 - 0.8));
  CHECK(u(1) == doctest::Approx(2.0));

  const Vector f_hat = (Vector(2) << 0.5, 0.25).finished();
  const Vector u2 = control_input(ControlMode::IndividualGP, 1.0, xi, pred, f_hat);
  CHECK(u2(0) == doctest::Approx(-1.0 - 0.8 - 0.5));
  CHECK(u2(1) == doctest::Approx(1.0 - 0.25));

  CHECK_THROWS_AS(control_input(ControlMode::DistributedGP, 2.0, xi, std::nullopt), ValidationError);
  CHECK_THROWS_AS(control_input(ControlMode::NoLearning, 2.0, xi, pred), ValidationError);
}

TEST_CASE("control input is linear in the consensus error") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = testing_support::random_matrix(rng, 3, 1);
    const Vector b = testing_support::random_matrix(rng, 3, 1);
    const Vector p = testing_support::random_matrix(rng, 3, 1);
    const Vector zero = Vector::Zero(3);
    const Vector lhs = control_input(ControlMode::IndividualGP, 1.7, a + b, p) -
                       control_input(ControlMode::IndividualGP, 1.7, zero, p);
    const Vector rhs = control_input(ControlMode::IndividualGP, 1.7, a, p) +
                       control_input(ControlMode::IndividualGP, 1.7, b, p) -
                       2.0 * control_input(ControlMode::IndividualGP, 1.7, zero, p);
    CHECK((lhs - rhs).norm() <= 1e-12);
  }
}

TEST_CASE("mode names") {
  for (ControlMode mode : {ControlMode::NoLearning, ControlMode::IndividualGP, ControlMode::DistributedGP}) {
    CHECK(parse_control_mode(to_string(mode)) == mode);
  }
  CHECK(to_string(ControlMode::NoLearning) == "none");
  CHECK_FALSE(uses_learning(ControlMode::NoLearning));
  CHECK_THROWS_AS(parse_control_mode("fancy"), ValidationError);
}

TEST_CASE("radius") {
  CHECK(theorem1_radius(0.0, 2.0, 0.5) == 0.0);
  CHECK(theorem1_radius(2.0, 4.0, 0.5) == doctest::Approx(0.5 * theorem1_radius(2.0, 2.0, 0.5)));
  CHECK(theorem1_radius(8.0, 2.0, 0.5) == doctest::Approx(std::sqrt(16.0) / 1.0));
  CHECK(theorem1_nu(0.5, (Vector(2) << 1.0, 2.0).finished()) == doctest::Approx(2 * 0.25 + 5.0));
  CHECK_THROWS_AS(theorem1_radius(-1.0, 2.0, 0.5), ValidationError);
  CHECK_THROWS_AS(theorem1_radius(1.0, 0.0, 0.5), ValidationError);

  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double nu = u(rng), k = u(rng), l = u(rng), s = 1.0 + u(rng);
    const double r = theorem1_radius(nu, k, l);
    CHECK(theorem1_radius(nu, k * s, l) < r);
    CHECK(theorem1_radius(nu, k, l * s) < r);
    CHECK(theorem1_radius(nu * s, k, l) > r);
  }
}

TEST_CASE("gain validation") {
  CHECK_NOTHROW(validate_gains({1.0, 2.0}, 2));
  CHECK_THROWS_AS(validate_gains({1.0}, 2), ValidationError);
  CHECK_THROWS_AS(validate_gains({1.0, 0.0}, 2), ValidationError);
}

}

#include <random>

#include "doctest.h"

#include "gpcons/topology.hpp"
#include "test_support.hpp"

using namespace gpcons;

TEST_SUITE("topology") {

TEST_CASE("laplacian of a single edge") {
  const Topology t = Topology::from_edges(2, {{0, 1}}, {0});
  Matrix expected(2, 2);
  expected << 1, -1, -1, 1;
  CHECK(laplacian(t) == expected);
}

TEST_CASE("laplacian of the reference graph has degrees (1,2,2,1)") {
  const Matrix L = laplacian(reference_topology());
  CHECK(L.diagonal() == Vector((Vector(4) << 1, 2, 2, 1).finished()));
  CHECK(L(0, 2) == -1.0);
  CHECK(L(0, 1) == 0.0);
  CHECK(L.isApprox(L.transpose()));
}

TEST_CASE("graph without edges is rejected") {
  const Topology t(Matrix::Zero(3, 3), Vector::Ones(3));
  CHECK_THROWS_AS(laplacian(t), ValidationError);
}

TEST_CASE("grounded laplacian of the reference graph") {
  const GroundedLaplacian g = grounded_laplacian(reference_topology());
  Matrix expected(4, 4);
  expected << 2, 0, -1, 0,
              0, 3, -1, -1,
              -1, -1, 2, 0,
              0, -1, 0, 1;
  CHECK(g.matrix == expected);
  const Vector oracle = testing_support::jacobi_eigenvalues(expected);
  CHECK(g.lambda_min == doctest::Approx(oracle(0)).epsilon(1e-10));
  CHECK(g.lambda_max == doctest::Approx(oracle(3)).epsilon(1e-10));
  CHECK(g.lambda_min == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-10));
  CHECK(g.lambda_min > 0.0);
}

TEST_CASE("single agent grounded laplacian") {
  const Topology t(Matrix::Zero(1, 1), Vector::Ones(1));
  const GroundedLaplacian g = grounded_laplacian(t);
  CHECK(g.matrix(0, 0) == 1.0);
  CHECK(g.lambda_min == 1.0);
}

TEST_CASE("assumption 3 diagnostics") {
  CHECK(check_assumption3(reference_topology()).ok());

  const Topology pairs = Topology::from_edges(4, {{0, 1}, {2, 3}}, {0});
  const auto c1 = check_assumption3(pairs);
  CHECK_FALSE(c1.ok());
  CHECK_FALSE(c1.connected);
  CHECK_FALSE(c1.diagnostic.empty());
  CHECK_THROWS_AS(grounded_laplacian(pairs), ValidationError);

  const Topology chain = Topology::from_edges(3, {{0, 1}, {1, 2}}, {});
  const auto c2 = check_assumption3(chain);
  CHECK(c2.connected);
  CHECK_FALSE(c2.leader_linked);
  CHECK_THROWS_AS(grounded_laplacian(chain), ValidationError);
}

TEST_CASE("structural invariants") {
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_WITH_AS(Topology(asym, Vector::Ones(2)), doctest::Contains("adjacency not symmetric"), ValidationError);

  Matrix loop = Matrix::Zero(2, 2);
  loop(0, 0) = 1.0;
  CHECK_THROWS_AS(Topology(loop, Vector::Ones(2)), ValidationError);

  Matrix half = Matrix::Zero(2, 2);
  half(0, 1) = half(1, 0) = 0.5;
  CHECK_THROWS_AS(Topology(half, Vector::Ones(2)), ValidationError);
  CHECK_NOTHROW(Topology(half, Vector::Ones(2), true));

  CHECK_THROWS_AS(Topology(Matrix::Zero(2, 3), Vector::Ones(2)), ValidationError);
  CHECK_THROWS_AS(Topology(Matrix::Zero(2, 2), Vector::Ones(3)), ValidationError);
  CHECK_THROWS_AS(Topology::from_edges(2, {{0, 5}}, {0}), ValidationError);
}

TEST_CASE("neighbors") {
  const Topology t = reference_topology();
  CHECK(t.neighbors(1) == std::vector<Index>{2, 3});
  CHECK(t.neighbors(3) == std::vector<Index>{1});
}

TEST_CASE("random graphs: L annihilates ones, grounded is positive definite") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Index> size(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology t = testing_support::random_topology(rng, size(rng));
    const Matrix L = laplacian(t);
    CHECK((L * Vector::Ones(t.size())).norm() <= 1e-12);
    const GroundedLaplacian g = grounded_laplacian(t);
    CHECK(g.lambda_min > 0.0);
    const Vector oracle = testing_support::jacobi_eigenvalues(g.matrix);
    CHECK(g.lambda_min == doctest::Approx(oracle(0)).epsilon(1e-10));
    const Matrix inv = g.matrix.inverse();
    const double lmax_inv = testing_support::jacobi_eigenvalues(inv)(t.size() - 1);
    CHECK(std::abs(1.0 / lmax_inv - g.lambda_min) <= 1e-9);
  }
}

}

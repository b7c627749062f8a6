#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pasmin/multi_index.hpp"
#include "pasmin/rng.hpp"

using pasmin::MultiIndexBasis;
using pasmin::Rng;

TEST_CASE("degree_from_beta is the largest integer strictly below beta") {
  CHECK(pasmin::degree_from_beta(2.0) == 1);
  CHECK(pasmin::degree_from_beta(2.5) == 2);
  CHECK(pasmin::degree_from_beta(3.0) == 2);
  CHECK(pasmin::degree_from_beta(4.0) == 3);
  CHECK(pasmin::degree_from_beta(1.5) == 1);
  CHECK_THROWS_AS(pasmin::degree_from_beta(1.0), std::invalid_argument);
  CHECK_THROWS_AS(pasmin::degree_from_beta(0.5), std::invalid_argument);
}

TEST_CASE("basis enumeration size and leading indices") {
  const MultiIndexBasis b11(1, 1);
  REQUIRE(b11.size() == 2);
  CHECK(b11.index(0) == std::vector<int>{0});
  CHECK(b11.index(1) == std::vector<int>{1});

  const MultiIndexBasis b22(2, 2);
  REQUIRE(b22.size() == 6);  // binomial(4, 2)
  CHECK(b22.index(0) == std::vector<int>{0, 0});
  CHECK(b22.index(1) == std::vector<int>{1, 0});
  CHECK(b22.index(2) == std::vector<int>{0, 1});
  CHECK(b22.index(3) == std::vector<int>{2, 0});
  CHECK(b22.index(4) == std::vector<int>{1, 1});
  CHECK(b22.index(5) == std::vector<int>{0, 2});

  CHECK(MultiIndexBasis(3, 1).size() == 4);
  CHECK(MultiIndexBasis(3, 2).size() == 10);
}

TEST_CASE("unit multi-indices follow coordinate order for every dimension") {
  for (int d = 1; d <= 4; ++d) {
    const MultiIndexBasis b(d, 2);
    for (int i = 0; i < d; ++i) {
      std::vector<int> unit(static_cast<std::size_t>(d), 0);
      unit[static_cast<std::size_t>(i)] = 1;
      CHECK(b.index(1 + i) == unit);
    }
  }
}

TEST_CASE("factorials are positive and match the index") {
  const MultiIndexBasis b(2, 3);
  CHECK(b.factorial(0) == 1.0);
  for (int j = 0; j < b.size(); ++j) {
    double expected = 1.0;
    for (int m : b.index(j)) {
      for (int v = 2; v <= m; ++v) expected *= v;
    }
    CHECK(b.factorial(j) == expected);
    CHECK(b.factorial(j) > 0.0);
  }
}

TEST_CASE("feature vector values") {
  SECTION("u = 0 gives the first canonical vector") {
    for (auto [d, ell] : {std::pair{1, 2}, std::pair{2, 1}, std::pair{3, 2}}) {
      const MultiIndexBasis b(d, ell);
      std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
      const Eigen::VectorXd u = b.u_vector(zero);
      CHECK(u[0] == 1.0);
      CHECK(u.tail(u.size() - 1).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SECTION("d=1, ell=2 at u=2: (2^0/0!, 2^1/1!, 2^2/2!)") {
    const MultiIndexBasis b(1, 2);
    const double point[] = {2.0};
    const Eigen::VectorXd u = b.u_vector(point);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 2.0);
    CHECK(u[2] == 2.0);
  }
  SECTION("degree-1 block is u itself") {
    const MultiIndexBasis b(2, 1);
    const double point[] = {3.0, -1.0};
    const Eigen::VectorXd u = b.u_vector(point);
    CHECK(u[0] == 1.0);
    CHECK(u[1] == 3.0);
    CHECK(u[2] == -1.0);
  }
}

TEST_CASE("selector extracts the coordinates through the feature vector") {
  Rng rng(11);
  for (auto [d, ell] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 2}}) {
    const MultiIndexBasis b(d, ell);
    const Eigen::MatrixXd a = b.selector_matrix();
    REQUIRE(a.rows() == d);
    REQUIRE(a.cols() == b.size());
    CHECK(a.sum() == static_cast<double>(d));
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd x(d);
      for (int j = 0; j < d; ++j) x[j] = rng.uniform(-2.0, 2.0);
      const Eigen::VectorXd u = b.u_vector({x.data(), static_cast<std::size_t>(d)});
      CHECK((a * u - x).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("feature vector scales by c^|m| per component") {
  Rng rng(12);
  const MultiIndexBasis b(2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(2);
    x << rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5);
    const double c = rng.uniform(-2.0, 2.0);
    const Eigen::VectorXd base = b.u_vector({x.data(), 2});
    const Eigen::VectorXd scaled_arg = c * x;
    const Eigen::VectorXd scaled = b.u_vector({scaled_arg.data(), 2});
    for (int j = 0; j < b.size(); ++j) {
      int total = 0;
      for (int m : b.index(j)) total += m;
      CHECK(scaled[j] == Catch::Approx(std::pow(c, total) * base[j]).margin(1e-12));
    }
  }
}

TEST_CASE("enumeration is deterministic across constructions") {
  const MultiIndexBasis a(3, 3);
  const MultiIndexBasis b(3, 3);
  REQUIRE(a.size() == b.size());
  CHECK(a.indices() == b.indices());
}

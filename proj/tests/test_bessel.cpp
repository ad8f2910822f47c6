#include <cmath>

#include "doctest.h"
#include "latticeqfi/bessel.hpp"
#include "oracles.hpp"

using namespace latticeqfi;

TEST_CASE("J_1 at the working-point argument matches the ascending series") {
  const double x = 2.0 * 30.4 / 33.0;
  const double ref = oracle::bessel_series(1, x);
  CHECK(std::abs(bessel_j(1, x) - ref) <= 1e-12 * std::abs(ref));
  CHECK(std::abs(ref - std::cyl_bessel_j(1.0, x)) <= 1e-13);
}

TEST_CASE("orders 0..12 over a range of arguments") {
  for (double x : {1e-3, 0.1, 0.5, 1.0, 1.84242424, 3.7, 7.5, 12.0}) {
    const std::vector<double> seq = bessel_j_sequence(12, x);
    REQUIRE(seq.size() == 13);
    for (int n = 0; n <= 12; ++n) {
      const double ref = oracle::bessel_series(n, x);
      CAPTURE(n);
      CAPTURE(x);
      CHECK(std::abs(seq[n] - ref) <= 1e-12 * std::max(std::abs(ref), 1e-300) + 1e-15);
    }
  }
}

TEST_CASE("zero argument, negative orders and negative arguments") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(bessel_j(5, 0.0) == 0.0);
  const double x = 2.3;
  CHECK(bessel_j(-3, x) == doctest::Approx(-bessel_j(3, x)).epsilon(1e-14));
  CHECK(bessel_j(-2, x) == doctest::Approx(bessel_j(2, x)).epsilon(1e-14));
  CHECK(bessel_j(1, -x) == doctest::Approx(-bessel_j(1, x)).epsilon(1e-14));
  CHECK(bessel_j(2, -x) == doctest::Approx(bessel_j(2, x)).epsilon(1e-14));
}

TEST_CASE("large orders decay without overflow") {
  const std::vector<double> seq = bessel_j_sequence(80, 1.5);
  for (double v : seq) CHECK(std::isfinite(v));
  CHECK(std::abs(seq[80]) < 1e-100);
  CHECK(seq[40] == doctest::Approx(std::cyl_bessel_j(40.0, 1.5)).epsilon(1e-10));
}

TEST_CASE("derivative against a central difference") {
  for (int n : {0, 1, 4}) {
    const double x = 1.84;
    const double h = 1e-5;
    const double fd = (oracle::bessel_series(n, x + h) - oracle::bessel_series(n, x - h)) / (2 * h);
    CHECK(bessel_j_derivative(n, x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "ergo/verdict.hpp"

using namespace ergo;

namespace {
std::vector<double> pos(std::size_t n) {
  std::vector<double> p;
  for (std::size_t k = 0; k < n; ++k) p.push_back(4.0 + k);
  return p;
}
}  // namespace

TEST_CASE("geometric convergence is Converged with the right limit") {
  std::vector<double> s;
  for (int k = 0; k < 14; ++k) s.push_back(3.0 - std::pow(0.5, k));
  const auto v = boundedness_verdict(s, {}, pos(s.size()));
  CHECK(v.converged());
  CHECK(v.limit == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("linear growth in log2 N is Diverging") {
  std::vector<double> s;
  for (int k = 0; k < 12; ++k) s.push_back(1.0 + k);
  const auto v = boundedness_verdict(s, {}, pos(s.size()));
  CHECK(v.diverging());
}

TEST_CASE("geometric growth is Diverging and tagged geometric") {
  std::vector<double> s;
  for (int k = 0; k < 12; ++k) s.push_back(std::pow(2.0, k));
  const auto v = boundedness_verdict(s, {}, pos(s.size()));
  CHECK(v.diverging());
  CHECK(v.growth == Growth::geometric);
}

TEST_CASE("a constant sequence converges to itself") {
  const std::vector<double> s(6, 7.5);
  const auto v = boundedness_verdict(s);
  CHECK(v.converged());
  CHECK(v.limit == doctest::Approx(7.5));
}

TEST_CASE("power-law tail with fast decay converges") {
  // s_k = 2 - 1/k^3 in the position variable
  std::vector<double> s, p;
  for (int k = 4; k <= 17; ++k) {
    s.push_back(2.0 - 1.0 / (double(k) * k * k));
    p.push_back(k);
  }
  const auto v = boundedness_verdict(s, {}, p);
  CHECK(v.converged());
  CHECK(v.limit == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("harmonic partial sums in the position variable diverge") {
  std::vector<double> s, p;
  double h = 0.0;
  for (int k = 1; k <= 14; ++k) {
    h += 1.0 / k;
    s.push_back(h);
    p.push_back(k);
  }
  CHECK_FALSE(boundedness_verdict(s, {}, p).converged());
}

TEST_CASE("fewer than three values are rejected") {
  CHECK_THROWS_AS(boundedness_verdict({1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(boundedness_verdict({1.0, 2.0, 3.0}, {}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("wynn epsilon accelerates a geometric series") {
  std::vector<double> s;
  double a = 0.0;
  for (int k = 0; k < 8; ++k) {
    a += std::pow(0.8, k);
    s.push_back(a);
  }
  const auto w = wynn_epsilon(s);
  REQUIRE(w.has_value());
  CHECK(*w == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("infinite_verdict reports Diverging") {
  CHECK(infinite_verdict("overflow").diverging());
}

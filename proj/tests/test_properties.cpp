// Randomized invariants, seeded so failures reproduce.
#include "doctest.h"

#include <random>

#include "ergo/min_solver.hpp"
#include "ergo/moments.hpp"
#include "ergo/single_birth.hpp"

using namespace ergo;

namespace {

ExplicitGenerator random_chain(std::mt19937_64& rng, std::size_t max_states = 50) {
  std::uniform_int_distribution<std::size_t> size(2, max_states);
  const std::size_t n = size(rng);
  std::uniform_real_distribution<double> rate(0.1, 5.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<ExplicitGenerator::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, (i + 1) % n, rate(rng)});  // a cycle keeps it irreducible
    for (int k = 0; k < 3; ++k) {
      const std::size_t j = pick(rng);
      if (j != i && j != (i + 1) % n) t.push_back({i, j, rate(rng)});
    }
  }
  return ExplicitGenerator(n, std::move(t), ChainKind::continuous, "random");
}

// single birth chain with random rates of comparable size
FunctionalSingleBirth random_single_birth(std::uint64_t seed) {
  auto r = [seed](std::uint64_t i, std::uint64_t salt) {
    std::mt19937_64 g(seed * 1000003ULL + i * 31ULL + salt);
    return std::uniform_real_distribution<double>(0.5, 1.5)(g);
  };
  return FunctionalSingleBirth(
      "random_sb", [r](StateIndex n) { return r(n, 1); },
      [r](StateIndex n) {
        if (n == 0) return Row{};
        Row row{{n - 1, r(n, 2)}};
        if (n >= 2) row.push_back({0, 0.2 * r(n, 3)});
        return row;
      });
}

}  // namespace

TEST_CASE("iterative and direct solves agree on random finite chains") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_chain(rng);
    const std::size_t N = *g.state_count() - 1;
    const auto sys = build_truncated_system(g, TargetSet{}, N, OrdinarySource{});
    const NonnegAffineOperator op(sys);
    const auto d = solve_direct(op);
    const auto it = solve_iterative(op);
    REQUIRE(d.status == SolveStatus::finite);
    REQUIRE(it.status == SolveStatus::finite);
    CHECK(relative_gap(it.x, d.x) <= 1e-9);
  }
}

TEST_CASE("truncated solutions grow with N, componentwise") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto sb = random_single_birth(seed);
    std::vector<double> prev;
    for (std::size_t N : {8u, 16u, 32u, 64u, 128u}) {
      const auto sys = build_truncated_system(sb, TargetSet{}, N, OrdinarySource{});
      const auto t = table_from_system(sys, 1);
      for (std::size_t i = 0; i < prev.size(); ++i) CHECK(t.by_state[i] >= prev[i] - 1e-12 * (1 + prev[i]));
      prev = t.by_state;
    }
  }
}

TEST_CASE("a truncated solution is a sub-solution of every larger truncation") {
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    const auto sb = random_single_birth(seed);
    const auto small = build_truncated_system(sb, TargetSet{}, 20, OrdinarySource{});
    const auto big = build_truncated_system(sb, TargetSet{}, 80, OrdinarySource{});
    const auto xs = solve_direct(NonnegAffineOperator(small)).x;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(big.size());
    y.head(xs.size()) = xs;
    CHECK(check_certificate(NonnegAffineOperator(big), y, CertificateSense::sub, 1e-12).holds);
  }
}

TEST_CASE("Jensen: second return moment dominates the squared first") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_chain(rng, 20);
    const auto tabs = moment_ladder(g, TargetSet{}, 2, *g.state_count() - 1);
    CHECK(tabs[1].h_values[0] >= tabs[0].h_values[0] * tabs[0].h_values[0] * (1 - 1e-12));
  }
}

TEST_CASE("exponential functional dominates the first moment and grows with lambda") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_chain(rng, 20);
    const std::size_t N = *g.state_count() - 1;
    const double q = min_total_rate(g, N);
    const double e1 = moment_ladder(g, TargetSet{}, 1, N)[0].h_values[0];
    double last = e1;
    for (double f : {0.01, 0.05, 0.1}) {
      const auto sys = build_truncated_system(g, TargetSet{}, N, ExponentialSource{f * q});
      const auto t = table_from_system(sys, 1);
      if (t.status != SolveStatus::finite) break;
      CHECK(t.h_values[0] >= last * (1 - 1e-12));
      last = t.h_values[0];
    }
  }
}

TEST_CASE("closed form holds on random single birth chains") {
  for (std::uint64_t seed = 21; seed <= 25; ++seed)
    CHECK(truncated_closed_form(random_single_birth(seed), 20).max_relative_gap <= 1e-9);
}

TEST_CASE("closed form within its forward error at larger N") {
  // catastrophes with bounded up rates make S_k grow geometrically, so
  // x_1 S_{k-1} - D_{k-1} cancels; the error is relative to x_1 S_{k-1}
  for (std::uint64_t seed = 21; seed <= 25; ++seed) {
    const auto sb = random_single_birth(seed);
    const std::size_t N = 100;
    const auto x = solve_direct(NonnegAffineOperator(build_truncated_system(sb, TargetSet{}, N, OrdinarySource{}))).x;
    TableauOptions opt;
    opt.full_rows = 0;
    const auto t = build_tableau(sb, N, opt);
    for (std::size_t k = 1; k <= N; ++k) {
      const long double cf = (long double)x[0] * t.S[k - 1] - t.D[k - 1];
      CHECK(std::abs(double(cf) - x[k - 1]) <= 1e-10 * double(1 + x[0] * t.S[k - 1]));
    }
  }
}

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ergo/classifier.hpp"
#include "ergo/verdict.hpp"
#include "ergo/zoo.hpp"

namespace ergo {

/// Result of checking a level-indexed test-function family against a
/// reduced inequality for i <= i_max and n <= n_max.
struct LevelCheckReport {
  std::string family;
  std::size_t n_max = 0, i_max = 0;
  double max_violation = 0.0;  // relative, positive part
  std::size_t violations = 0;
  std::size_t worst_n = 0, worst_i = 0, worst_l = 0;
  std::size_t rows_checked = 0;
  // divergence statistic (sup_i of the test function, or its H value) at
  // n = 1, 2, 4, ... <= n_max
  std::vector<std::size_t> stat_n;
  std::vector<double> statistic;
  BoundednessVerdict divergence;
  bool pass = false;  // no violation and divergence Diverging
  double seconds = 0.0;
};

enum class BrusselFamily { log_level, increment };
const char* to_string(BrusselFamily f);

/// (la + l4 l) f_i <= la f_{i+1} + l4 l f_{i-1} + 1 for 0 <= l <= i, f_0 = 0,
/// with la = lambda_1 * sum_u a(u) and l4 = lambda_4. The row is affine in l,
/// so l in {0, 1, i} covers every l.
LevelCheckReport brussel_level_check(double lambda1_atilde, double lambda4, BrusselFamily family,
                                     std::size_t n_max, std::size_t i_max, double tol = 1e-9);

/// Same inequality for an arbitrary family f(n, i), i >= 1.
LevelCheckReport brussel_level_check(double lambda1_atilde, double lambda4,
                                     const std::function<double(std::size_t, std::size_t)>& f, std::string name,
                                     std::size_t n_max, std::size_t i_max, double tol = 1e-9);

// power: d_i = i^-(1+1/i) up to n, then i^-(1+1/(n+1));
// loglog: d_i = 1/((i+9)log(i+9)) up to n, then minus the tail of 1/k^2;
// harmonic: y_0 = n+1, d_k = n - H_{k-1} (non-ergodic family)
enum class MultiGammaFamily { power, loglog, harmonic };
const char* to_string(MultiGammaFamily f);

/// d_i <= d_{i+1} + 1/c(i) with c(i) = i^2 (power, loglog; valid for
/// gamma <= 2) or c(i) = i (harmonic, gamma <= 1), plus y_0 <= y_1 + 1 for
/// the harmonic family. Throws ModelError when gamma exceeds the cap.
LevelCheckReport multi_gamma_level_check(double gamma, MultiGammaFamily family, std::size_t n_max,
                                         std::size_t i_max, double tol = 1e-9);

/// Checks a level function F(x) = f(n, |x|) directly on the rows of a
/// lattice model, H = {origin}: q(x) f_i <= sum_{y != origin} q(x,y) f_|y| + 1
/// for every x with 1 <= |x| <= max_level. Evidence-grade companion of the
/// reduced checks.
LevelCheckReport lattice_level_check(const LatticeModel& model,
                                     const std::function<double(std::size_t, std::size_t)>& f, std::string name,
                                     std::size_t n_max, std::size_t max_level, double tol = 1e-9);

/// Certificates from the reduced checks for lattice catalog models: Brussel
/// (log-level family, not strongly ergodic) and multi-gamma (power family
/// for gamma <= 2, harmonic family for gamma <= 1). Empty for other models
/// or when a check does not pass.
std::vector<ExternalCertificate> level_certificates(const ZooModel& m, std::size_t n_max = 1000,
                                                    std::size_t i_max = 10000);

/// The test functions themselves, for reuse by tests and the CLI.
double brussel_log_level(double lambda4, std::size_t n, std::size_t i);
double brussel_increment_level(double lambda1_atilde, double lambda4, std::size_t n, std::size_t i);

}  // namespace ergo

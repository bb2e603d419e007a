#pragma once

#include <cstdint>
#include <vector>

#include "archetypal/grid.hpp"
#include "archetypal/measure.hpp"
#include "archetypal/rng.hpp"

namespace archetypal::chain {

/// One step of the multiplicative random walk X_n = alpha_n (X_{n-1} - beta_n)
/// together with the running functionals
///   A_n = prod alpha_i,  B_n = sum beta_i / A_{i-1},  D_n = A_n * B_n.
struct Step {
  double alpha, beta, x, a, b, d;
};

struct Path {
  double x0 = 0.0;
  std::vector<Step> steps;
  bool overflowed = false;  // trajectory truncated when A/X/D left the double range
};

Path simulate(const MeasureSpec& spec, double x0, std::size_t n, RngStream& rng);

/// One draw of the reversed partial sum sum_{i<=n} beta_i * A_i.
double reversed_tail_sum(const MeasureSpec& spec, std::size_t n, RngStream& rng);

struct StoppedRun {
  std::size_t tau = 0;      // first n with A_n < 0 (= max_n when !terminated)
  double a_tau = 0.0;       // A_tau
  double b_tau = 0.0;       // B_tau
  bool terminated = false;
};

/// Runs the chain until the sign of A_n first turns negative.
/// Requires P(alpha < 0) > 0; gives up after max_n steps.
StoppedRun stopping_time_negative(const MeasureSpec& spec, RngStream& rng,
                                  std::size_t max_n = 10000);

struct WaldReport {
  double lhs = 0.0;          // mean of log|A_tau|
  double lhs_stderr = 0.0;
  double rhs = 0.0;          // K / q
  double mean_tau = 0.0;
  double mean_tau_stderr = 0.0;
  std::size_t excluded = 0;  // runs that hit max_n without a sign change
  std::size_t n = 0;
};

/// Monte Carlo check of E log|A_tau| = K / q over `n` independent stopped
/// runs. Requires q > 0 and K in (0, inf).
WaldReport wald_check(const MeasureSpec& spec, std::size_t n, std::uint64_t seed,
                      std::size_t max_n = 10000, int workers = 0);

struct MartingaleReport {
  double estimate = 0.0;   // mean of y(X_n)
  double stderr_ = 0.0;
  double reference = 0.0;  // y(x0)
  std::size_t n_paths = 0;
};

/// For y an (approximate) solution, E y(X_n) should equal y(x0).
MartingaleReport martingale_check(const MeasureSpec& spec, const GridFunction& y, double x0,
                                  std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                  int workers = 0);

}  // namespace archetypal::chain

#pragma once

#include <cstdint>
#include <vector>

#include "archetypal/measure.hpp"
#include "archetypal/rng.hpp"

namespace archetypal::series {

/// Truncation policy for the random series sum beta_n / A_{n-1}:
/// stop at the first depth n >= min_depth with |A_n|^{-1} <= tail_tolerance,
/// but never beyond max_depth.
struct SeriesConfig {
  double tail_tolerance = 1e-12;
  std::size_t min_depth = 16;
  std::size_t max_depth = 10000;
};

struct SeriesDraw {
  double value = 0.0;
  std::size_t depth = 0;
  bool capped = false;  // stopped by max_depth, not by the tail rule
};

/// One draw of Upsilon = sum_{n>=1} beta_n * A_{n-1}^{-1}.
/// Requires K > 0 (series converges a.s. in that regime).
SeriesDraw sample_upsilon(const MeasureSpec& spec, const SeriesConfig& cfg, RngStream& rng);

/// One draw of the reversed series sum_{i>=1} beta_i * A_i; requires K < 0.
/// Stops at the first depth n >= min_depth with |A_n| <= tail_tolerance.
SeriesDraw sample_upsilon_reversed(const MeasureSpec& spec, const SeriesConfig& cfg,
                                   RngStream& rng);

/// Empirical CDF of a sample batch (right-continuous step function).
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);

  double operator()(double x) const;  // fraction of samples <= x
  const std::vector<double>& sorted_samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }

  double dkw_halfwidth(double delta = 0.05) const;

  /// Size of the largest atom of the empirical law, as a fraction of n.
  double largest_jump() const;

 private:
  std::vector<double> samples_;
};

struct CdfDiagnostics {
  std::size_t n = 0;
  double mean_depth = 0.0;
  std::size_t max_depth_hits = 0;
  double dkw_halfwidth = 0.0;  // at delta = 0.05
  std::vector<std::string> caveats;
};

struct CanonicalCdf {
  EmpiricalCdf cdf;
  CdfDiagnostics diagnostics;
};

/// Empirical CDF of n draws of Upsilon; the canonical bounded solution when
/// K > 0, P(alpha > 0) = 1 and the standing assumptions hold.
///
/// Refuses specs where F_Upsilon is not a solution (q > 0) or the equation is
/// degenerate (fixed point exists); `allow_non_solution` downgrades both
/// refusals to caveats in the diagnostics. Draw i uses stream `i`, so results
/// are independent of `workers`.
CanonicalCdf canonical_cdf(const MeasureSpec& spec, std::size_t n, std::uint64_t seed,
                           const SeriesConfig& cfg = {}, bool allow_non_solution = false,
                           int workers = 0);

/// n draws of Upsilon (stream i for draw i); same regime checks as
/// sample_upsilon but validated once.
std::vector<SeriesDraw> sample_upsilon_batch(const MeasureSpec& spec, std::size_t n,
                                             std::uint64_t seed, const SeriesConfig& cfg = {},
                                             int workers = 0);

/// n draws of the reversed series.
std::vector<SeriesDraw> sample_upsilon_reversed_batch(const MeasureSpec& spec, std::size_t n,
                                                      std::uint64_t seed,
                                                      const SeriesConfig& cfg = {},
                                                      int workers = 0);

}  // namespace archetypal::series

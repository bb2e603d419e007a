#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace archetypal::stats {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanStderr mean_stderr(std::span<const double> xs);

/// One-sample Kolmogorov-Smirnov statistic of `sorted` against a continuous
/// CDF. `sorted` must be ascending.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic (ties handled by comparing the two
/// empirical CDFs only between distinct merged values).
double two_sample_ks(std::vector<double> a, std::vector<double> b);

/// Dvoretzky-Kiefer-Wolfowitz band half-width: sqrt(log(2/delta) / (2n)).
double dkw_halfwidth(std::size_t n, double delta = 0.05);

}  // namespace archetypal::stats

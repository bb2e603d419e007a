#include "archetypal/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archetypal/parallel.hpp"
#include "archetypal/stats.hpp"

namespace archetypal::series {

namespace {

void check_config(const SeriesConfig& cfg) {
  if (!(cfg.tail_tolerance > 0.0)) throw SpecError("tail_tolerance must be > 0");
  if (cfg.min_depth > cfg.max_depth)
    throw SpecError("min_depth must not exceed max_depth");
}

// One draw of sum beta_n / A_{n-1}; preconditions already verified.
SeriesDraw draw_upsilon(const MeasureSpec& spec, const SeriesConfig& cfg, RngStream& rng) {
  SeriesDraw out;
  double a = 1.0, sum = 0.0;
  for (std::size_t n = 1; n <= cfg.max_depth; ++n) {
    const auto [alpha, beta] = spec.sample(rng);
    sum += beta / a;
    a *= alpha;
    out.depth = n;
    if (n >= cfg.min_depth && 1.0 / std::abs(a) <= cfg.tail_tolerance) {
      out.value = sum;
      return out;
    }
  }
  out.value = sum;
  out.capped = true;
  return out;
}

SeriesDraw draw_upsilon_reversed(const MeasureSpec& spec, const SeriesConfig& cfg,
                                 RngStream& rng) {
  SeriesDraw out;
  double a = 1.0, sum = 0.0;
  for (std::size_t n = 1; n <= cfg.max_depth; ++n) {
    const auto [alpha, beta] = spec.sample(rng);
    a *= alpha;
    sum += beta * a;
    out.depth = n;
    if (n >= cfg.min_depth && std::abs(a) <= cfg.tail_tolerance) {
      out.value = sum;
      return out;
    }
  }
  out.value = sum;
  out.capped = true;
  return out;
}

std::vector<SeriesDraw> draw_batch(const MeasureSpec& spec, std::size_t n, std::uint64_t seed,
                                   const SeriesConfig& cfg, int workers, bool reversed) {
  std::vector<SeriesDraw> out(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = reversed ? draw_upsilon_reversed(spec, cfg, rng) : draw_upsilon(spec, cfg, rng);
  });
  return out;
}

}  // namespace

SeriesDraw sample_upsilon(const MeasureSpec& spec, const SeriesConfig& cfg, RngStream& rng) {
  check_config(cfg);
  const auto crit = measure::classify(spec);
  if (!(crit.K > 0.0))
    throw RegimeError("sample_upsilon: series requires K > 0 (spec has K = " +
                      std::to_string(crit.K) + ")");
  return draw_upsilon(spec, cfg, rng);
}

SeriesDraw sample_upsilon_reversed(const MeasureSpec& spec, const SeriesConfig& cfg,
                                   RngStream& rng) {
  check_config(cfg);
  const auto crit = measure::classify(spec);
  if (!(crit.K < 0.0))
    throw RegimeError("sample_upsilon_reversed: requires K < 0 (spec has K = " +
                      std::to_string(crit.K) + ")");
  return draw_upsilon_reversed(spec, cfg, rng);
}

std::vector<SeriesDraw> sample_upsilon_batch(const MeasureSpec& spec, std::size_t n,
                                             std::uint64_t seed, const SeriesConfig& cfg,
                                             int workers) {
  check_config(cfg);
  const auto crit = measure::classify(spec);
  if (!(crit.K > 0.0)) throw RegimeError("sample_upsilon: series requires K > 0");
  return draw_batch(spec, n, seed, cfg, workers, false);
}

std::vector<SeriesDraw> sample_upsilon_reversed_batch(const MeasureSpec& spec, std::size_t n,
                                                      std::uint64_t seed, const SeriesConfig& cfg,
                                                      int workers) {
  check_config(cfg);
  const auto crit = measure::classify(spec);
  if (!(crit.K < 0.0)) throw RegimeError("sample_upsilon_reversed: requires K < 0");
  return draw_batch(spec, n, seed, cfg, workers, true);
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw SpecError("EmpiricalCdf: empty sample");
  for (double s : samples_)
    if (!std::isfinite(s)) throw SpecError("EmpiricalCdf: non-finite sample");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::dkw_halfwidth(double delta) const {
  return stats::dkw_halfwidth(samples_.size(), delta);
}

double EmpiricalCdf::largest_jump() const {
  std::size_t best = 1, run = 1;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (samples_[i] == samples_[i - 1]) {
      best = std::max(best, ++run);
    } else {
      run = 1;
    }
  }
  return static_cast<double>(best) / static_cast<double>(samples_.size());
}

CanonicalCdf canonical_cdf(const MeasureSpec& spec, std::size_t n, std::uint64_t seed,
                           const SeriesConfig& cfg, bool allow_non_solution, int workers) {
  check_config(cfg);
  if (n == 0) throw SpecError("canonical_cdf: n must be >= 1");
  const auto crit = measure::classify(spec);
  if (!(crit.K > 0.0))
    throw RegimeError("canonical_cdf: the defining series requires K > 0 (spec has K = " +
                      std::to_string(crit.K) + ")");

  std::vector<std::string> caveats;
  if (crit.q > 0.0) {
    if (!allow_non_solution)
      throw NotASolutionError(
          "canonical_cdf: P(alpha < 0) > 0, so the series CDF satisfies "
          "y(x) = 1 - E y(alpha (x - beta)) instead of the archetypal equation; "
          "pass the override to get the CDF anyway");
    caveats.push_back("not-a-solution");
  }
  if (!crit.assumptions.no_fixed_point) {
    if (!allow_non_solution)
      throw DegenerateError(
          "canonical_cdf: spec is degenerate (alpha (c - beta) = c a.s.); "
          "every bounded function with the right value at c is a solution; "
          "pass the override to sample the point mass anyway");
    caveats.push_back("degenerate");
  }

  const auto draws = draw_batch(spec, n, seed, cfg, workers, false);
  std::vector<double> values(n);
  double depth_sum = 0.0;
  std::size_t capped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = draws[i].value;
    depth_sum += static_cast<double>(draws[i].depth);
    if (draws[i].capped) ++capped;
  }

  CanonicalCdf out{EmpiricalCdf(std::move(values)), {}};
  out.diagnostics.n = n;
  out.diagnostics.mean_depth = depth_sum / static_cast<double>(n);
  out.diagnostics.max_depth_hits = capped;
  out.diagnostics.dkw_halfwidth = stats::dkw_halfwidth(n, 0.05);
  out.diagnostics.caveats = std::move(caveats);
  return out;
}

}  // namespace archetypal::series

#include "archetypal/chain.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "archetypal/parallel.hpp"
#include "archetypal/stats.hpp"

namespace archetypal::chain {

Path simulate(const MeasureSpec& spec, double x0, std::size_t n, RngStream& rng) {
  if (n < 1) throw SpecError("simulate: n must be >= 1");
  Path path;
  path.x0 = x0;
  path.steps.reserve(n);
  double x = x0, a = 1.0, b = 0.0, d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [alpha, beta] = spec.sample(rng);
    x = alpha * (x - beta);
    b += beta / a;  // beta_n / A_{n-1}
    a *= alpha;
    d = a * b;
    if (!std::isfinite(a) || !std::isfinite(x) || !std::isfinite(d)) {
      path.overflowed = true;
      break;
    }
    path.steps.push_back({alpha, beta, x, a, b, d});
  }
  return path;
}

double reversed_tail_sum(const MeasureSpec& spec, std::size_t n, RngStream& rng) {
  if (n < 1) throw SpecError("reversed_tail_sum: n must be >= 1");
  double a = 1.0, sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [alpha, beta] = spec.sample(rng);
    a *= alpha;
    sum += beta * a;
  }
  return sum;
}

StoppedRun stopping_time_negative(const MeasureSpec& spec, RngStream& rng, std::size_t max_n) {
  if (!(spec.q() > 0.0))
    throw NotApplicableError("stopping_time_negative: requires P(alpha < 0) > 0");
  StoppedRun run;
  double a = 1.0, b = 0.0;
  for (std::size_t i = 1; i <= max_n; ++i) {
    const auto [alpha, beta] = spec.sample(rng);
    b += beta / a;
    a *= alpha;
    if (a < 0.0) {
      run.tau = i;
      run.a_tau = a;
      run.b_tau = b;
      run.terminated = true;
      return run;
    }
  }
  run.tau = max_n;
  run.a_tau = a;
  run.b_tau = b;
  run.terminated = false;
  return run;
}

WaldReport wald_check(const MeasureSpec& spec, std::size_t n, std::uint64_t seed,
                      std::size_t max_n, int workers) {
  const auto crit = measure::classify(spec);
  if (!(crit.q > 0.0)) throw NotApplicableError("wald_check: requires P(alpha < 0) > 0");
  if (!(crit.K > 0.0)) throw RegimeError("wald_check: requires K > 0");

  struct Slot {
    double log_a = 0.0;
    double tau = 0.0;
    bool ok = false;
  };
  std::vector<Slot> slots(n);
  parallel_for(n, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    const StoppedRun run = stopping_time_negative(spec, rng, max_n);
    if (run.terminated) slots[i] = {std::log(std::abs(run.a_tau)), static_cast<double>(run.tau), true};
  });

  std::vector<double> logs, taus;
  logs.reserve(n);
  taus.reserve(n);
  WaldReport rep;
  for (const Slot& s : slots) {
    if (!s.ok) {
      ++rep.excluded;
      continue;
    }
    logs.push_back(s.log_a);
    taus.push_back(s.tau);
  }
  const auto ml = stats::mean_stderr(logs);
  const auto mt = stats::mean_stderr(taus);
  rep.lhs = ml.mean;
  rep.lhs_stderr = ml.stderr_;
  rep.rhs = crit.K / crit.q;
  rep.mean_tau = mt.mean;
  rep.mean_tau_stderr = mt.stderr_;
  rep.n = logs.size();
  return rep;
}

MartingaleReport martingale_check(const MeasureSpec& spec, const GridFunction& y, double x0,
                                  std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                  int workers) {
  if (n_steps < 1) throw SpecError("martingale_check: n_steps must be >= 1");
  std::vector<double> values(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    double x = x0;
    for (std::size_t k = 0; k < n_steps; ++k) {
      const auto [alpha, beta] = spec.sample(rng);
      x = alpha * (x - beta);
    }
    values[i] = y(x);
  });
  const auto ms = stats::mean_stderr(values);
  MartingaleReport rep;
  rep.estimate = ms.mean;
  rep.stderr_ = ms.stderr_;
  rep.reference = y(x0);
  rep.n_paths = n_paths;
  return rep;
}

}  // namespace archetypal::chain

#include "archetypal/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "archetypal/chain.hpp"
#include "archetypal/parallel.hpp"

namespace archetypal::fourier {

namespace {

// One draw of Upsilon without re-validating the regime (callers classify once).
double raw_upsilon(const MeasureSpec& spec, const series::SeriesConfig& cfg, RngStream& rng) {
  double a = 1.0, sum = 0.0;
  for (std::size_t n = 1; n <= cfg.max_depth; ++n) {
    const auto [alpha, beta] = spec.sample(rng);
    sum += beta / a;
    a *= alpha;
    if (n >= cfg.min_depth && 1.0 / std::abs(a) <= cfg.tail_tolerance) break;
  }
  return sum;
}

struct ComplexSums {
  std::vector<double> re, im;
  void init(std::size_t k) {
    re.assign(k, 0.0);
    im.assign(k, 0.0);
  }
};

}  // namespace

std::vector<double> default_s_values() {
  std::vector<double> s;
  s.reserve(257);
  s.push_back(0.0);
  for (int i = 0; i < 256; ++i)
    s.push_back(0.01 * std::pow(10.0, 4.0 * static_cast<double>(i) / 255.0));
  return s;
}

std::complex<double> beta_charfn(const MeasureSpec& spec, double t) {
  using namespace std::complex_literals;
  if (spec.joint_discrete()) {
    std::complex<double> sum = 0.0;
    for (const Atom& at : spec.atoms()) sum += at.p * std::polar(1.0, t * at.b);
    return sum;
  }
  const Marginal& beta = spec.beta_marginal();
  switch (beta.kind()) {
    case Marginal::Kind::point_mass:
    case Marginal::Kind::discrete: {
      std::complex<double> sum = 0.0;
      for (const Node& node : beta.nodes()) sum += node.weight * std::polar(1.0, t * node.value);
      return sum;
    }
    case Marginal::Kind::exponential:
      // E e^{itV} = rate / (rate - it)
      return beta.rate() / std::complex<double>(beta.rate(), -t);
    case Marginal::Kind::uniform: {
      const double lo = beta.lo(), hi = beta.hi();
      if (t == 0.0) return 1.0;
      return (std::polar(1.0, t * hi) - std::polar(1.0, t * lo)) / (1i * t * (hi - lo));
    }
  }
  return 0.0;  // unreachable
}

SpectrumGrid charfn(const MeasureSpec& spec, const std::vector<double>& s_values, std::size_t n,
                    std::uint64_t seed, const series::SeriesConfig& cfg, int workers) {
  if (n == 0 || s_values.empty()) throw SpecError("charfn: empty input");
  const auto crit = measure::classify(spec);
  if (!(crit.K > 0.0)) throw RegimeError("charfn: requires K > 0");

  const std::size_t S = s_values.size();
  ComplexSums total = chunked_reduce<ComplexSums>(
      n, workers,
      [&](std::size_t lo, std::size_t hi, ComplexSums& part) {
        part.init(S);
        for (std::size_t k = lo; k < hi; ++k) {
          RngStream rng(seed, k);
          const double u = raw_upsilon(spec, cfg, rng);
          for (std::size_t si = 0; si < S; ++si) {
            part.re[si] += std::cos(s_values[si] * u);
            part.im[si] += std::sin(s_values[si] * u);
          }
        }
      },
      [&](ComplexSums& acc, const ComplexSums& part) {
        if (acc.re.empty()) acc.init(S);
        for (std::size_t si = 0; si < S; ++si) {
          acc.re[si] += part.re[si];
          acc.im[si] += part.im[si];
        }
      },
      ComplexSums{});

  SpectrumGrid grid;
  grid.s = s_values;
  grid.values.resize(S);
  const double dn = static_cast<double>(n);
  for (std::size_t si = 0; si < S; ++si)
    grid.values[si] = {total.re[si] / dn, total.im[si] / dn};
  return grid;
}

SpectrumGrid fourier_iterate(const MeasureSpec& spec,
                             const std::function<std::complex<double>(double)>& z0,
                             const std::vector<double>& s_values, std::size_t n_iterations,
                             std::size_t n_samples, std::uint64_t seed, bool force_simulation,
                             int workers) {
  if (s_values.empty() || n_iterations == 0)
    throw SpecError("fourier_iterate: empty input");
  if (spec.q() > 0.0)
    throw NotApplicableError(
        "fourier_iterate: P(alpha < 0) > 0 changes the recursion by a sign factor; "
        "use alternation_probe");

  const std::size_t S = s_values.size();
  SpectrumGrid grid;
  grid.s = s_values;
  grid.values.resize(S);

  double a = 0.0;
  if (!force_simulation && spec.is_alpha_point_mass(&a)) {
    // Single-branch exact recursion:
    //   z_n(s) = z0(s / a^n) * prod_{k<n} E e^{i (s / a^k) beta}
    for (std::size_t si = 0; si < S; ++si) {
      const double s = s_values[si];
      std::complex<double> prod = 1.0;
      double scale = s;
      for (std::size_t k = 0; k < n_iterations; ++k) {
        prod *= beta_charfn(spec, scale);
        scale /= a;
      }
      grid.values[si] = z0(scale) * prod;  // scale = s / a^n after the loop
    }
    return grid;
  }

  if (n_samples == 0) throw SpecError("fourier_iterate: n_samples must be >= 1");
  ComplexSums total = chunked_reduce<ComplexSums>(
      n_samples, workers,
      [&](std::size_t lo, std::size_t hi, ComplexSums& part) {
        part.init(S);
        for (std::size_t k = lo; k < hi; ++k) {
          RngStream rng(seed, k);
          double prod = 1.0, b_sum = 0.0;
          for (std::size_t i = 0; i < n_iterations; ++i) {
            const auto [alpha, beta] = spec.sample(rng);
            b_sum += beta / prod;
            prod *= alpha;
          }
          for (std::size_t si = 0; si < S; ++si) {
            const std::complex<double> v =
                std::polar(1.0, s_values[si] * b_sum) * z0(s_values[si] / prod);
            part.re[si] += v.real();
            part.im[si] += v.imag();
          }
        }
      },
      [&](ComplexSums& acc, const ComplexSums& part) {
        if (acc.re.empty()) acc.init(S);
        for (std::size_t si = 0; si < S; ++si) {
          acc.re[si] += part.re[si];
          acc.im[si] += part.im[si];
        }
      },
      ComplexSums{});

  const double dn = static_cast<double>(n_samples);
  for (std::size_t si = 0; si < S; ++si)
    grid.values[si] = {total.re[si] / dn, total.im[si] / dn};
  return grid;
}

AlternationReport alternation_probe(const MeasureSpec& spec, const std::vector<double>& s_values,
                                    std::size_t n_lo, std::size_t n_hi, std::size_t n_samples,
                                    std::uint64_t seed, std::size_t max_block, int workers) {
  if (s_values.empty() || n_lo == 0 || n_lo > n_hi || n_samples == 0)
    throw SpecError("alternation_probe: bad arguments");
  const auto crit = measure::classify(spec);
  if (!(crit.q > 0.0))
    throw NotApplicableError("alternation_probe: requires P(alpha < 0) > 0");
  if (!(crit.K > 0.0)) throw RegimeError("alternation_probe: requires K > 0");

  const std::size_t S = s_values.size();
  const std::size_t R = n_hi - n_lo + 1;

  struct Partial {
    std::vector<double> re, im, re2;
    std::size_t used = 0, excluded = 0;
  };

  Partial total = chunked_reduce<Partial>(
      n_samples, workers,
      [&](std::size_t lo, std::size_t hi, Partial& part) {
        part.re.assign(R * S, 0.0);
        part.im.assign(R * S, 0.0);
        part.re2.assign(R * S, 0.0);
        std::vector<double> u_at(R);  // block partial sums for rows n_lo..n_hi
        for (std::size_t k = lo; k < hi; ++k) {
          RngStream rng(seed, k);
          // Consecutive stopped blocks from one stream give i.i.d. pairs
          // (A_tau, B_tau); the row value is the block-series partial sum.
          double a_prod = 1.0, u = 0.0;
          bool ok = true;
          for (std::size_t i = 1; i <= n_hi; ++i) {
            const chain::StoppedRun run = chain::stopping_time_negative(spec, rng, max_block);
            if (!run.terminated) {
              ok = false;
              break;
            }
            u += run.b_tau / a_prod;
            a_prod *= run.a_tau;
            if (i >= n_lo) u_at[i - n_lo] = u;
          }
          if (!ok) {
            ++part.excluded;
            continue;
          }
          ++part.used;
          for (std::size_t r = 0; r < R; ++r) {
            for (std::size_t si = 0; si < S; ++si) {
              const double re = std::cos(s_values[si] * u_at[r]);
              const double im = std::sin(s_values[si] * u_at[r]);
              const std::size_t idx = r * S + si;
              part.re[idx] += re;
              part.im[idx] += im;
              part.re2[idx] += re * re;
            }
          }
        }
      },
      [&](Partial& acc, const Partial& part) {
        if (acc.re.empty()) {
          acc.re.assign(R * S, 0.0);
          acc.im.assign(R * S, 0.0);
          acc.re2.assign(R * S, 0.0);
        }
        for (std::size_t i = 0; i < R * S; ++i) {
          acc.re[i] += part.re[i];
          acc.im[i] += part.im[i];
          acc.re2[i] += part.re2[i];
        }
        acc.used += part.used;
        acc.excluded += part.excluded;
      },
      Partial{});

  if (total.used == 0) throw Error("alternation_probe: every path exceeded max_block");

  AlternationReport rep;
  rep.s = s_values;
  rep.excluded = total.excluded;
  rep.rows.resize(R);
  const double dn = static_cast<double>(total.used);
  for (std::size_t r = 0; r < R; ++r) {
    AlternationRow& row = rep.rows[r];
    row.n = n_lo + r;
    row.values.resize(S);
    row.re_stderr.resize(S);
    const double sign = (row.n % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t si = 0; si < S; ++si) {
      const std::size_t idx = r * S + si;
      const double mean_re = total.re[idx] / dn;
      const double mean_im = total.im[idx] / dn;
      row.values[si] = {sign * mean_re, sign * mean_im};
      double var = 0.0;
      if (total.used > 1)
        var = std::max(0.0, (total.re2[idx] - dn * mean_re * mean_re) / (dn - 1.0));
      row.re_stderr[si] = std::sqrt(var / dn);
    }
  }
  return rep;
}

}  // namespace archetypal::fourier

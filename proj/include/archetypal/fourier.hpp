#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "archetypal/measure.hpp"
#include "archetypal/series.hpp"

namespace archetypal::fourier {

struct SpectrumGrid {
  std::vector<double> s;
  std::vector<std::complex<double>> values;
};

/// Default frequency grid: 0 followed by 256 geometric points on [0.01, 100].
std::vector<double> default_s_values();

/// Characteristic function of beta, in closed form.
std::complex<double> beta_charfn(const MeasureSpec& spec, double t);

/// Monte Carlo characteristic function of Upsilon at the given frequencies.
/// Requires K > 0. Draw i uses stream i; the reduction is chunk-ordered, so
/// the result does not depend on `workers`.
SpectrumGrid charfn(const MeasureSpec& spec, const std::vector<double>& s_values, std::size_t n,
                    std::uint64_t seed, const series::SeriesConfig& cfg = {}, int workers = 0);

/// n-fold application of the frequency-domain recursion
///   z_{k}(s) = E exp(i s beta) * z_{k-1}(s / alpha)
/// starting from z0. Exact when alpha is a point mass (closed-form beta
/// characteristic function); Monte Carlo otherwise, or when
/// `force_simulation` is set. Requires P(alpha < 0) = 0; for specs with
/// negative alpha use alternation_probe.
SpectrumGrid fourier_iterate(const MeasureSpec& spec,
                             const std::function<std::complex<double>(double)>& z0,
                             const std::vector<double>& s_values, std::size_t n_iterations,
                             std::size_t n_samples, std::uint64_t seed,
                             bool force_simulation = false, int workers = 0);

struct AlternationRow {
  std::size_t n = 0;
  std::vector<std::complex<double>> values;  // r_n(s) = (-1)^n E exp(i s U_n)
  std::vector<double> re_stderr;
};

struct AlternationReport {
  std::vector<double> s;
  std::vector<AlternationRow> rows;          // n = n_lo .. n_hi
  std::size_t excluded = 0;                  // paths with a non-terminating block
};

/// Sign-alternating functionals over blocks of the chain stopped at the first
/// negative A_n: r_n(s) = (-1)^n E exp(i s U_n) where U_n is the n-block
/// partial sum of the stopped-coefficient series. Requires q > 0 and K > 0.
AlternationReport alternation_probe(const MeasureSpec& spec, const std::vector<double>& s_values,
                                    std::size_t n_lo, std::size_t n_hi, std::size_t n_samples,
                                    std::uint64_t seed, std::size_t max_block = 10000,
                                    int workers = 0);

}  // namespace archetypal::fourier

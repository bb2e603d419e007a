#pragma once

#include <string>
#include <vector>

#include "archetypal/grid.hpp"
#include "archetypal/measure.hpp"

namespace archetypal::transfer {

struct ApplyResult {
  GridFunction result;
  double clamped_fraction = 0.0;  // fraction of evaluations outside the grid
};

/// (T f)(x) = E f(alpha * (x - beta)), evaluated at every grid node.
///
/// The expectation is accumulated anchored at f(alpha_0 * (x - beta_0)), so a
/// constant function is reproduced bit-exactly regardless of how the atom
/// probabilities round.
ApplyResult apply_with_stats(const MeasureSpec& spec, const GridFunction& f);
GridFunction apply(const MeasureSpec& spec, const GridFunction& f);

/// Derivative-form operator (T' z)(x) = E alpha * z(alpha * (x - beta)).
GridFunction apply_derivative(const MeasureSpec& spec, const GridFunction& z);

/// sup over the interior window of |f - T f|.
double residual(const MeasureSpec& spec, const GridFunction& f, double interior_margin = 0.1);

struct IterateRecord {
  std::size_t iteration = 0;
  double interior_range = 0.0;     // max - min of f_k over the interior window
  double residual = 0.0;           // sup interior |f_k - T f_k|
  double clamped_fraction = 0.0;
};

struct IterateResult {
  GridFunction final;
  std::vector<IterateRecord> history;
  bool clamp_warning = false;      // some iteration clamped more than half its evaluations
  std::string warning;
};

/// f_k = T f_{k-1}, k = 1..n.
IterateResult iterate(const MeasureSpec& spec, const GridFunction& f0, std::size_t n,
                      double interior_margin = 0.1);

}  // namespace archetypal::transfer

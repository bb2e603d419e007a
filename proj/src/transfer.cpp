#include "archetypal/transfer.hpp"

#include <cmath>

#include "archetypal/errors.hpp"

namespace archetypal::transfer {

namespace {

struct NodeApply {
  std::vector<double> values;
  std::size_t evals = 0;
  std::size_t clamped = 0;
};

// (T f)(x_j) for every node, accumulated as anchor + sum w_i * (f_i - anchor)
// so that a constant f maps to exactly itself whatever the weights' rounding.
NodeApply apply_nodes(const std::vector<Atom>& nodes, const GridFunction& f) {
  NodeApply out;
  const std::size_t m = f.size();
  out.values.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = f.node_x(j);
    const double arg0 = nodes.front().a * (x - nodes.front().b);
    const double anchor = f(arg0);
    double acc = 0.0;
    for (const Atom& node : nodes) {
      const double arg = node.a * (x - node.b);
      ++out.evals;
      if (!f.contains(arg)) ++out.clamped;
      acc += node.p * (f(arg) - anchor);
    }
    out.values[j] = anchor + acc;
  }
  return out;
}

}  // namespace

ApplyResult apply_with_stats(const MeasureSpec& spec, const GridFunction& f) {
  const auto nodes = spec.pair_nodes();
  NodeApply na = apply_nodes(nodes, f);
  return {f.with_values(std::move(na.values)),
          static_cast<double>(na.clamped) / static_cast<double>(na.evals)};
}

GridFunction apply(const MeasureSpec& spec, const GridFunction& f) {
  return apply_with_stats(spec, f).result;
}

GridFunction apply_derivative(const MeasureSpec& spec, const GridFunction& z) {
  const auto nodes = spec.pair_nodes();
  const std::size_t m = z.size();
  std::vector<double> values(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double x = z.node_x(j);
    double acc = 0.0;
    for (const Atom& node : nodes) acc += node.p * node.a * z(node.a * (x - node.b));
    values[j] = acc;
  }
  return z.with_values(std::move(values));
}

double residual(const MeasureSpec& spec, const GridFunction& f, double interior_margin) {
  const GridFunction tf = apply(spec, f);
  const auto [lo, hi] = f.interior_window(interior_margin);
  double sup = 0.0;
  for (std::size_t j = lo; j < hi; ++j)
    sup = std::max(sup, std::abs(f.values()[j] - tf.values()[j]));
  return sup;
}

IterateResult iterate(const MeasureSpec& spec, const GridFunction& f0, std::size_t n,
                      double interior_margin) {
  if (n < 1) throw SpecError("iterate: n must be >= 1");
  const auto [lo, hi] = f0.interior_window(interior_margin);

  auto interior_sup_diff = [&, lo = lo, hi = hi](const GridFunction& a, const GridFunction& b) {
    double sup = 0.0;
    for (std::size_t j = lo; j < hi; ++j)
      sup = std::max(sup, std::abs(a.values()[j] - b.values()[j]));
    return sup;
  };

  IterateResult out{f0, {}, false, {}};
  out.history.reserve(n);
  ApplyResult step = apply_with_stats(spec, f0);  // T f0
  for (std::size_t k = 1; k <= n; ++k) {
    out.final = std::move(step.result);  // f_k
    const double clamped = step.clamped_fraction;
    step = apply_with_stats(spec, out.final);  // T f_k, reused as f_{k+1}
    out.history.push_back(
        {k, out.final.interior_range(interior_margin), interior_sup_diff(out.final, step.result),
         clamped});
    if (clamped > 0.5) out.clamp_warning = true;
  }
  if (out.clamp_warning)
    out.warning =
        "more than half of the operator evaluations fell outside the grid and were clamped; "
        "iterates are dominated by the extension rule (expected under K > 0)";
  return out;
}

}  // namespace archetypal::transfer

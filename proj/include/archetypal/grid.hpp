#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace archetypal {

/// Piecewise-linear function on a uniform grid over [xmin, xmax].
///
/// Evaluation outside the grid clamps to the boundary value, so bounded
/// inputs stay bounded under repeated operator application.
class GridFunction {
 public:
  GridFunction(double xmin, double xmax, std::vector<double> values);

  static GridFunction constant(double xmin, double xmax, std::size_t m, double value);
  static GridFunction sampled(double xmin, double xmax, std::size_t m,
                              const std::function<double(double)>& f);

  double xmin() const { return xmin_; }
  double xmax() const { return xmax_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return h_; }
  double node_x(std::size_t j) const { return xmin_ + h_ * static_cast<double>(j); }
  const std::vector<double>& values() const { return values_; }

  bool contains(double x) const { return x >= xmin_ && x <= xmax_; }

  /// Linear interpolation inside the grid, clamped outside.
  double operator()(double x) const;

  /// Same grid, new values.
  GridFunction with_values(std::vector<double> values) const;

  /// First and one-past-last node index of the interior window that drops a
  /// `margin` fraction of nodes at each edge.
  std::pair<std::size_t, std::size_t> interior_window(double margin) const;

  /// max - min over the interior window.
  double interior_range(double margin) const;

  double min_value() const;
  double max_value() const;

 private:
  double xmin_, xmax_, h_;
  std::vector<double> values_;
};

}  // namespace archetypal

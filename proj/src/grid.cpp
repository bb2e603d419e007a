#include "archetypal/grid.hpp"

#include <algorithm>
#include <cmath>

#include "archetypal/errors.hpp"

namespace archetypal {

GridFunction::GridFunction(double xmin, double xmax, std::vector<double> values)
    : xmin_(xmin), xmax_(xmax), values_(std::move(values)) {
  if (!(xmin < xmax) || !std::isfinite(xmin) || !std::isfinite(xmax))
    throw SpecError("GridFunction: need finite xmin < xmax");
  if (values_.size() < 2) throw SpecError("GridFunction: need at least 2 nodes");
  for (double v : values_)
    if (!std::isfinite(v)) throw SpecError("GridFunction: non-finite value");
  h_ = (xmax_ - xmin_) / static_cast<double>(values_.size() - 1);
}

GridFunction GridFunction::constant(double xmin, double xmax, std::size_t m, double value) {
  return GridFunction(xmin, xmax, std::vector<double>(m, value));
}

GridFunction GridFunction::sampled(double xmin, double xmax, std::size_t m,
                                   const std::function<double(double)>& f) {
  if (m < 2) throw SpecError("GridFunction: need at least 2 nodes");
  std::vector<double> values(m);
  const double h = (xmax - xmin) / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) values[j] = f(xmin + h * static_cast<double>(j));
  return GridFunction(xmin, xmax, std::move(values));
}

double GridFunction::operator()(double x) const {
  if (x <= xmin_) return values_.front();
  if (x >= xmax_) return values_.back();
  const double t = (x - xmin_) / h_;
  std::size_t j = static_cast<std::size_t>(t);
  if (j >= values_.size() - 1) j = values_.size() - 2;
  const double frac = t - static_cast<double>(j);
  return values_[j] + frac * (values_[j + 1] - values_[j]);
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
  if (values.size() != values_.size())
    throw SpecError("GridFunction::with_values: size mismatch");
  return GridFunction(xmin_, xmax_, std::move(values));
}

std::pair<std::size_t, std::size_t> GridFunction::interior_window(double margin) const {
  if (margin < 0.0 || margin >= 0.5)
    throw SpecError("GridFunction: margin must be in [0, 0.5)");
  const std::size_t m = values_.size();
  const std::size_t skip = static_cast<std::size_t>(std::floor(static_cast<double>(m) * margin));
  return {skip, m - skip};
}

double GridFunction::interior_range(double margin) const {
  const auto [lo, hi] = interior_window(margin);
  const auto [mn, mx] = std::minmax_element(values_.begin() + static_cast<std::ptrdiff_t>(lo),
                                            values_.begin() + static_cast<std::ptrdiff_t>(hi));
  return *mx - *mn;
}

double GridFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double GridFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

}  // namespace archetypal

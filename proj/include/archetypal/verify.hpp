#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "archetypal/grid.hpp"
#include "archetypal/measure.hpp"
#include "archetypal/series.hpp"

namespace archetypal::verify {

struct CheckReport {
  std::string name;
  double statistic = 0.0;  // the quantity compared against the tolerance
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json details;  // check-specific numbers
};

/// Samples the canonical CDF and checks it is numerically harmonic:
/// sup interior |F - T F| < tol. Refusals (q > 0, degenerate spec, K <= 0)
/// propagate as exceptions.
CheckReport check_canonical(const MeasureSpec& spec, std::size_t n_samples, double lo, double hi,
                            std::size_t m, double tol, std::uint64_t seed, int workers = 0);

/// Iterates T from f0 under K < 0 and checks collapse to the constant
/// E f0(-reversed series limit).
CheckReport check_subcritical_collapse(const MeasureSpec& spec, const GridFunction& f0,
                                       std::size_t n_iterations, double tol,
                                       std::size_t n_samples, std::uint64_t seed,
                                       int workers = 0);

struct EdgeWindows {
  double left_min, left_max, right_min, right_max;
  double left_range() const { return left_max - left_min; }
  double right_range() const { return right_max - right_min; }
};

/// Min / max over the outer `window_fraction` of nodes at each edge.
EdgeWindows edge_windows(const GridFunction& f, double window_fraction = 0.1);

/// Every value of a bounded solution must lie between the smaller and the
/// larger of its two edge levels (within eps).
CheckReport check_max_principle(const GridFunction& f, double window_fraction = 0.1,
                                double eps = 1e-9);

/// Under q > 0 the two edge limits of a solution coincide; checks
/// |M+ - M-| and |m+ - m-| < tol, and if f is also numerically harmonic and
/// edge-flat, that its full interior range is < tol + eps.
CheckReport check_limit_equality(const MeasureSpec& spec, const GridFunction& f, double tol,
                                 double window_fraction = 0.1);

struct AffineFit {
  double c0 = 0.0;        // recovered offset  (left edge level)
  double c1 = 0.0;        // recovered scale   (right minus left edge level)
  double distance = 0.0;  // sup_x |f(x) - (c0 + c1 * F_Upsilon(x))|
  bool pass = false;
  std::string reason;     // set when a precondition failed
};

/// For specs with K > 0, P(alpha > 0) = 1: a bounded solution with flat edge
/// windows must be an affine image of the canonical CDF. Recovers the affine
/// coefficients from the edge levels and measures the sup distance.
AffineFit check_affine_uniqueness(const MeasureSpec& spec, const GridFunction& f,
                                  std::size_t n_samples, double tol, std::uint64_t seed,
                                  double window_fraction = 0.1, int workers = 0);

/// Named end-to-end suites (one per acceptance criterion).
std::vector<std::string> suite_names();
CheckReport run_suite(const std::string& name, std::uint64_t seed = 0, int workers = 0);

nlohmann::json report_to_json(const CheckReport& rep);

}  // namespace archetypal::verify

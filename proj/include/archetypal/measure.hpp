#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "archetypal/errors.hpp"
#include "archetypal/rng.hpp"

namespace archetypal {

/// One support point of a joint coefficient measure: (alpha, beta, prob).
struct Atom {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
};

/// A (value, weight) pair: an exact atom for finite-support marginals, or a
/// quadrature node for parametric ones.
struct Node {
  double value = 0.0;
  double weight = 0.0;
};

/// One marginal distribution of a product-form coefficient measure.
///
/// Supported families: pointMass(value), discrete(atoms), exponential(rate),
/// uniform(lo, hi). Parametric families carry a fixed 64-node quadrature rule
/// (half-line rule for exponential, bounded rule for uniform) precomputed at
/// construction; expectations against a marginal always use the same nodes.
class Marginal {
 public:
  enum class Kind { point_mass, discrete, exponential, uniform };

  static Marginal point_mass(double value);
  static Marginal discrete(std::vector<std::pair<double, double>> atoms);
  static Marginal exponential(double rate);
  static Marginal uniform(double lo, double hi);

  Kind kind() const { return kind_; }
  bool finite_support() const { return kind_ == Kind::point_mass || kind_ == Kind::discrete; }

  /// Exact atoms (finite-support kinds) or quadrature nodes (parametric).
  const std::vector<Node>& nodes() const { return nodes_; }

  double sample(RngStream& rng) const;

  double prob_negative() const;
  double prob_abs_one() const;       // P(|V| = 1)
  bool support_contains_zero() const;
  bool is_point_mass(double* value = nullptr) const;

  /// Smallest / largest |v| over the support; nullopt when unbounded
  /// (max of exponential) or when the infimum 0 is not attained (min of
  /// exponential returns 0).
  double min_abs_support() const;
  std::optional<double> max_abs_support() const;

  /// Family parameters; throw SpecError when asked of the wrong kind.
  double point_value() const;  // pointMass
  double rate() const;         // exponential
  double lo() const;           // uniform
  double hi() const;           // uniform

  nlohmann::json to_json() const;
  static Marginal from_json(const nlohmann::json& j);

 private:
  Marginal() = default;

  Kind kind_ = Kind::point_mass;
  std::vector<Node> nodes_;   // atoms or quadrature rule
  double param0_ = 0.0;       // value | rate | lo
  double param1_ = 0.0;       // hi
};

/// Joint law of one coefficient pair (alpha, beta).
///
/// Either a finite list of joint atoms, or a product of two independent
/// marginals. Immutable after construction; constructors validate that
/// probabilities form a distribution and that alpha's support excludes 0.
class MeasureSpec {
 public:
  static MeasureSpec discrete(std::vector<Atom> atoms);
  static MeasureSpec product(Marginal alpha, Marginal beta);

  bool joint_discrete() const { return joint_; }

  /// Joint atoms; throws SpecError for product-form specs.
  const std::vector<Atom>& atoms() const;

  const Marginal& alpha_marginal() const;  // throws for joint_discrete specs
  const Marginal& beta_marginal() const;

  /// Unified (value, weight) views of the two marginal laws: exact atoms
  /// when the marginal has finite support, quadrature nodes otherwise.
  std::vector<Node> alpha_nodes() const;
  std::vector<Node> beta_nodes() const;
  bool alpha_finite_support() const;
  bool beta_finite_support() const;

  /// Weighted (a, b, w) pairs for joint expectations E f(alpha, beta):
  /// the joint atoms, or the tensor product of the marginal node sets.
  std::vector<Atom> pair_nodes() const;

  /// Exact finite representation of the joint law, when one exists.
  std::optional<std::vector<Atom>> exact_joint_atoms() const;

  /// One draw of (alpha, beta); for product specs alpha is drawn first.
  std::pair<double, double> sample(RngStream& rng) const;

  double q() const;                  // P(alpha < 0), exact
  double prob_alpha_abs_one() const; // P(|alpha| = 1), exact
  bool is_alpha_point_mass(double* value = nullptr) const;

  nlohmann::json to_json() const;
  static MeasureSpec from_json(const nlohmann::json& j);

 private:
  MeasureSpec() = default;

  bool joint_ = true;
  std::vector<Atom> atoms_;
  std::vector<double> cum_;  // cumulative probabilities for sampling
  std::optional<Marginal> alpha_;
  std::optional<Marginal> beta_;
};

namespace measure {

/// Which of the three standing assumptions hold.
struct AssumptionReport {
  bool alpha_nonzero = false;        // P(alpha != 0) = 1
  bool alpha_not_unimodular = false; // P(|alpha| != 1) > 0
  bool no_fixed_point = false;       // no c with alpha*(c - beta) = c a.s.
  std::optional<double> fixed_point; // the degenerate c, when one exists
  std::string fixed_point_method;    // "exact" | "continuous-beta" | "continuous-alpha"
  bool all() const { return alpha_nonzero && alpha_not_unimodular && no_fixed_point; }
};

enum class Regime { subcritical, critical, supercritical };

std::string regime_name(Regime r);

struct CriticalityReport {
  double K = 0.0;                // E log|alpha|
  double beta_log_moment = 0.0;  // E log max(|beta|, 1)
  Regime regime = Regime::critical;
  double q = 0.0;                // P(alpha < 0)
  bool k_exact = false;          // closed form (finite support) vs quadrature
  AssumptionReport assumptions;
  std::optional<double> degenerate_fixed_point;
  std::string warning;           // non-empty for critical / near-critical specs
};

AssumptionReport validate(const MeasureSpec& spec);

/// Computes K, the beta log-moment, q and the regime. Finite-support alpha
/// gives an exact K (regime decided by sign, critical only when K == 0);
/// quadrature-based K within `critical_tol` of 0 is labelled critical with a
/// warning. Throws MomentError when a log-moment is not finite.
CriticalityReport classify(const MeasureSpec& spec, double critical_tol = 1e-9);

/// n i.i.d. draws of (alpha, beta) on stream `stream0 + i`.
std::vector<std::pair<double, double>> sample(const MeasureSpec& spec, std::size_t n,
                                              std::uint64_t seed, std::uint64_t stream0 = 0);

/// Upper bound for |sum beta_n / A_{n-1}| when min|alpha| > 1 and beta is
/// bounded; nullopt otherwise.
std::optional<double> series_support_bound(const MeasureSpec& spec);

/// Upper bound for |sum beta_i * A_i| when max|alpha| < 1 and beta is bounded.
std::optional<double> reversed_series_support_bound(const MeasureSpec& spec);

nlohmann::json report_to_json(const CriticalityReport& rep);
nlohmann::json report_to_json(const AssumptionReport& rep);

}  // namespace measure
}  // namespace archetypal

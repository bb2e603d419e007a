#include "archetypal/measure.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace archetypal {
namespace {

constexpr double kProbTol = 1e-12;
constexpr std::size_t kQuadratureNodes = 64;

void require(bool cond, const std::string& msg) {
  if (!cond) throw SpecError(msg);
}

void check_probabilities(const std::vector<double>& ps, const char* what) {
  double sum = 0.0;
  for (double p : ps) {
    require(std::isfinite(p) && p >= 0.0, std::string(what) + ": probabilities must be in [0,1]");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kProbTol,
          std::string(what) + ": probabilities must sum to 1 within 1e-12");
}

std::vector<Node> fixed_rule(const gsl_integration_fixed_type* type, double a, double b,
                             double alpha, double scale) {
  gsl_integration_fixed_workspace* w =
      gsl_integration_fixed_alloc(type, kQuadratureNodes, a, b, alpha, 0.0);
  require(w != nullptr, "quadrature rule allocation failed");
  std::vector<Node> nodes(kQuadratureNodes);
  const double* x = gsl_integration_fixed_nodes(w);
  const double* wt = gsl_integration_fixed_weights(w);
  for (std::size_t i = 0; i < kQuadratureNodes; ++i) nodes[i] = {x[i], scale * wt[i]};
  gsl_integration_fixed_free(w);
  return nodes;
}

bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

double json_number(const nlohmann::json& j, const char* key, const char* ctx) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw SpecError(std::string(ctx) + ": missing or non-numeric field \"" + key + "\"");
  return j.at(key).get<double>();
}

}  // namespace

// ---------------------------------------------------------------------------
// Marginal

Marginal Marginal::point_mass(double value) {
  require(std::isfinite(value), "pointMass: value must be finite");
  Marginal m;
  m.kind_ = Kind::point_mass;
  m.param0_ = value;
  m.nodes_ = {{value, 1.0}};
  return m;
}

Marginal Marginal::discrete(std::vector<std::pair<double, double>> atoms) {
  require(!atoms.empty(), "discrete marginal: atom list must not be empty");
  std::vector<double> ps;
  ps.reserve(atoms.size());
  for (const auto& [v, p] : atoms) {
    require(std::isfinite(v), "discrete marginal: values must be finite");
    ps.push_back(p);
  }
  check_probabilities(ps, "discrete marginal");
  Marginal m;
  m.kind_ = Kind::discrete;
  m.nodes_.reserve(atoms.size());
  for (const auto& [v, p] : atoms) m.nodes_.push_back({v, p});
  return m;
}

Marginal Marginal::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential marginal: rate must be positive");
  Marginal m;
  m.kind_ = Kind::exponential;
  m.param0_ = rate;
  // E f(V) = int f(x) rate e^{-rate x} dx: Gauss-Laguerre with the density
  // folded into the weights (weights sum to 1 up to rule accuracy).
  m.nodes_ = fixed_rule(gsl_integration_fixed_laguerre, 0.0, rate, 0.0, rate);
  return m;
}

Marginal Marginal::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "uniform marginal: need finite lo < hi");
  Marginal m;
  m.kind_ = Kind::uniform;
  m.param0_ = lo;
  m.param1_ = hi;
  m.nodes_ = fixed_rule(gsl_integration_fixed_legendre, lo, hi, 0.0, 1.0 / (hi - lo));
  return m;
}

double Marginal::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::point_mass:
      return param0_;
    case Kind::discrete: {
      double u = rng.uniform01();
      for (const auto& node : nodes_) {
        if (u < node.weight) return node.value;
        u -= node.weight;
      }
      return nodes_.back().value;  // u landed in the rounding slack
    }
    case Kind::exponential:
      return rng.exponential(param0_);
    case Kind::uniform:
      return rng.uniform(param0_, param1_);
  }
  return 0.0;  // unreachable
}

double Marginal::prob_negative() const {
  switch (kind_) {
    case Kind::point_mass:
      return param0_ < 0.0 ? 1.0 : 0.0;
    case Kind::discrete: {
      double p = 0.0;
      for (const auto& node : nodes_)
        if (node.value < 0.0) p += node.weight;
      return p;
    }
    case Kind::exponential:
      return 0.0;
    case Kind::uniform:
      if (param1_ <= 0.0) return 1.0;
      if (param0_ >= 0.0) return 0.0;
      return -param0_ / (param1_ - param0_);
  }
  return 0.0;
}

double Marginal::prob_abs_one() const {
  if (kind_ == Kind::point_mass) return std::abs(param0_) == 1.0 ? 1.0 : 0.0;
  if (kind_ == Kind::discrete) {
    double p = 0.0;
    for (const auto& node : nodes_)
      if (std::abs(node.value) == 1.0) p += node.weight;
    return p;
  }
  return 0.0;  // continuous families
}

bool Marginal::support_contains_zero() const {
  switch (kind_) {
    case Kind::point_mass:
      return param0_ == 0.0;
    case Kind::discrete:
      for (const auto& node : nodes_)
        if (node.value == 0.0) return true;
      return false;
    case Kind::exponential:
      return false;  // support is (0, inf)
    case Kind::uniform:
      return param0_ <= 0.0 && 0.0 <= param1_;
  }
  return false;
}

bool Marginal::is_point_mass(double* value) const {
  if (kind_ == Kind::point_mass) {
    if (value) *value = param0_;
    return true;
  }
  if (kind_ == Kind::discrete) {
    double v = 0.0;
    bool first = true;
    for (const auto& node : nodes_) {
      if (node.weight == 0.0) continue;
      if (first) {
        v = node.value;
        first = false;
      } else if (node.value != v) {
        return false;
      }
    }
    if (!first && value) *value = v;
    return !first;
  }
  return false;
}

double Marginal::min_abs_support() const {
  switch (kind_) {
    case Kind::point_mass:
      return std::abs(param0_);
    case Kind::discrete: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& node : nodes_)
        if (node.weight > 0.0) m = std::min(m, std::abs(node.value));
      return m;
    }
    case Kind::exponential:
      return 0.0;  // infimum, not attained
    case Kind::uniform:
      if (param0_ <= 0.0 && 0.0 <= param1_) return 0.0;
      return std::min(std::abs(param0_), std::abs(param1_));
  }
  return 0.0;
}

std::optional<double> Marginal::max_abs_support() const {
  switch (kind_) {
    case Kind::point_mass:
      return std::abs(param0_);
    case Kind::discrete: {
      double m = 0.0;
      for (const auto& node : nodes_)
        if (node.weight > 0.0) m = std::max(m, std::abs(node.value));
      return m;
    }
    case Kind::exponential:
      return std::nullopt;
    case Kind::uniform:
      return std::max(std::abs(param0_), std::abs(param1_));
  }
  return std::nullopt;
}

double Marginal::point_value() const {
  require(kind_ == Kind::point_mass, "marginal is not a point mass");
  return param0_;
}

double Marginal::rate() const {
  require(kind_ == Kind::exponential, "marginal is not exponential");
  return param0_;
}

double Marginal::lo() const {
  require(kind_ == Kind::uniform, "marginal is not uniform");
  return param0_;
}

double Marginal::hi() const {
  require(kind_ == Kind::uniform, "marginal is not uniform");
  return param1_;
}

nlohmann::json Marginal::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::point_mass:
      j["kind"] = "pointMass";
      j["value"] = param0_;
      break;
    case Kind::discrete: {
      j["kind"] = "discrete";
      nlohmann::json atoms = nlohmann::json::array();
      for (const auto& node : nodes_) atoms.push_back({{"v", node.value}, {"p", node.weight}});
      j["atoms"] = std::move(atoms);
      break;
    }
    case Kind::exponential:
      j["kind"] = "exponential";
      j["rate"] = param0_;
      break;
    case Kind::uniform:
      j["kind"] = "uniform";
      j["lo"] = param0_;
      j["hi"] = param1_;
      break;
  }
  return j;
}

Marginal Marginal::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw SpecError("marginal: expected an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "pointMass") return point_mass(json_number(j, "value", "pointMass marginal"));
  if (kind == "discrete") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw SpecError("discrete marginal: missing \"atoms\" array");
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.emplace_back(json_number(a, "v", "discrete marginal atom"),
                         json_number(a, "p", "discrete marginal atom"));
    return discrete(std::move(atoms));
  }
  if (kind == "exponential") return exponential(json_number(j, "rate", "exponential marginal"));
  if (kind == "uniform")
    return uniform(json_number(j, "lo", "uniform marginal"),
                   json_number(j, "hi", "uniform marginal"));
  throw SpecError("marginal: unknown kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// MeasureSpec

MeasureSpec MeasureSpec::discrete(std::vector<Atom> atoms) {
  require(!atoms.empty(), "discrete spec: atom list must not be empty");
  std::vector<double> ps;
  ps.reserve(atoms.size());
  for (const Atom& at : atoms) {
    require(std::isfinite(at.a) && std::isfinite(at.b), "discrete spec: atoms must be finite");
    require(at.a != 0.0, "discrete spec: alpha support must exclude 0");
    ps.push_back(at.p);
  }
  check_probabilities(ps, "discrete spec");
  MeasureSpec s;
  s.joint_ = true;
  s.atoms_ = std::move(atoms);
  s.cum_.reserve(s.atoms_.size());
  double c = 0.0;
  for (const Atom& at : s.atoms_) {
    c += at.p;
    s.cum_.push_back(c);
  }
  s.cum_.back() = 1.0;
  return s;
}

MeasureSpec MeasureSpec::product(Marginal alpha, Marginal beta) {
  require(!alpha.support_contains_zero(), "product spec: alpha support must exclude 0");
  MeasureSpec s;
  s.joint_ = false;
  s.alpha_ = std::move(alpha);
  s.beta_ = std::move(beta);
  return s;
}

const std::vector<Atom>& MeasureSpec::atoms() const {
  require(joint_, "spec is product-form; it has no joint atoms");
  return atoms_;
}

const Marginal& MeasureSpec::alpha_marginal() const {
  require(!joint_, "spec is a joint discrete measure; it has no alpha marginal object");
  return *alpha_;
}

const Marginal& MeasureSpec::beta_marginal() const {
  require(!joint_, "spec is a joint discrete measure; it has no beta marginal object");
  return *beta_;
}

bool MeasureSpec::alpha_finite_support() const { return joint_ || alpha_->finite_support(); }

bool MeasureSpec::beta_finite_support() const { return joint_ || beta_->finite_support(); }

std::vector<Node> MeasureSpec::alpha_nodes() const {
  if (!joint_) return alpha_->nodes();
  std::vector<Node> out;
  out.reserve(atoms_.size());
  for (const Atom& at : atoms_) out.push_back({at.a, at.p});
  return out;
}

std::vector<Node> MeasureSpec::beta_nodes() const {
  if (!joint_) return beta_->nodes();
  std::vector<Node> out;
  out.reserve(atoms_.size());
  for (const Atom& at : atoms_) out.push_back({at.b, at.p});
  return out;
}

std::vector<Atom> MeasureSpec::pair_nodes() const {
  if (joint_) return atoms_;
  const auto& an = alpha_->nodes();
  const auto& bn = beta_->nodes();
  std::vector<Atom> out;
  out.reserve(an.size() * bn.size());
  for (const Node& a : an)
    for (const Node& b : bn) out.push_back({a.value, b.value, a.weight * b.weight});
  return out;
}

std::optional<std::vector<Atom>> MeasureSpec::exact_joint_atoms() const {
  if (joint_) return atoms_;
  if (alpha_->finite_support() && beta_->finite_support()) return pair_nodes();
  return std::nullopt;
}

std::pair<double, double> MeasureSpec::sample(RngStream& rng) const {
  if (!joint_) {
    const double a = alpha_->sample(rng);  // alpha first, then beta
    const double b = beta_->sample(rng);
    return {a, b};
  }
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
  const std::size_t idx = std::min(static_cast<std::size_t>(it - cum_.begin()), atoms_.size() - 1);
  return {atoms_[idx].a, atoms_[idx].b};
}

double MeasureSpec::q() const {
  if (!joint_) return alpha_->prob_negative();
  double p = 0.0;
  for (const Atom& at : atoms_)
    if (at.a < 0.0) p += at.p;
  return p;
}

double MeasureSpec::prob_alpha_abs_one() const {
  if (!joint_) return alpha_->prob_abs_one();
  double p = 0.0;
  for (const Atom& at : atoms_)
    if (std::abs(at.a) == 1.0) p += at.p;
  return p;
}

bool MeasureSpec::is_alpha_point_mass(double* value) const {
  if (!joint_) return alpha_->is_point_mass(value);
  double v = 0.0;
  bool first = true;
  for (const Atom& at : atoms_) {
    if (at.p == 0.0) continue;
    if (first) {
      v = at.a;
      first = false;
    } else if (at.a != v) {
      return false;
    }
  }
  if (!first && value) *value = v;
  return !first;
}

nlohmann::json MeasureSpec::to_json() const {
  nlohmann::json j;
  if (joint_) {
    j["type"] = "discrete";
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& at : atoms_) atoms.push_back({{"a", at.a}, {"b", at.b}, {"p", at.p}});
    j["atoms"] = std::move(atoms);
  } else {
    j["type"] = "product";
    j["alpha"] = alpha_->to_json();
    j["beta"] = beta_->to_json();
  }
  return j;
}

MeasureSpec MeasureSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw SpecError("spec: expected an object with a \"type\" field");
  const std::string type = j.at("type").get<std::string>();
  if (type == "discrete") {
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw SpecError("discrete spec: missing \"atoms\" array");
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({json_number(a, "a", "spec atom"), json_number(a, "b", "spec atom"),
                       json_number(a, "p", "spec atom")});
    return discrete(std::move(atoms));
  }
  if (type == "product") {
    if (!j.contains("alpha") || !j.contains("beta"))
      throw SpecError("product spec: needs \"alpha\" and \"beta\" marginals");
    return product(Marginal::from_json(j.at("alpha")), Marginal::from_json(j.at("beta")));
  }
  throw SpecError("spec: unknown type \"" + type + "\"");
}

// ---------------------------------------------------------------------------
// measure operations

namespace measure {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical:
      return "subcritical";
    case Regime::critical:
      return "critical";
    case Regime::supercritical:
      return "supercritical";
  }
  return "?";
}

AssumptionReport validate(const MeasureSpec& spec) {
  AssumptionReport rep;

  // (i) P(alpha != 0) = 1: guaranteed by construction, recomputed here.
  if (spec.joint_discrete()) {
    rep.alpha_nonzero = true;
    for (const Atom& at : spec.atoms())
      if (at.p > 0.0 && at.a == 0.0) rep.alpha_nonzero = false;
  } else {
    rep.alpha_nonzero = !spec.alpha_marginal().support_contains_zero();
  }

  // (ii) P(|alpha| != 1) > 0.
  rep.alpha_not_unimodular = spec.prob_alpha_abs_one() < 1.0 - kProbTol;

  // (iii) no c with alpha * (c - beta) = c almost surely.
  const auto joint = spec.exact_joint_atoms();
  if (joint) {
    rep.fixed_point_method = "exact";
    // Atom (a, b): a != 1 pins c to a*b/(a-1); a = 1 needs b = 0 (then any c
    // works) and rules out every c otherwise.
    bool impossible = false;
    bool have_c = false;
    double c = 0.0;
    for (const Atom& at : *joint) {
      if (at.p == 0.0) continue;
      if (at.a == 1.0) {
        if (at.b != 0.0) {
          impossible = true;
          break;
        }
      } else {
        const double ci = at.a * at.b / (at.a - 1.0);
        if (!have_c) {
          have_c = true;
          c = ci;
        } else if (!near(ci, c)) {
          impossible = true;
          break;
        }
      }
    }
    rep.no_fixed_point = impossible;
    if (!impossible) rep.fixed_point = have_c ? c : 0.0;
  } else if (!spec.beta_finite_support()) {
    // A continuous beta marginal gives alpha*(c-beta) = c probability 0.
    rep.fixed_point_method = "continuous-beta";
    rep.no_fixed_point = true;
  } else {
    // Continuous alpha, finitely supported beta: a*(c-b) = c can hold for
    // a.e. a only when b = 0 and c = 0.
    rep.fixed_point_method = "continuous-alpha";
    bool beta_identically_zero = true;
    for (const Node& b : spec.beta_nodes())
      if (b.weight > 0.0 && b.value != 0.0) beta_identically_zero = false;
    rep.no_fixed_point = !beta_identically_zero;
    if (beta_identically_zero) rep.fixed_point = 0.0;
  }
  return rep;
}

CriticalityReport classify(const MeasureSpec& spec, double critical_tol) {
  CriticalityReport rep;
  rep.assumptions = validate(spec);
  rep.degenerate_fixed_point = rep.assumptions.fixed_point;
  rep.q = spec.q();
  rep.k_exact = spec.alpha_finite_support();

  double k = 0.0;
  for (const Node& n : spec.alpha_nodes())
    if (n.weight != 0.0) k += n.weight * std::log(std::abs(n.value));
  if (!std::isfinite(k)) throw MomentError("E log|alpha| is not finite");
  rep.K = k;

  double blm = 0.0;
  for (const Node& n : spec.beta_nodes())
    if (n.weight != 0.0) blm += n.weight * std::log(std::max(std::abs(n.value), 1.0));
  if (!std::isfinite(blm)) throw MomentError("E log max(|beta|,1) is not finite");
  rep.beta_log_moment = blm;

  if (rep.k_exact) {
    rep.regime = k == 0.0 ? Regime::critical : (k < 0.0 ? Regime::subcritical : Regime::supercritical);
  } else if (std::abs(k) < critical_tol) {
    rep.regime = Regime::critical;
    rep.warning =
        "quadrature K is within tolerance of 0; labelled critical, which is outside the "
        "supported theory";
  } else {
    rep.regime = k < 0.0 ? Regime::subcritical : Regime::supercritical;
  }
  if (rep.regime == Regime::critical && rep.warning.empty())
    rep.warning = "K = 0: the critical case is outside the supported theory";
  return rep;
}

std::vector<std::pair<double, double>> sample(const MeasureSpec& spec, std::size_t n,
                                              std::uint64_t seed, std::uint64_t stream0) {
  std::vector<std::pair<double, double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(seed, stream0 + i);
    out[i] = spec.sample(rng);
  }
  return out;
}

namespace {

double alpha_min_abs(const MeasureSpec& spec) {
  if (spec.joint_discrete()) {
    double m = std::numeric_limits<double>::infinity();
    for (const Atom& at : spec.atoms())
      if (at.p > 0.0) m = std::min(m, std::abs(at.a));
    return m;
  }
  return spec.alpha_marginal().min_abs_support();
}

std::optional<double> alpha_max_abs(const MeasureSpec& spec) {
  if (spec.joint_discrete()) {
    double m = 0.0;
    for (const Atom& at : spec.atoms())
      if (at.p > 0.0) m = std::max(m, std::abs(at.a));
    return m;
  }
  return spec.alpha_marginal().max_abs_support();
}

std::optional<double> beta_max_abs(const MeasureSpec& spec) {
  if (spec.joint_discrete()) {
    double m = 0.0;
    for (const Atom& at : spec.atoms())
      if (at.p > 0.0) m = std::max(m, std::abs(at.b));
    return m;
  }
  return spec.beta_marginal().max_abs_support();
}

}  // namespace

std::optional<double> series_support_bound(const MeasureSpec& spec) {
  const double amin = alpha_min_abs(spec);
  const auto bmax = beta_max_abs(spec);
  if (!(amin > 1.0) || !bmax) return std::nullopt;
  // |sum beta_n / A_{n-1}| <= bmax * sum amin^{-(n-1)}
  return *bmax * amin / (amin - 1.0);
}

std::optional<double> reversed_series_support_bound(const MeasureSpec& spec) {
  const auto amax = alpha_max_abs(spec);
  const auto bmax = beta_max_abs(spec);
  if (!amax || !(*amax < 1.0) || !bmax) return std::nullopt;
  // |sum beta_i * A_i| <= bmax * sum amax^i
  return *bmax * *amax / (1.0 - *amax);
}

nlohmann::json report_to_json(const AssumptionReport& rep) {
  nlohmann::json j;
  j["assumptionFlags"] = {{"i", rep.alpha_nonzero},
                          {"ii", rep.alpha_not_unimodular},
                          {"iii", rep.no_fixed_point}};
  j["fixedPoint"] = rep.fixed_point ? nlohmann::json(*rep.fixed_point) : nlohmann::json(nullptr);
  j["fixedPointMethod"] = rep.fixed_point_method;
  return j;
}

nlohmann::json report_to_json(const CriticalityReport& rep) {
  nlohmann::json j = report_to_json(rep.assumptions);
  j["K"] = rep.K;
  j["betaLogMoment"] = rep.beta_log_moment;
  j["regime"] = regime_name(rep.regime);
  j["q"] = rep.q;
  j["kExact"] = rep.k_exact;
  j["degenerateFixedPoint"] = rep.degenerate_fixed_point
                                  ? nlohmann::json(*rep.degenerate_fixed_point)
                                  : nlohmann::json(nullptr);
  if (!rep.warning.empty()) j["warning"] = rep.warning;
  return j;
}

}  // namespace measure
}  // namespace archetypal

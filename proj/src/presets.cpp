#include "archetypal/presets.hpp"

#include <cmath>

namespace archetypal::presets {

namespace {

double param_number(const nlohmann::json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number())
    throw SpecError(std::string("preset parameter \"") + key + "\" must be a number");
  return params.at(key).get<double>();
}

std::vector<std::pair<double, double>> param_pairs(const nlohmann::json& params, const char* key) {
  std::vector<std::pair<double, double>> out;
  if (!params.contains(key)) return out;
  const auto& arr = params.at(key);
  if (!arr.is_array())
    throw SpecError(std::string("preset parameter \"") + key + "\" must be a [[value, prob]] array");
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw SpecError(std::string("preset parameter \"") + key + "\" must be a [[value, prob]] array");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

}  // namespace

MeasureSpec preset(const std::string& name, const nlohmann::json& params) {
  if (name == "bernoulli_convolution") {
    const double a = param_number(params, "a", 2.0);
    if (!(a > 1.0)) throw SpecError("bernoulli_convolution: requires a > 1");
    return MeasureSpec::discrete({{a, -1.0, 0.5}, {a, 1.0, 0.5}});
  }
  if (name == "de_rham") {
    return MeasureSpec::discrete({{3.0, 0.0, 1.0 / 3.0},
                                  {3.0, -1.0 / 3.0, 1.0 / 9.0},
                                  {3.0, 1.0 / 3.0, 1.0 / 9.0},
                                  {3.0, -2.0 / 3.0, 2.0 / 9.0},
                                  {3.0, 2.0 / 3.0, 2.0 / 9.0}});
  }
  if (name == "pantograph_const") {
    const double alpha = param_number(params, "alpha", 2.0);
    if (!(alpha > 1.0)) throw SpecError("pantograph_const: requires alpha > 1");
    return MeasureSpec::product(Marginal::point_mass(alpha), Marginal::exponential(1.0));
  }
  if (name == "pantograph_general") {
    auto alphas = param_pairs(params, "alphas");
    if (alphas.empty())
      throw SpecError("pantograph_general: requires params {\"alphas\": [[a, p], ...]}");
    for (const auto& [a, p] : alphas) {
      (void)p;
      if (!(a > 0.0)) throw SpecError("pantograph_general: alpha values must be positive");
    }
    return MeasureSpec::product(Marginal::discrete(std::move(alphas)), Marginal::exponential(1.0));
  }
  if (name == "schilling_like") {
    const double a = param_number(params, "a", 2.0);
    if (!(a > 1.0)) throw SpecError("schilling_like: requires a > 1");
    auto masks = param_pairs(params, "masks");
    if (masks.empty()) masks = {{-1.0 / a, 0.25}, {0.0, 0.5}, {1.0 / a, 0.25}};
    std::vector<Atom> atoms;
    atoms.reserve(masks.size());
    for (const auto& [b, p] : masks) atoms.push_back({a, b, p});
    return MeasureSpec::discrete(std::move(atoms));
  }
  if (name == "subcritical_demo") {
    return MeasureSpec::discrete(
        {{0.5, -1.0, 0.25}, {0.5, 1.0, 0.25}, {1.0 / 3.0, -1.0, 0.25}, {1.0 / 3.0, 1.0, 0.25}});
  }
  if (name == "negative_alpha_demo") {
    return MeasureSpec::discrete(
        {{-2.0, -1.0, 0.25}, {-2.0, 1.0, 0.25}, {3.0, -1.0, 0.25}, {3.0, 1.0, 0.25}});
  }
  if (name == "rvachev" || name == "choquet_deny") {
    throw SpecError("preset \"" + name +
                    "\": documented equation class without an explicit coefficient measure; "
                    "not constructible here");
  }
  throw SpecError("unknown preset \"" + name + "\"");
}

std::vector<std::string> preset_names() {
  return {"bernoulli_convolution", "de_rham",          "pantograph_const",
          "pantograph_general",    "schilling_like",   "subcritical_demo",
          "negative_alpha_demo"};
}

double preset_k(const std::string& name, const nlohmann::json& params) {
  if (name == "bernoulli_convolution") return std::log(param_number(params, "a", 2.0));
  if (name == "de_rham") return std::log(3.0);
  if (name == "pantograph_const") return std::log(param_number(params, "alpha", 2.0));
  if (name == "pantograph_general") {
    double k = 0.0;
    for (const auto& [a, p] : param_pairs(params, "alphas")) k += p * std::log(std::abs(a));
    return k;
  }
  if (name == "schilling_like") return std::log(param_number(params, "a", 2.0));
  if (name == "subcritical_demo") return -(std::log(2.0) + std::log(3.0)) / 2.0;
  if (name == "negative_alpha_demo") return (std::log(2.0) + std::log(3.0)) / 2.0;
  throw SpecError("unknown preset \"" + name + "\"");
}

}  // namespace archetypal::presets

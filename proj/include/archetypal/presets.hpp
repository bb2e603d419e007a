#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "archetypal/measure.hpp"

namespace archetypal::presets {

/// Built-in coefficient measures.
///
///   bernoulli_convolution  alpha = a (> 1), beta = +/-1 each w.p. 1/2
///                          params: {"a": 2.0}
///   de_rham                alpha = 3, beta in {0, ±1/3, ±2/3} with weights
///                          {1/3, 1/9, 1/9, 2/9, 2/9}; K = ln 3
///   pantograph_const       alpha = const (> 1), beta ~ Exp(1)
///                          params: {"alpha": 2.0}
///   pantograph_general     alpha discrete positive, beta ~ Exp(1)
///                          params: {"alphas": [[a1, p1], ...]}
///   schilling_like         alpha = a (> 1), beta from a symmetric mask
///                          params: {"a": 2.0, "masks": [[b1, p1], ...]}
///                          default masks {-1/a: 1/4, 0: 1/2, 1/a: 1/4};
///                          intended for the derivative-form operator
///   subcritical_demo       alpha in {1/2, 1/3}, beta = +/-1; K < 0
///   negative_alpha_demo    alpha in {-2, 3}, beta = +/-1; q = 1/2, K > 0
MeasureSpec preset(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

std::vector<std::string> preset_names();

/// Exact criticality constant of a preset built with the same params.
double preset_k(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

}  // namespace archetypal::presets

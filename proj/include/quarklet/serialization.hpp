#pragma once

#include "json.hpp"
#include "quarklet/interval_system.hpp"

namespace quarklet {

nlohmann::json to_json(const Dyadic& d);
nlohmann::json to_json(const PiecewisePolynomial& f);
PiecewisePolynomial piecewise_from_json(const nlohmann::json& j);

/// Parameters, sigma, index-set sizes and (optionally) all elements with p <= p_max, j <= j_max.
nlohmann::json system_to_json(const IntervalSystem& sys, int p_max, int j_max, bool with_elements = true);

}  // namespace quarklet

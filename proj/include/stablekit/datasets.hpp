#pragma once

#include <string_view>
#include <vector>

namespace stablekit::datasets {

/// Survival times (days) of 72 guinea pigs, in the printed order.
const std::vector<double>& guinea_pigs();
/// Velocities of 82 galaxies.
const std::vector<double>& galaxy();
/// 50 daily Abbey National share prices.
const std::vector<double>& abbey_prices();
/// r_t = (p_{t-1} - p_t) / p_{t-1}, t = 2..50 (49 values).
std::vector<double> abbey_returns();

/// Lookup by name; throws InvalidInput for unknown names.
const std::vector<double>& by_name(std::string_view name);

}  // namespace stablekit::datasets

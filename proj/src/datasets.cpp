#include "stablekit/datasets.hpp"

#include <string>

#include "stablekit/errors.hpp"

namespace stablekit::datasets {

const std::vector<double>& guinea_pigs() {
  static const std::vector<double> v{
      10,  33,  44,  56,  59,  72,  74,  77,  92,  93,  96,  100, 100, 102, 105, 107, 107, 108,
      108, 108, 109, 112, 121, 122, 122, 124, 130, 134, 136, 139, 144, 146, 153, 159, 160, 163,
      163, 168, 171, 172, 176, 113, 115, 116, 120, 183, 195, 196, 197, 202, 213, 215, 216, 222,
      230, 231, 240, 245, 251, 253, 254, 255, 278, 293, 327, 342, 347, 361, 402, 432, 458, 555};
  return v;
}

const std::vector<double>& galaxy() {
  static const std::vector<double> v{
      9.172,  9.350,  9.483,  9.558,  9.775,  10.227, 10.406, 16.084, 16.170, 18.419, 18.552,
      18.600, 18.927, 19.052, 19.070, 19.330, 19.343, 19.349, 19.440, 19.473, 19.529, 19.541,
      19.547, 19.663, 19.846, 19.856, 19.863, 19.914, 19.918, 19.973, 19.989, 20.166, 20.175,
      20.179, 20.196, 20.215, 20.221, 20.415, 20.629, 20.795, 20.821, 20.846, 20.875, 20.986,
      21.137, 21.492, 21.701, 21.814, 21.921, 21.960, 22.185, 22.209, 22.242, 22.249, 22.314,
      22.374, 22.495, 22.746, 22.747, 22.888, 22.914, 23.206, 23.241, 23.263, 23.484, 23.538,
      23.542, 23.666, 23.706, 23.711, 24.129, 24.285, 24.289, 24.366, 24.717, 24.990, 25.633,
      26.960, 26.995, 32.065, 32.789, 34.279};
  return v;
}

const std::vector<double>& abbey_prices() {
  static const std::vector<double> v{
      296, 296, 300, 302, 300, 304, 303, 299, 293, 294, 294, 293, 295, 287, 288, 297, 305,
      307, 304, 303, 304, 304, 309, 309, 309, 307, 306, 304, 300, 296, 301, 298, 295, 295,
      293, 292, 307, 297, 294, 293, 306, 303, 301, 303, 308, 305, 302, 301, 297, 299};
  return v;
}

std::vector<double> abbey_returns() {
  const auto& p = abbey_prices();
  std::vector<double> r;
  for (std::size_t t = 1; t < p.size(); ++t) r.push_back((p[t - 1] - p[t]) / p[t - 1]);
  return r;
}

const std::vector<double>& by_name(std::string_view name) {
  if (name == "guinea_pigs") return guinea_pigs();
  if (name == "galaxy") return galaxy();
  if (name == "abbey_prices") return abbey_prices();
  if (name == "abbey_returns") {
    static const std::vector<double> r = abbey_returns();
    return r;
  }
  throw InvalidInput("unknown dataset '" + std::string(name) + "'");
}

}  // namespace stablekit::datasets

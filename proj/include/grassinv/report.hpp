#ifndef GRASSINV_REPORT_HPP
#define GRASSINV_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace grassinv {

/// Outcome of one identity check.
struct VerifyReport {
  std::string identity;
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int quad_order = 0;
  std::string convention = "n/a";
  std::string normalization = "n/a";
  std::size_t redraws = 0;
  /// Extra named values (exact references, per-side errors, KS distances).
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const {
    for (const auto& [k, v] : extras)
      if (k == key) return v;
    return std::numeric_limits<double>::quiet_NaN();
  }
};

inline constexpr double kAbsoluteFloor = 1e-9;

/// Fills z and pass with the rule |lhs − rhs| ≤ max(3·stderr, 1e-9).
inline void apply_three_sigma_rule(VerifyReport& r) {
  const double diff = r.lhs - r.rhs;
  if (r.std_error > 0.0)
    r.z = diff / r.std_error;
  else
    r.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  r.pass = std::abs(diff) <= std::max(3.0 * r.std_error, kAbsoluteFloor);
}

}  // namespace grassinv

#endif  // GRASSINV_REPORT_HPP

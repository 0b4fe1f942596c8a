#include "dfx/rnn/saturation.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "dfx/errors.hpp"
#include "dfx/kernels/parallel.hpp"

namespace dfx {

std::optional<double> saturation_distance(const Eigen::Ref<const Eigen::VectorXd>& h) {
  const double norm = h.norm();
  if (norm == 0.0) return std::nullopt;
  const double corner = 1.0 / std::sqrt(static_cast<double>(h.size()));
  double sq = 0.0;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double target = h(i) >= 0.0 ? corner : -corner;
    const double diff = h(i) / norm - target;
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

double saturation_level(const RnnModel& model, std::span<const std::string> strings) {
  if (strings.empty()) throw InputError("saturation_level needs at least one string");
  const auto results = kernels::forward_all(model, strings);
  double level = 0.0;
  std::size_t degenerate = 0;
  for (const auto& r : results) {
    for (Eigen::Index i = 0; i < r.hidden.rows(); ++i) {
      auto distance = saturation_distance(r.hidden.row(i).transpose());
      if (!distance) {
        ++degenerate;
        continue;
      }
      level = std::max(level, *distance);
    }
  }
  if (degenerate > 0) spdlog::warn("saturation_level: skipped {} zero hidden vectors", degenerate);
  return level;
}

std::optional<double> kappa_bound(int dimension, double epsilon) {
  if (dimension < 1 || epsilon < 0.0) throw InputError("kappa_bound needs d >= 1 and eps >= 0");
  // 2 (1/sqrt(d) - eps)^2 rewritten as 2 (1 - eps sqrt(d))^2 / d, which is
  // exact for eps = 0.
  const double d = static_cast<double>(dimension);
  const double gap = 1.0 - epsilon * std::sqrt(d);
  if (gap <= 0.0) return std::nullopt;
  return 2.0 * gap * gap / d;
}

}  // namespace dfx

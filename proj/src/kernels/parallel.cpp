#include "dfx/kernels/parallel.hpp"

#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dfx::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

namespace {

/// Runs body(i) for i in [0, n) either in order or spread over threads.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body&& body) {
  const auto count = static_cast<long>(n);
  if (exec == Execution::kSerial) {
    for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace

std::vector<ForwardResult> forward_all(const RnnModel& model, std::span<const std::string> strings, Execution exec) {
  std::vector<ForwardResult> out(strings.size());
  for_each_index(strings.size(), exec, [&](std::size_t i) { out[i] = forward(model, strings[i]); });
  return out;
}

std::vector<std::vector<bool>> decisions_all(const RnnModel& model, std::span<const std::string> strings,
                                             Execution exec) {
  std::vector<std::vector<bool>> out(strings.size());
  for_each_index(strings.size(), exec, [&](std::size_t i) { out[i] = decisions(model, strings[i]); });
  return out;
}

std::vector<bool> verdicts_all(const RnnModel& model, std::span<const std::string> strings, Execution exec) {
  // vector<bool> packs bits, so collect into bytes first
  std::vector<char> raw(strings.size());
  for_each_index(strings.size(), exec, [&](std::size_t i) { raw[i] = rnn_accepts(model, strings[i]) ? 1 : 0; });
  return {raw.begin(), raw.end()};
}

std::vector<StateId> earliest_partners(const Eigen::MatrixXd& features, const std::vector<bool>& labels,
                                       double threshold, Execution exec) {
  const auto n = static_cast<std::size_t>(features.rows());
  const Eigen::VectorXd norms = features.rowwise().norm();
  std::vector<char> label_bytes(labels.begin(), labels.end());
  std::vector<StateId> out(n, kUndefined);
  for_each_index(n, exec, [&](std::size_t i) {
    const auto row_i = static_cast<Eigen::Index>(i);
    const double ni = norms(row_i);
    if (ni == 0.0) return;
    for (std::size_t j = 0; j < i; ++j) {
      const auto row_j = static_cast<Eigen::Index>(j);
      if (label_bytes[j] != label_bytes[i] || norms(row_j) == 0.0) continue;
      const double cosine = features.row(row_i).dot(features.row(row_j)) / (ni * norms(row_j));
      if (cosine > threshold) {
        out[i] = static_cast<StateId>(j);
        return;
      }
    }
  });
  return out;
}

double assign_nearest(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, std::vector<int>& assignment,
                      Execution exec) {
  const auto n = static_cast<std::size_t>(points.rows());
  assignment.assign(n, 0);
  std::vector<double> best(n, 0.0);
  for_each_index(n, exec, [&](std::size_t i) {
    const auto row = static_cast<Eigen::Index>(i);
    double best_distance = std::numeric_limits<double>::infinity();
    int best_index = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double distance = (points.row(row) - centroids.row(c)).squaredNorm();
      if (distance < best_distance) {
        best_distance = distance;
        best_index = static_cast<int>(c);
      }
    }
    assignment[i] = best_index;
    best[i] = best_distance;
  });
  double total = 0.0;
  for (double b : best) total += b;
  return total;
}

}  // namespace dfx::kernels

#pragma once

// Data-parallel kernels. Every kernel has a serial reference path and an
// OpenMP path selected by Execution; both produce bitwise-identical
// results because work items are independent and reductions are done in
// a fixed order.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfx/automata/dfa.hpp"
#include "dfx/rnn/model.hpp"

namespace dfx::kernels {

enum class Execution { kSerial, kParallel };

/// Number of OpenMP threads used by kParallel kernels (1 when built
/// without OpenMP).
int thread_count();
void set_thread_count(int threads);

std::vector<ForwardResult> forward_all(const RnnModel& model, std::span<const std::string> strings,
                                       Execution exec = Execution::kParallel);

/// Per-prefix decisions for each string.
std::vector<std::vector<bool>> decisions_all(const RnnModel& model, std::span<const std::string> strings,
                                             Execution exec = Execution::kParallel);

/// Full-string verdicts.
std::vector<bool> verdicts_all(const RnnModel& model, std::span<const std::string> strings,
                               Execution exec = Execution::kParallel);

/// For each row i of `features`, the smallest j < i whose label equals
/// label i and whose cosine similarity with row i strictly exceeds
/// `threshold`; kUndefined when there is none. Rows with zero norm never
/// match.
std::vector<StateId> earliest_partners(const Eigen::MatrixXd& features, const std::vector<bool>& labels,
                                       double threshold, Execution exec = Execution::kParallel);

/// Assigns every point (row) to its nearest centroid (row), ties to the
/// lower centroid index. Returns the total squared distance.
double assign_nearest(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, std::vector<int>& assignment,
                      Execution exec = Execution::kParallel);

}  // namespace dfx::kernels

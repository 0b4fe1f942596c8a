#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dfx/automata/dfa.hpp"
#include "dfx/kernels/parallel.hpp"
#include "dfx/languages/sampling.hpp"
#include "dfx/rnn/model.hpp"

namespace dfx {

struct KMeansResult {
  std::vector<int> assignment;        // cluster per point
  Eigen::MatrixXd centroids;          // k x dim
  std::vector<double> distortion;     // total squared distance after each assignment step
  int iterations = 0;
  bool converged = false;
};

enum class KMeansInit {
  kPlusPlus,  // D^2-weighted seeding
  kUniform,   // k distinct points uniformly at random
};

struct KMeansOptions {
  int max_iterations = 100;
  int restarts = 10;  // independent seedings; the lowest final distortion wins
  KMeansInit init = KMeansInit::kPlusPlus;
  kernels::Execution exec = kernels::Execution::kParallel;
};

/// Lloyd's algorithm. Centroids start at k distinct points (distinct
/// values when enough exist) drawn with `rng`; a cluster left empty is
/// reseeded at the point farthest from its centroid. Each restart stops
/// at an assignment fixed point or after max_iterations. Throws
/// InputError when there are fewer points than k.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, const KMeansOptions& options = {});

/// Hidden states of every prefix of every string, with the recognizer's
/// decision and a link to the record of the next prefix.
struct HiddenStateDataset {
  Eigen::MatrixXd hidden;                  // records x dim
  std::vector<bool> label;
  std::vector<std::optional<std::size_t>> next_token;  // alphabet index read next
  std::vector<std::optional<std::size_t>> successor;   // record index of the next prefix
  std::vector<std::size_t> bos_records;    // record of each string's epsilon prefix
};

HiddenStateDataset collect_hidden_states(const RnnModel& model, std::span<const std::string> strings,
                                         kernels::Execution exec = kernels::Execution::kParallel);

struct KMeansExtraction {
  Dfa raw;        // one state per reachable cluster
  Dfa minimized;
  KMeansResult clustering;
  std::vector<bool> cluster_accepting;  // majority label per cluster
};

/// Clusters become states. The initial state is the cluster of the <bos>
/// state; acceptance is the majority label (ties reject); the transition
/// on a token is the successor cluster seen most often (ties to the lower
/// cluster id, unseen pairs undefined). Unreachable clusters are dropped.
KMeansExtraction kmeans_extract(const RnnModel& model, std::span<const std::string> strings, int k, Rng& rng,
                                const KMeansOptions& options = {});

}  // namespace dfx

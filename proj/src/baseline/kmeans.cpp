#include "dfx/baseline/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <numeric>

#include "dfx/automata/algorithms.hpp"
#include "dfx/errors.hpp"

namespace dfx {

namespace {

/// Indices of the first occurrence of each distinct row.
std::vector<std::size_t> distinct_rows(const Eigen::MatrixXd& points) {
  std::vector<std::size_t> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row_less = [&](std::size_t a, std::size_t b) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      const double x = points(static_cast<Eigen::Index>(a), c);
      const double y = points(static_cast<Eigen::Index>(b), c);
      if (x != y) return x < y;
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || points.row(static_cast<Eigen::Index>(order[i])) != points.row(static_cast<Eigen::Index>(order[i - 1]))) {
      out.push_back(order[i]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// k distinct elements of `pool` by partial Fisher-Yates.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

namespace {

/// k-means++ seeding: the first centre uniformly among distinct rows,
/// each further centre with probability proportional to its squared
/// distance from the nearest centre chosen so far.
std::vector<std::size_t> plus_plus(const Eigen::MatrixXd& points, const std::vector<std::size_t>& pool,
                                   std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  std::vector<std::size_t> chosen;
  std::uniform_int_distribution<std::size_t> first(0, pool.size() - 1);
  chosen.push_back(pool[first(rng)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    const auto last = points.row(static_cast<Eigen::Index>(chosen.back()));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], (points.row(static_cast<Eigen::Index>(i)) - last).squaredNorm());
      total += nearest[i];
    }
    if (!(total > 0.0)) {
      // fewer distinct points than clusters: fill with unused indices
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) rest.push_back(i);
      }
      for (auto i : draw(std::move(rest), k - chosen.size(), rng)) chosen.push_back(i);
      break;
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double target = u(rng);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] <= 0.0) continue;
      pick = i;
      if (target < nearest[i]) break;
      target -= nearest[i];
    }
    chosen.push_back(pick);
  }
  return chosen;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, const std::vector<std::size_t>& seeds, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto clusters = seeds.size();
  const auto k = static_cast<Eigen::Index>(clusters);
  KMeansResult result;
  result.centroids.resize(k, points.cols());
  for (std::size_t c = 0; c < clusters; ++c) {
    result.centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(seeds[c]));
  }

  std::vector<int> previous;
  result.distortion.push_back(kernels::assign_nearest(points, result.centroids, result.assignment, options.exec));
  result.iterations = 1;
  while (result.iterations < options.max_iterations) {
    // update step
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(result.assignment[i]);
      sums.row(static_cast<Eigen::Index>(c)) += points.row(static_cast<Eigen::Index>(i));
      ++counts[c];
    }
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] > 0) {
        result.centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
        continue;
      }
      std::size_t farthest = 0;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const double d = (points.row(row) - result.centroids.row(result.assignment[i])).squaredNorm();
        if (d > worst) {
          worst = d;
          farthest = i;
        }
      }
      result.centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(farthest));
    }

    previous = result.assignment;
    result.distortion.push_back(kernels::assign_nearest(points, result.centroids, result.assignment, options.exec));
    ++result.iterations;
    if (result.assignment == previous) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng, const KMeansOptions& options) {
  if (k < 1) throw InputError("k must be at least 1");
  if (options.restarts < 1 || options.max_iterations < 1) throw InputError("restarts and max_iterations must be positive");
  const auto n = static_cast<std::size_t>(points.rows());
  if (n < static_cast<std::size_t>(k)) {
    throw InputError("k-means needs at least k = " + std::to_string(k) + " points, got " + std::to_string(n));
  }
  const auto clusters = static_cast<std::size_t>(k);

  auto pool = distinct_rows(points);
  if (pool.size() < clusters && options.init == KMeansInit::kUniform) {
    pool.resize(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
  }
  std::optional<KMeansResult> best;
  for (int restart = 0; restart < options.restarts; ++restart) {
    const auto seeds =
        options.init == KMeansInit::kPlusPlus ? plus_plus(points, pool, clusters, rng) : draw(pool, clusters, rng);
    auto result = lloyd(points, seeds, options);
    if (!best || result.distortion.back() < best->distortion.back()) best = std::move(result);
  }
  return std::move(*best);
}

HiddenStateDataset collect_hidden_states(const RnnModel& model, std::span<const std::string> strings,
                                         kernels::Execution exec) {
  const auto results = kernels::forward_all(model, strings, exec);
  std::size_t total = 0;
  for (const auto& w : strings) total += w.size() + 1;

  HiddenStateDataset data;
  data.hidden.resize(static_cast<Eigen::Index>(total), model.hidden_dim());
  data.label.reserve(total);
  data.next_token.reserve(total);
  data.successor.reserve(total);
  std::size_t record = 0;
  for (std::size_t s = 0; s < strings.size(); ++s) {
    const auto& r = results[s];
    data.bos_records.push_back(record);
    for (std::size_t i = 0; i <= strings[s].size(); ++i, ++record) {
      const auto row = static_cast<Eigen::Index>(i);
      data.hidden.row(static_cast<Eigen::Index>(record)) = r.hidden.row(row);
      data.label.push_back(r.logits(row, 1) > r.logits(row, 0));
      if (i < strings[s].size()) {
        data.next_token.emplace_back(model.alphabet().require(strings[s][i]));
        data.successor.emplace_back(record + 1);
      } else {
        data.next_token.emplace_back(std::nullopt);
        data.successor.emplace_back(std::nullopt);
      }
    }
  }
  return data;
}

KMeansExtraction kmeans_extract(const RnnModel& model, std::span<const std::string> strings, int k, Rng& rng,
                                const KMeansOptions& options) {
  if (strings.empty()) throw InputError("kmeans_extract needs at least one string");
  const auto data = collect_hidden_states(model, strings, options.exec);
  KMeansExtraction out;
  out.clustering = kmeans(data.hidden, k, rng, options);
  const auto& cluster = out.clustering.assignment;
  const auto clusters = static_cast<std::size_t>(k);
  const std::size_t tokens = model.alphabet().size();

  std::vector<std::size_t> positive(clusters, 0), members(clusters, 0);
  std::vector<std::size_t> votes(clusters * tokens * clusters, 0);
  for (std::size_t r = 0; r < data.label.size(); ++r) {
    const auto c = static_cast<std::size_t>(cluster[r]);
    ++members[c];
    positive[c] += data.label[r] ? 1 : 0;
    if (data.successor[r]) {
      const auto to = static_cast<std::size_t>(cluster[*data.successor[r]]);
      ++votes[(c * tokens + *data.next_token[r]) * clusters + to];
    }
  }

  Dfa machine(model.alphabet(), clusters, cluster[data.bos_records.front()]);
  out.cluster_accepting.resize(clusters);
  for (std::size_t c = 0; c < clusters; ++c) {
    out.cluster_accepting[c] = 2 * positive[c] > members[c];
    machine.set_accepting(static_cast<StateId>(c), out.cluster_accepting[c]);
    for (std::size_t t = 0; t < tokens; ++t) {
      std::size_t best = 0;
      StateId target = kUndefined;
      for (std::size_t to = 0; to < clusters; ++to) {
        const auto count = votes[(c * tokens + t) * clusters + to];
        if (count > best) {
          best = count;
          target = static_cast<StateId>(to);
        }
      }
      machine.set_transition(static_cast<StateId>(c), t, target);
    }
  }
  out.raw = canonicalize(machine);
  out.minimized = minimize(out.raw);
  return out;
}

}  // namespace dfx

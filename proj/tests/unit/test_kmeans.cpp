#include <random>

#include "doctest.h"

#include "dfx/automata/algorithms.hpp"
#include "dfx/baseline/kmeans.hpp"
#include "dfx/errors.hpp"
#include "dfx/kernels/parallel.hpp"

using namespace dfx;

namespace {

Eigen::MatrixXd gaussian_points(Rng& rng, Eigen::Index n, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd p(n, dim);
  for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = g(rng);
  return p;
}

double distortion_of(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids, const std::vector<int>& a) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(a[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

std::vector<std::string> strings_for(Rng& rng, std::size_t count, std::size_t len) {
  std::bernoulli_distribution coin(0.5);
  std::vector<std::string> out(count);
  for (auto& w : out) {
    for (std::size_t i = 0; i < len; ++i) w += coin(rng) ? 'a' : 'b';
  }
  return out;
}

}  // namespace

TEST_CASE("one cluster sits at the mean") {
  Rng rng(1);
  const auto points = gaussian_points(rng, 50, 3);
  const auto r = kmeans(points, 1, rng);
  CHECK((r.centroids.row(0) - points.colwise().mean()).norm() < 1e-12);
  CHECK(r.converged);
}

TEST_CASE("as many clusters as distinct points gives zero distortion") {
  Rng rng(2);
  Eigen::MatrixXd base = gaussian_points(rng, 7, 4);
  Eigen::MatrixXd points(21, 4);
  for (Eigen::Index i = 0; i < 21; ++i) points.row(i) = base.row(i % 7);
  for (auto init : {KMeansInit::kPlusPlus, KMeansInit::kUniform}) {
    KMeansOptions options;
    options.init = init;
    const auto r = kmeans(points, 7, rng, options);
    CHECK(r.distortion.back() <= 1e-20);  // means of three equal doubles may round
    for (Eigen::Index i = 0; i < 21; ++i) {
      CHECK(r.assignment[static_cast<std::size_t>(i)] == r.assignment[static_cast<std::size_t>(i % 7)]);
    }
  }
  CHECK_THROWS_AS(kmeans(points.topRows(3), 4, rng), InputError);
  CHECK_THROWS_AS(kmeans(points, 0, rng), InputError);
}

TEST_CASE("k-means is deterministic, monotone and consistent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng data(seed);
    const auto points = gaussian_points(data, 200, 5);
    Rng a(seed + 100), b(seed + 100);
    KMeansOptions options;
    options.restarts = 1 + static_cast<int>(seed % 3);
    const auto r1 = kmeans(points, 8, a, options);
    const auto r2 = kmeans(points, 8, b, options);
    CHECK(r1.assignment == r2.assignment);
    CHECK(r1.centroids == r2.centroids);
    for (std::size_t i = 1; i < r1.distortion.size(); ++i) CHECK(r1.distortion[i] <= r1.distortion[i - 1] + 1e-9);
    CHECK(r1.distortion.back() == doctest::Approx(distortion_of(points, r1.centroids, r1.assignment)));
    // every point sits with its nearest centroid at a fixed point
    if (r1.converged) {
      for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const auto own = r1.assignment[static_cast<std::size_t>(i)];
        for (Eigen::Index c = 0; c < r1.centroids.rows(); ++c) {
          CHECK((points.row(i) - r1.centroids.row(own)).squaredNorm() <=
                (points.row(i) - r1.centroids.row(c)).squaredNorm() + 1e-12);
        }
      }
    }
    options.exec = kernels::Execution::kSerial;
    Rng c(seed + 100);
    CHECK(kmeans(points, 8, c, options).assignment == r1.assignment);
  }
}

TEST_CASE("more restarts never end worse") {
  Rng data(5);
  const auto points = gaussian_points(data, 300, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    KMeansOptions one, many;
    one.restarts = 1;
    many.restarts = 10;
    Rng a(seed), b(seed);
    CHECK(kmeans(points, 10, b, many).distortion.back() <= kmeans(points, 10, a, one).distortion.back() + 1e-9);
  }
}

TEST_CASE("hidden state records link prefixes in order") {
  Rng rng(3);
  const auto model = init_model(binary_alphabet(), 4, 8, rng);
  const auto strings = strings_for(rng, 10, 6);
  const auto data = collect_hidden_states(model, strings);
  CHECK(data.hidden.rows() == 70);
  CHECK(data.bos_records.size() == 10);
  for (std::size_t s = 0; s < strings.size(); ++s) {
    const auto r = forward(model, strings[s]);
    const auto d = decisions(r);
    std::size_t rec = data.bos_records[s];
    for (std::size_t i = 0; i <= strings[s].size(); ++i) {
      CHECK(data.hidden.row(static_cast<Eigen::Index>(rec)) == r.hidden.row(static_cast<Eigen::Index>(i)));
      CHECK(data.label[rec] == d[i]);
      if (i == strings[s].size()) {
        CHECK_FALSE(data.successor[rec].has_value());
        CHECK_FALSE(data.next_token[rec].has_value());
      } else {
        CHECK(*data.next_token[rec] == model.alphabet().require(strings[s][i]));
        rec = *data.successor[rec];
      }
    }
  }
}

TEST_CASE("cluster votes match an independent recount") {
  Rng rng(4);
  const auto model = init_model(binary_alphabet(), 4, 8, rng);
  const auto strings = strings_for(rng, 30, 8);
  Rng a(9), b(9);
  const auto x = kmeans_extract(model, strings, 5, a);
  const auto y = kmeans_extract(model, strings, 5, b);
  CHECK(x.raw == y.raw);
  CHECK(x.minimized == y.minimized);
  CHECK(equivalent(x.minimized, x.raw));

  const auto data = collect_hidden_states(model, strings);
  const auto& assign = x.clustering.assignment;
  const int k = 5;
  std::vector<int> yes(k, 0), no(k, 0);
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(k * 2), std::vector<int>(k, 0));
  for (std::size_t r = 0; r < data.label.size(); ++r) {
    const auto c = assign[r];
    (data.label[r] ? yes : no)[static_cast<std::size_t>(c)]++;
    if (data.successor[r]) succ[static_cast<std::size_t>(c * 2) + *data.next_token[r]][assign[*data.successor[r]]]++;
  }
  for (int c = 0; c < k; ++c) CHECK(x.cluster_accepting[static_cast<std::size_t>(c)] == (yes[c] > no[c]));

  // replay the vote on raw cluster ids and compare languages on short strings
  const auto start = assign[data.bos_records[0]];
  auto step = [&](int c, std::size_t t) {
    const auto& row = succ[static_cast<std::size_t>(c * 2) + t];
    const auto best = std::max_element(row.begin(), row.end());
    return *best == 0 ? -1 : static_cast<int>(best - row.begin());
  };
  std::vector<std::string> probes{""};
  for (std::size_t i = 0; i < probes.size() && probes.size() < 500; ++i) {
    probes.push_back(probes[i] + 'a');
    probes.push_back(probes[i] + 'b');
  }
  for (const auto& w : probes) {
    int c = start;
    for (char ch : w) {
      if (c < 0) break;
      c = step(c, ch == 'a' ? 0 : 1);
    }
    const bool expected = c >= 0 && x.cluster_accepting[static_cast<std::size_t>(c)];
    CHECK(accepts(x.raw, w) == expected);
  }
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  const int saved = kernels::thread_count();
  kernels::set_thread_count(4);
  Rng rng(5);
  const auto model = init_model(binary_alphabet(), 6, 24, rng);
  const auto strings = strings_for(rng, 64, 15);
  const auto s = kernels::forward_all(model, strings, kernels::Execution::kSerial);
  const auto p = kernels::forward_all(model, strings, kernels::Execution::kParallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].hidden == p[i].hidden);
    CHECK(s[i].accept == p[i].accept);
  }
  CHECK(kernels::decisions_all(model, strings, kernels::Execution::kSerial) ==
        kernels::decisions_all(model, strings, kernels::Execution::kParallel));
  CHECK(kernels::verdicts_all(model, strings, kernels::Execution::kSerial) ==
        kernels::verdicts_all(model, strings, kernels::Execution::kParallel));

  const auto points = gaussian_points(rng, 500, 8);
  std::vector<bool> labels;
  for (Eigen::Index i = 0; i < points.rows(); ++i) labels.push_back(i % 3 == 0);
  const auto es = kernels::earliest_partners(points, labels, 0.5, kernels::Execution::kSerial);
  CHECK(es == kernels::earliest_partners(points, labels, 0.5, kernels::Execution::kParallel));
  // brute force
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    StateId want = kUndefined;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double cos = points.row(i).dot(points.row(j)) / (points.row(i).norm() * points.row(j).norm());
      if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] && cos > 0.5) {
        want = static_cast<StateId>(j);
        break;
      }
    }
    CHECK(es[static_cast<std::size_t>(i)] == want);
  }

  const Eigen::MatrixXd centroids = points.topRows(12);
  std::vector<int> as, ap;
  const double ds = kernels::assign_nearest(points, centroids, as, kernels::Execution::kSerial);
  const double dp = kernels::assign_nearest(points, centroids, ap, kernels::Execution::kParallel);
  CHECK(as == ap);
  CHECK(ds == dp);
  kernels::set_thread_count(saved);
}

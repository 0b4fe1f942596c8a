#include <cmath>
#include <sstream>

#include "doctest.h"

#include "dfx/errors.hpp"
#include "dfx/languages/sampling.hpp"
#include "dfx/languages/tomita.hpp"
#include "dfx/rnn/adamw.hpp"
#include "dfx/rnn/checkpoint_io.hpp"
#include "dfx/rnn/model.hpp"
#include "dfx/rnn/saturation.hpp"
#include "dfx/rnn/train.hpp"

using namespace dfx;

namespace {

RnnModel small_model(std::uint64_t seed, Eigen::Index e = 4, Eigen::Index d = 8) {
  Rng rng(seed);
  return init_model(binary_alphabet(), e, d, rng);
}

// Loss written out directly from the recurrence, one string at a time.
double reference_loss(const RnnModel& m, const std::vector<LabeledSample>& batch) {
  const auto& p = m.params();
  double total = 0.0;
  for (const auto& s : batch) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(m.hidden_dim());
    const auto tokens = m.encode(s.x);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Eigen::VectorXd x = p.embedding.row(static_cast<Eigen::Index>(tokens[i])).transpose();
      h = (p.recurrent * h + p.input * x).array().tanh();
      const Eigen::Vector2d z = p.head * h + p.head_bias;
      const double mx = z.maxCoeff();
      const double lse = mx + std::log(std::exp(z(0) - mx) + std::exp(z(1) - mx));
      total += lse - z(s.y[i] ? 1 : 0);
    }
  }
  return total;
}

std::vector<LabeledSample> gradient_batch() {
  std::vector<LabeledSample> out;
  for (const char* w : {"", "a", "ab", "bba", "abab", "aabba", "babbab"}) out.push_back(label(LanguageId(3), w));
  return out;
}

}  // namespace

TEST_CASE("parameter shapes and seeded initialization") {
  Rng rng(1);
  const auto m = init_model(binary_alphabet(), 10, 100, rng);
  const auto& p = m.params();
  CHECK(p.embedding.rows() == 3);
  CHECK(p.embedding.cols() == 10);
  CHECK(p.recurrent.rows() == 100);
  CHECK(p.recurrent.cols() == 100);
  CHECK(p.input.rows() == 100);
  CHECK(p.input.cols() == 10);
  CHECK(p.head.rows() == 2);
  CHECK(p.head.cols() == 100);
  CHECK(p.head_bias.size() == 2);
  CHECK(p.recurrent.cwiseAbs().maxCoeff() <= 0.1);
  CHECK(p.input.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(10.0));

  Rng again(1);
  const auto twin = init_model(binary_alphabet(), 10, 100, again);
  for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) CHECK(*p.tensors()[t] == *twin.params().tensors()[t]);
}

TEST_CASE("forward shapes, range and causality") {
  const auto m = small_model(2);
  const auto r = forward(m, "abba");
  CHECK(r.hidden.rows() == 5);
  CHECK(r.accept.size() == 5);
  CHECK(r.hidden.cwiseAbs().maxCoeff() < 1.0);
  CHECK(forward(m, "").hidden.rows() == 1);

  const auto ab = forward(m, "ab");
  const auto abb = forward(m, "abb");
  CHECK(abb.hidden.topRows(3) == ab.hidden);
  CHECK(std::vector<double>(abb.accept.begin(), abb.accept.begin() + 3) == ab.accept);
  CHECK_THROWS_AS(forward(m, "abc"), InputError);
}

TEST_CASE("decision thresholds") {
  CHECK(decisions_from_probabilities({0.9, 0.2, 0.8}) == std::vector<bool>{true, false, true});
  CHECK(decisions_from_probabilities({0.5}) == std::vector<bool>{false});

  // a zero head gives tied logits everywhere, which reject
  auto m = small_model(3);
  m.params().head.setZero();
  m.params().head_bias.setZero();
  CHECK(decisions(m, "ab") == std::vector<bool>{false, false, false});
  m.params().head_bias(1, 0) = 1.0;
  CHECK(decisions(m, "ab") == std::vector<bool>{true, true, true});
  CHECK(rnn_accepts(m, "ab"));
}

TEST_CASE("loss agrees with a direct evaluation of the recurrence") {
  const auto m = small_model(4);
  const auto batch = gradient_batch();
  CHECK(loss_and_gradients(m, batch).loss == doctest::Approx(reference_loss(m, batch)).epsilon(1e-12));
}

TEST_CASE("backpropagation through time matches central finite differences") {
  const auto m = small_model(5);
  const auto batch = gradient_batch();
  const auto analytic = loss_and_gradients(m, batch).grads;
  const double step = 1e-5;
  for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) {
    const auto& g = *analytic.tensors()[t];
    Eigen::MatrixXd numeric(g.rows(), g.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        auto plus = m;
        auto minus = m;
        (*plus.params().tensors()[t])(i, j) += step;
        (*minus.params().tensors()[t])(i, j) -= step;
        numeric(i, j) = (reference_loss(plus, batch) - reference_loss(minus, batch)) / (2 * step);
      }
    }
    const double rel = (g - numeric).norm() / std::max((g + numeric).norm(), 1e-12);
    CAPTURE(t);
    CHECK(rel <= 1e-4);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const double a = g(i), n = numeric(i);
      CHECK(std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6}) <= 1e-4);
    }
  }
}

TEST_CASE("AdamW closed forms") {
  auto params = small_model(6).params();
  const auto original = params;
  AdamWHyper hyper;

  SUBCASE("zero gradient only decays") {
    auto state = AdamWState::zeros_like(params);
    adamw_step(params, params.zeros_like(), state, hyper);
    for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) {
      const Eigen::MatrixXd expected = *original.tensors()[t] * (1.0 - hyper.lr * hyper.weight_decay);
      CHECK((*params.tensors()[t] - expected).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("bias-corrected first step moves each entry by about lr") {
    hyper.weight_decay = 0.0;
    auto grads = params.zeros_like();
    Rng rng(7);
    std::normal_distribution<double> n(0.0, 1.0);
    for (auto* g : grads.tensors()) g->noalias() = g->unaryExpr([&](double) { return n(rng); });
    auto state = AdamWState::zeros_like(params);
    adamw_step(params, grads, state, hyper);
    for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) {
      const Eigen::MatrixXd update = *params.tensors()[t] - *original.tensors()[t];
      const auto& g = *grads.tensors()[t];
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        CHECK(std::abs(update(i)) <= hyper.lr * (1 + 1e-9));
        CHECK(update(i) == doctest::Approx(g(i) > 0 ? -hyper.lr : hyper.lr).epsilon(1e-6));
      }
    }
    CHECK(state.step == 1);
  }
  SUBCASE("pure function of its inputs") {
    auto grads = params.zeros_like();
    grads.recurrent.setConstant(0.25);
    auto p1 = params, p2 = params;
    auto s1 = AdamWState::zeros_like(params), s2 = AdamWState::zeros_like(params);
    for (int i = 0; i < 3; ++i) {
      adamw_step(p1, grads, s1, hyper);
      adamw_step(p2, grads, s2, hyper);
    }
    for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) CHECK(*p1.tensors()[t] == *p2.tensors()[t]);
  }
  SUBCASE("non-finite gradients are rejected without side effects") {
    auto grads = params.zeros_like();
    grads.head(0, 0) = std::nan("");
    auto state = AdamWState::zeros_like(params);
    CHECK_THROWS_AS(adamw_step(params, grads, state, hyper), TrainingError);
    CHECK(state.step == 0);
    CHECK(params.recurrent == original.recurrent);
  }
}

TEST_CASE("memorizing 50 strings lowers the loss every epoch") {
  Rng data(8);
  const auto set = sample_balanced(LanguageId(4), 12, 50, data);
  TrainConfig config;
  config.epochs = 3;
  config.clip_norm = 1.0;
  Rng rng(9);
  const auto result = train(small_model(10, 4, 16), set, set, config, rng);
  REQUIRE(result.metrics.size() == 3);
  CHECK(result.metrics[1].train_loss < result.metrics[0].train_loss);
  CHECK(result.metrics[2].train_loss < result.metrics[1].train_loss);
  CHECK(result.checkpoints.size() == 3);
  CHECK(result.checkpoints[2].meta.epoch == 3);
}

TEST_CASE("training is bitwise reproducible and learns Tomita 1") {
  Rng data(11);
  const auto train_set = sample_balanced(LanguageId(1), 20, 1000, data);
  const auto dev_set = sample_balanced(LanguageId(1), 40, 100, data);
  TrainConfig config;
  config.epochs = 6;
  config.clip_norm = 1.0;
  Rng r1(12), r2(12);
  const auto a = train(small_model(13, 4, 16), train_set, dev_set, config, r1);
  const auto b = train(small_model(13, 4, 16), train_set, dev_set, config, r2);
  for (std::size_t e = 0; e < a.checkpoints.size(); ++e) {
    std::ostringstream sa, sb;
    write_checkpoint(sa, a.checkpoints[e]);
    write_checkpoint(sb, b.checkpoints[e]);
    CHECK(sa.str() == sb.str());
  }
  CHECK(a.metrics.back().dev_prefix_accuracy == 1.0);
  // the highest epoch at the best accuracy is selected
  CHECK(a.best_epoch == 6);
  CHECK_THROWS_AS(train(small_model(1), {}, dev_set, config, r1), InputError);
}

TEST_CASE("checkpoint text round trip is lossless") {
  Checkpoint ck{small_model(14, 10, 20), {}};
  ck.meta = {3, 7, 42, 0.987654321, ck.model.params().norm()};
  ck.model.params().recurrent(0, 0) = 1.0 / 3.0;
  ck.model.params().input(1, 1) = -5e-300;
  std::stringstream ss;
  write_checkpoint(ss, ck);
  const auto back = read_checkpoint(ss);
  CHECK(back.meta == ck.meta);
  CHECK(back.model.alphabet().symbols() == ck.model.alphabet().symbols());
  for (std::size_t t = 0; t < RnnParams::kTensorCount; ++t) {
    CHECK(*back.model.params().tensors()[t] == *ck.model.params().tensors()[t]);
  }
  std::istringstream truncated("dfx-checkpoint 1\nalphabet ab\nmatrix embedding 3 2\n1 2\n");
  CHECK_THROWS_AS(read_checkpoint(truncated), FormatError);

  std::ostringstream csv;
  write_metrics_csv(csv, std::vector<EpochMetrics>{{1, 0.5, 0.75, 0.25, 3.0}});
  CHECK(csv.str().rfind("epoch,train_loss,dev_prefix_accuracy,dev_string_accuracy,param_norm\n", 0) == 0);
}

TEST_CASE("saturation distance examples") {
  Eigen::Vector4d corner(0.5, -0.5, 0.5, 0.5);
  CHECK(*saturation_distance(corner) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(*saturation_distance(corner * 7.0) == doctest::Approx(0.0));

  // (1,0,0,0) against (1/2)(1,1,1,1): sqrt(1/4 + 3/4)
  const Eigen::Vector4d axis(1, 0, 0, 0);
  CHECK(*saturation_distance(axis) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_FALSE(saturation_distance(Eigen::Vector4d::Zero()).has_value());

  CHECK_THROWS_AS(saturation_level(small_model(1), {}), InputError);
}

TEST_CASE("scaling the parameters does not reduce saturation") {
  const std::vector<std::string> strings{"", "a", "ab", "abba", "bbbbaaab", "abababab", "aaaaaaaaaa"};
  for (std::uint64_t seed : {15u, 16u, 17u}) {
    const auto base = small_model(seed, 10, 32);
    double previous = 2.0;
    for (double rho : {1.0, 2.0, 4.0}) {
      auto scaled = base;
      for (auto* t : scaled.params().tensors()) *t *= rho;
      const double eps = saturation_level(scaled, strings);
      CAPTURE(seed);
      CAPTURE(rho);
      CHECK(eps <= previous);
      previous = eps;
    }
  }
}

TEST_CASE("kappa bound substitutions") {
  CHECK(kappa_bound(100, 0.0) == std::optional<double>(0.02));
  CHECK(*kappa_bound(4, 0.1) == doctest::Approx(0.32).epsilon(1e-14));
  CHECK_FALSE(kappa_bound(4, 0.5).has_value());
  CHECK_FALSE(kappa_bound(16, 0.3).has_value());
  CHECK_THROWS_AS(kappa_bound(0, 0.0), InputError);
}

TEST_CASE("squared distance of unit vectors is 2(1 - cos)") {
  Rng rng(18);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 64;
    Eigen::VectorXd a(d), b(d);
    for (int i = 0; i < d; ++i) {
      a(i) = n(rng);
      b(i) = n(rng);
    }
    a.normalize();
    b.normalize();
    CHECK(std::abs((a - b).squaredNorm() - 2.0 * (1.0 - a.dot(b))) <= 1e-9);
  }
}

TEST_CASE("similar enough near-saturated states share a sign pattern") {
  Rng rng(19);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int d : {4, 8, 16}) {
    const double corner = 1.0 / std::sqrt(static_cast<double>(d));
    int violations = 0, applicable = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      Eigen::VectorXd s1(d);
      for (int i = 0; i < d; ++i) s1(i) = unit(rng) < 0.5 ? -1.0 : 1.0;
      Eigen::VectorXd s2 = s1;
      if (trial % 2 == 1) s2(static_cast<Eigen::Index>(unit(rng) * d)) *= -1.0;
      // perturbations of norm up to 0.3 of the corner scale
      auto perturb = [&](const Eigen::VectorXd& s) {
        Eigen::VectorXd delta(d);
        for (int i = 0; i < d; ++i) delta(i) = n(rng);
        return Eigen::VectorXd(s * corner + delta.normalized() * (0.3 * corner * unit(rng)));
      };
      const Eigen::VectorXd h1 = perturb(s1), h2 = perturb(s2);
      const double eps = std::max(*saturation_distance(h1), *saturation_distance(h2));
      const auto bound = kappa_bound(d, eps);
      if (!bound) continue;
      const double cos = h1.dot(h2) / (h1.norm() * h2.norm());
      if (1.0 - cos >= *bound) continue;
      ++applicable;
      const bool same = ((h1.array() >= 0) == (h2.array() >= 0)).all();
      violations += same ? 0 : 1;
    }
    CAPTURE(d);
    CHECK(violations == 0);
    CHECK(applicable > 1000);
  }
}

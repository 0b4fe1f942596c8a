#include "dfx/harness/config.hpp"

#include <fstream>
#include <set>

#include "dfx/errors.hpp"

namespace dfx {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw InputError("config: '" + where + "' must be an object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw InputError("config: unknown key '" + where + "." + item.key() + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

json optimizer_json(const AdamWHyper& h) {
  return {{"lr", h.lr}, {"beta1", h.beta1}, {"beta2", h.beta2}, {"eps", h.eps}, {"weight_decay", h.weight_decay}};
}

}  // namespace

ExperimentConfig ExperimentConfig::full_scale() {
  ExperimentConfig config;
  config.training.train_count = 100000;
  config.training.train_length = 100;
  config.training.dev_length = 200;
  config.training.epochs = 22;
  return config;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw InputError("config: " + what); };
  if (languages.empty()) fail("at least one language is required");
  for (int l : languages) {
    if (l < 1 || l > 7) fail("language ids must be in [1, 7]");
  }
  if (seeds.empty()) fail("at least one seed is required");
  const auto& t = training;
  if (t.train_count < 1 || t.dev_count < 1 || t.train_length < 1) fail("training sizes must be positive");
  if (t.epochs < 1 || t.embed_dim < 1 || t.hidden_dim < 1 || t.batch_size < 1) {
    fail("epochs, dimensions and batch size must be positive");
  }
  if (!(t.optimizer.lr > 0.0) || t.optimizer.beta1 < 0.0 || t.optimizer.beta1 >= 1.0 || t.optimizer.beta2 < 0.0 ||
      t.optimizer.beta2 >= 1.0 || !(t.optimizer.eps > 0.0) || t.optimizer.weight_decay < 0.0) {
    fail("optimizer hyperparameters out of range");
  }
  if (t.clip_norm < 0.0) fail("clip_norm must be >= 0");
  const auto& e = extraction;
  auto valid_kappa = [](double k) { return k > 0.0 && k < 1.0; };
  if (!valid_kappa(e.kappa)) fail("kappa must lie in (0, 1)");
  for (double k : e.kappa_grid) {
    if (!valid_kappa(k)) fail("kappa_grid entries must lie in (0, 1)");
  }
  if (e.data_count < 1 || e.eval_count < 1) fail("data_count and eval_count must be positive");
  if (e.epoch < 0 || e.epoch > t.epochs) fail("extraction.epoch must be 0 (best) or a trained epoch");
  for (int ep : e.epoch_grid) {
    if (ep < 1 || ep > t.epochs) fail("epoch_grid entries must be trained epochs");
  }
  for (auto n : e.data_grid) {
    if (n < 1) fail("data_grid entries must be positive");
  }
  for (auto n : e.epoch_data_grid) {
    if (n < 1) fail("epoch_data_grid entries must be positive");
  }
  if (baseline.k < 1 || baseline.max_iterations < 1 || baseline.restarts < 1) {
    fail("baseline k, max_iterations and restarts must be positive");
  }
  if (threads < 0) fail("threads must be >= 0");
}

json to_json(const TrainingSettings& t) {
  return {{"train_count", t.train_count},
          {"train_length", t.train_length},
          {"dev_count", t.dev_count},
          {"dev_length", t.dev_length},
          {"epochs", t.epochs},
          {"embed_dim", t.embed_dim},
          {"hidden_dim", t.hidden_dim},
          {"batch_size", t.batch_size},
          {"model_seed", t.model_seed},
          {"clip_norm", t.clip_norm},
          {"optimizer", optimizer_json(t.optimizer)}};
}

TrainingSettings training_from_json(const json& t) {
  TrainingSettings s;
  try {
    reject_unknown(t,
                   {"train_count", "train_length", "dev_count", "dev_length", "epochs", "embed_dim", "hidden_dim",
                    "batch_size", "model_seed", "clip_norm", "optimizer"},
                   "training");
    read(t, "train_count", s.train_count);
    read(t, "train_length", s.train_length);
    read(t, "dev_count", s.dev_count);
    read(t, "dev_length", s.dev_length);
    read(t, "epochs", s.epochs);
    read(t, "embed_dim", s.embed_dim);
    read(t, "hidden_dim", s.hidden_dim);
    read(t, "batch_size", s.batch_size);
    read(t, "model_seed", s.model_seed);
    read(t, "clip_norm", s.clip_norm);
    if (t.contains("optimizer")) {
      const auto& o = t.at("optimizer");
      reject_unknown(o, {"lr", "beta1", "beta2", "eps", "weight_decay"}, "training.optimizer");
      read(o, "lr", s.optimizer.lr);
      read(o, "beta1", s.optimizer.beta1);
      read(o, "beta2", s.optimizer.beta2);
      read(o, "eps", s.optimizer.eps);
      read(o, "weight_decay", s.optimizer.weight_decay);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  return s;
}

json to_json(const ExperimentConfig& c) {
  const auto& e = c.extraction;
  return {
      {"languages", c.languages},
      {"seeds", c.seeds},
      {"out_dir", c.out_dir.string()},
      {"threads", c.threads},
      {"training", to_json(c.training)},
      {"extraction",
       {{"kappa", e.kappa},
        {"cosine_threshold", 1.0 - e.kappa},
        {"data_count", e.data_count},
        {"string_length", e.string_length},
        {"eval_count", e.eval_count},
        {"eval_max_length", e.eval_max_length},
        {"epoch", e.epoch},
        {"data_grid", e.data_grid},
        {"sweep_string_length", e.sweep_string_length},
        {"kappa_grid", e.kappa_grid},
        {"epoch_grid", e.epoch_grid},
        {"epoch_data_grid", e.epoch_data_grid},
        {"epoch_string_length", e.epoch_string_length},
        {"epoch_seeds", e.epoch_seeds}}},
      {"baseline",
       {{"k", c.baseline.k}, {"max_iterations", c.baseline.max_iterations}, {"restarts", c.baseline.restarts}}},
  };
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    reject_unknown(j, {"languages", "seeds", "out_dir", "threads", "training", "extraction", "baseline"}, "config");
    read(j, "languages", c.languages);
    read(j, "seeds", c.seeds);
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    read(j, "threads", c.threads);
    if (j.contains("training")) c.training = training_from_json(j.at("training"));
    if (j.contains("extraction")) {
      const auto& e = j.at("extraction");
      reject_unknown(e,
                     {"kappa", "cosine_threshold", "data_count", "string_length", "eval_count", "eval_max_length",
                      "epoch", "data_grid", "sweep_string_length", "kappa_grid", "epoch_grid", "epoch_data_grid",
                      "epoch_string_length", "epoch_seeds"},
                     "extraction");
      read(e, "kappa", c.extraction.kappa);
      if (e.contains("cosine_threshold")) {
        const double threshold = e.at("cosine_threshold").get<double>();
        if (!e.contains("kappa")) {
          c.extraction.kappa = 1.0 - threshold;
        } else if (std::abs((1.0 - c.extraction.kappa) - threshold) > 1e-12) {
          throw InputError("config: extraction.kappa and extraction.cosine_threshold disagree");
        }
      }
      read(e, "data_count", c.extraction.data_count);
      read(e, "string_length", c.extraction.string_length);
      read(e, "eval_count", c.extraction.eval_count);
      read(e, "eval_max_length", c.extraction.eval_max_length);
      read(e, "epoch", c.extraction.epoch);
      read(e, "data_grid", c.extraction.data_grid);
      read(e, "sweep_string_length", c.extraction.sweep_string_length);
      read(e, "kappa_grid", c.extraction.kappa_grid);
      read(e, "epoch_grid", c.extraction.epoch_grid);
      read(e, "epoch_data_grid", c.extraction.epoch_data_grid);
      read(e, "epoch_string_length", c.extraction.epoch_string_length);
      read(e, "epoch_seeds", c.extraction.epoch_seeds);
    }
    if (j.contains("baseline")) {
      const auto& b = j.at("baseline");
      reject_unknown(b, {"k", "max_iterations", "restarts"}, "baseline");
      read(b, "k", c.baseline.k);
      read(b, "max_iterations", c.baseline.max_iterations);
      read(b, "restarts", c.baseline.restarts);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open config " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InputError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& config) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write config " + path.string());
  os << to_json(config).dump(2) << "\n";
}

Rng derived_rng(std::string_view purpose, int language, std::uint64_t seed) {
  std::vector<std::uint32_t> material(purpose.begin(), purpose.end());
  material.push_back(static_cast<std::uint32_t>(language));
  material.push_back(static_cast<std::uint32_t>(seed & 0xffffffffu));
  material.push_back(static_cast<std::uint32_t>(seed >> 32));
  std::seed_seq seq(material.begin(), material.end());
  return Rng(seq);
}

}  // namespace dfx

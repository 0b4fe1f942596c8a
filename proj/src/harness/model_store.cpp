#include "dfx/harness/model_store.hpp"

#include <fstream>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfx/errors.hpp"
#include "dfx/languages/tomita.hpp"
#include "dfx/rnn/checkpoint_io.hpp"

namespace dfx {

using nlohmann::json;

namespace {

json metrics_json(const EpochMetrics& m) {
  return {{"epoch", m.epoch},
          {"train_loss", m.train_loss},
          {"dev_prefix_accuracy", m.dev_prefix_accuracy},
          {"dev_string_accuracy", m.dev_string_accuracy},
          {"param_norm", m.param_norm}};
}

EpochMetrics metrics_from_json(const json& j) {
  EpochMetrics m;
  m.epoch = j.at("epoch").get<int>();
  m.train_loss = j.at("train_loss").get<double>();
  m.dev_prefix_accuracy = j.at("dev_prefix_accuracy").get<double>();
  m.dev_string_accuracy = j.at("dev_string_accuracy").get<double>();
  m.param_norm = j.at("param_norm").get<double>();
  return m;
}

std::optional<TrainingRecord> read_record(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  try {
    json j;
    is >> j;
    TrainingRecord record;
    record.settings = training_from_json(j.at("training"));
    record.best_epoch = j.at("best_epoch").get<int>();
    for (const auto& m : j.at("metrics")) record.metrics.push_back(metrics_from_json(m));
    return record;
  } catch (const std::exception& e) {
    spdlog::warn("ignoring unreadable training record {}: {}", path.string(), e.what());
    return std::nullopt;
  }
}

}  // namespace

bool TrainingRecord::converged() const {
  if (best_epoch < 1 || static_cast<std::size_t>(best_epoch) > metrics.size()) return false;
  return metrics[static_cast<std::size_t>(best_epoch - 1)].dev_prefix_accuracy == 1.0;
}

TrainingData make_training_data(const TrainingSettings& settings, int language) {
  const LanguageId id(language);
  auto train_rng = derived_rng("train-data", language, settings.model_seed);
  auto dev_rng = derived_rng("dev-data", language, settings.model_seed);
  return {sample_balanced(id, settings.train_length, settings.train_count, train_rng),
          sample_balanced(id, settings.dev_length, settings.dev_count, dev_rng)};
}

ModelStore::ModelStore(std::filesystem::path root, TrainingSettings settings, bool auto_train)
    : root_(std::move(root)), settings_(std::move(settings)), auto_train_(auto_train) {}

std::filesystem::path ModelStore::directory(int language) const {
  return root_ / fmt::format("tomita{}-seed{}", language, settings_.model_seed);
}

std::filesystem::path ModelStore::checkpoint_path(int language, int epoch) const {
  return directory(language) / fmt::format("epoch{:02d}.ckpt", epoch);
}

bool ModelStore::trained(int language) const {
  const auto record = read_record(directory(language) / "training.json");
  if (!record || to_json(record->settings) != to_json(settings_)) return false;
  for (int epoch = 1; epoch <= settings_.epochs; ++epoch) {
    if (!std::filesystem::exists(checkpoint_path(language, epoch))) return false;
  }
  return true;
}

TrainingRecord ModelStore::train(int language) const {
  const auto dir = directory(language);
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "training.json");

  const auto data = make_training_data(settings_, language);
  auto init_rng = derived_rng("init", language, settings_.model_seed);
  auto shuffle_rng = derived_rng("shuffle", language, settings_.model_seed);
  auto model = init_model(binary_alphabet(), settings_.embed_dim, settings_.hidden_dim, init_rng);

  TrainConfig config;
  config.epochs = settings_.epochs;
  config.batch_size = settings_.batch_size;
  config.hyper = settings_.optimizer;
  config.clip_norm = settings_.clip_norm;
  config.language = language;
  config.seed = settings_.model_seed;
  spdlog::info("training tomita {} (seed {}): {} strings of length {}, {} epochs", language, settings_.model_seed,
               settings_.train_count, settings_.train_length, settings_.epochs);
  auto result = dfx::train(std::move(model), data.train, data.dev, config, shuffle_rng,
                      [&](const Checkpoint& checkpoint, const EpochMetrics&) {
                        save_checkpoint(checkpoint_path(language, checkpoint.meta.epoch), checkpoint);
                      });

  TrainingRecord record{settings_, result.best_epoch, result.metrics};
  {
    std::ofstream os(dir / "metrics.csv");
    write_metrics_csv(os, result.metrics);
  }
  json metrics = json::array();
  for (const auto& m : result.metrics) metrics.push_back(metrics_json(m));
  std::ofstream os(dir / "training.json");
  os << json{{"language", language}, {"training", to_json(settings_)}, {"best_epoch", result.best_epoch},
             {"metrics", metrics}}
            .dump(2)
     << "\n";
  if (!record.converged()) {
    spdlog::error("tomita {}: best dev prefix accuracy {:.4f} at epoch {} is below 100%", language,
                  result.metrics[static_cast<std::size_t>(result.best_epoch - 1)].dev_prefix_accuracy,
                  result.best_epoch);
  }
  return record;
}

TrainingRecord ModelStore::record(int language) const {
  if (!trained(language)) {
    if (!auto_train_) {
      throw InputError(fmt::format("no trained model for tomita {} under {} (run `dfx train` first)", language,
                                   directory(language).string()));
    }
    return train(language);
  }
  return *read_record(directory(language) / "training.json");
}

Checkpoint ModelStore::load(int language, int epoch) const {
  const auto rec = record(language);
  if (epoch == 0) epoch = rec.best_epoch;
  if (epoch < 1 || epoch > settings_.epochs) {
    throw InputError(fmt::format("epoch {} outside the trained range 1..{}", epoch, settings_.epochs));
  }
  return load_checkpoint(checkpoint_path(language, epoch));
}

}  // namespace dfx

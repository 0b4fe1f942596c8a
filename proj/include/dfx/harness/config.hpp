#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dfx/languages/sampling.hpp"
#include "dfx/rnn/adamw.hpp"

namespace dfx {

struct TrainingSettings {
  std::size_t train_count = 20000;
  std::size_t train_length = 50;
  std::size_t dev_count = 1000;
  std::size_t dev_length = 100;  // twice the training length
  int epochs = 20;
  int embed_dim = 10;
  int hidden_dim = 100;
  std::size_t batch_size = 16;
  AdamWHyper optimizer;
  double clip_norm = 1.0;  // global gradient-norm clip; 0 disables
  std::uint64_t model_seed = 0;
};

struct ExtractionSettings {
  double kappa = 0.01;
  std::size_t data_count = 300;
  std::size_t string_length = 10;
  std::size_t eval_count = 1000;
  std::size_t eval_max_length = 50;
  /// Checkpoint epoch to extract from; 0 selects the best dev epoch.
  int epoch = 0;
  std::vector<std::size_t> data_grid = {5, 10, 15, 20, 25, 30, 40, 50, 75, 100, 135, 150, 200, 300, 400, 500};
  std::size_t sweep_string_length = 15;
  std::vector<double> kappa_grid = {0.5, 0.4, 0.01};
  std::vector<int> epoch_grid;  // empty: every epoch
  std::vector<std::size_t> epoch_data_grid = {2, 4, 6, 8, 10, 12, 15, 20, 25, 30, 40, 50, 60, 80, 100, 150, 200, 300};
  std::size_t epoch_string_length = 10;
  std::vector<std::uint64_t> epoch_seeds = {0, 1, 2};
};

struct BaselineSettings {
  int k = 20;
  int max_iterations = 100;
  int restarts = 10;
};

/// Everything needed to reproduce a run. Serialized as JSON.
struct ExperimentConfig {
  std::vector<int> languages = {1, 2, 3, 4, 5, 6, 7};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  TrainingSettings training;
  ExtractionSettings extraction;
  BaselineSettings baseline;
  std::filesystem::path out_dir = "runs";
  int threads = 0;  // 0: OpenMP default

  /// The paper-scale training setup (100,000 strings of length 100, 22
  /// epochs).
  static ExperimentConfig full_scale();

  /// Throws InputError when a field is out of range.
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const TrainingSettings& settings);
/// Missing keys keep their defaults; unknown keys are rejected.
TrainingSettings training_from_json(const nlohmann::json& j);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& config);

/// Independent RNG stream for a (purpose, language, seed) triple.
Rng derived_rng(std::string_view purpose, int language, std::uint64_t seed);

}  // namespace dfx

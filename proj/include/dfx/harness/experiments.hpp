#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "dfx/baseline/kmeans.hpp"
#include "dfx/extraction/extract.hpp"
#include "dfx/harness/config.hpp"
#include "dfx/harness/model_store.hpp"
#include "dfx/harness/results.hpp"

namespace dfx {

/// What a single extraction job reads.
struct JobSpec {
  int language = 0;
  std::uint64_t seed = 0;
  int epoch = 0;  // recorded in the row; 0 means the best epoch
  std::size_t data_count = 0;
  std::size_t string_length = 0;
};

/// Extraction strings for a job: `data_count` coin-mixed strings of the
/// given length from the ("extract-data", language, seed) stream, so a
/// smaller count is always a prefix of a larger one.
std::vector<std::string> extraction_strings(const JobSpec& job);

/// Held-out set of the (language, seed) pair.
std::vector<LabeledSample> evaluation_set(const ExtractionSettings& settings, int language, std::uint64_t seed);

struct MergeRun {
  ResultRow row;
  ExtractionReport report;
};

struct KMeansRun {
  ResultRow row;
  KMeansExtraction extraction;
};

MergeRun run_merge(const RnnModel& model, const JobSpec& job, double kappa, std::span<const LabeledSample> eval_set);
KMeansRun run_kmeans(const RnnModel& model, const JobSpec& job, const BaselineSettings& baseline,
                     std::span<const LabeledSample> eval_set);

/// Where experiment outputs go. Writes nothing when `root` is empty.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path root = {}) : root_(std::move(root)) {}

  bool enabled() const { return !root_.empty(); }
  const std::filesystem::path& root() const { return root_; }
  /// Writes `<stem>.dfa` and `<stem>.dot` under the root.
  void machine(const std::filesystem::path& stem, const Dfa& dfa, const std::string& name) const;
  void machine(const std::filesystem::path& stem, const Nfa& nfa, const std::string& name) const;
  void results(const std::filesystem::path& file, std::span<const ResultRow> rows) const;
  void config(const ExperimentConfig& config) const;
  void text(const std::filesystem::path& file, const std::string& content) const;

 private:
  std::filesystem::path root_;
};

struct Table2Result {
  std::vector<ResultRow> rows;
  std::vector<Table2Summary> summary;
};

/// State merging and the k-means baseline for every configured language
/// and seed at the configured data count and string length.
Table2Result reproduce_table2(const ExperimentConfig& config, const ModelStore& store, const ArtifactWriter& out);

/// Extraction fidelity and size against the number of trie strings.
std::vector<ResultRow> sweep_data_size(const ExperimentConfig& config, const ModelStore& store,
                                       const ArtifactWriter& out);

/// Extraction at every kappa of the grid, with machines saved per run.
std::vector<ResultRow> sweep_kappa(const ExperimentConfig& config, const ModelStore& store, const ArtifactWriter& out);

/// Extraction from every checkpoint of the epoch grid over the epoch data
/// grid and epoch seeds.
std::vector<ResultRow> sweep_epochs(const ExperimentConfig& config, const ModelStore& store,
                                    const ArtifactWriter& out);

/// Smallest data count at which a (language, epoch, seed) curve first
/// reaches fidelity 1.0, or nullopt if it never does.
std::optional<std::size_t> data_to_full_fidelity(std::span<const ResultRow> rows, int language, int epoch,
                                                 std::uint64_t seed);

/// Per-language training check: throws TrainingError naming every
/// language whose recognizer misses 100% dev accuracy.
void require_converged(const ExperimentConfig& config, const ModelStore& store);

}  // namespace dfx

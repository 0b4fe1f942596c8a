#include "dfx/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "dfx/automata/algorithms.hpp"
#include "dfx/automata/io.hpp"
#include "dfx/errors.hpp"
#include "dfx/languages/tomita.hpp"

namespace dfx {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::filesystem::path run_stem(const JobSpec& job, const std::string& method, double kappa) {
  auto name = fmt::format("tomita{}/seed{}-epoch{}-n{}-{}", job.language, job.seed, job.epoch, job.data_count, method);
  if (method == "merge") name += fmt::format("-kappa{}", kappa);
  return name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path.string());
  os << content;
}

std::vector<int> epochs_of(const ExperimentConfig& config) {
  if (!config.extraction.epoch_grid.empty()) return config.extraction.epoch_grid;
  std::vector<int> all(static_cast<std::size_t>(config.training.epochs));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
  return all;
}

}  // namespace

std::vector<std::string> extraction_strings(const JobSpec& job) {
  auto rng = derived_rng("extract-data", job.language, job.seed);
  const auto samples = sample_coin_mixed(LanguageId(job.language), job.string_length, job.data_count, rng);
  std::vector<std::string> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.x);
  return out;
}

std::vector<LabeledSample> evaluation_set(const ExtractionSettings& settings, int language, std::uint64_t seed) {
  auto rng = derived_rng("eval", language, seed);
  return sample_eval_set(LanguageId(language), settings.eval_count, settings.eval_max_length, rng);
}

MergeRun run_merge(const RnnModel& model, const JobSpec& job, double kappa, std::span<const LabeledSample> eval_set) {
  const auto start = Clock::now();
  const auto strings = extraction_strings(job);
  MergeRun run{{}, extract(model, strings, MergePolicy(kappa))};
  const auto fid = fidelity(run.report.minimized, model, eval_set);
  auto& row = run.row;
  row.language = job.language;
  row.method = "merge";
  row.seed = job.seed;
  row.epoch = job.epoch;
  row.data = job.data_count;
  row.kappa = kappa;
  row.acc_rnn = fid.rnn;
  row.acc_gold = fid.gold;
  row.acc_prefix = fid.prefix;
  row.trie_size = run.report.trie_states;
  row.merged_size = run.report.merged_states;
  row.min_size = run.report.minimized_states;
  row.gold_equivalent = equivalent(run.report.minimized, gold_dfa(LanguageId(job.language)));
  row.train_fidelity = run.report.train_fidelity;
  row.wall_ms = elapsed_ms(start);
  return run;
}

KMeansRun run_kmeans(const RnnModel& model, const JobSpec& job, const BaselineSettings& baseline,
                     std::span<const LabeledSample> eval_set) {
  const auto start = Clock::now();
  const auto strings = extraction_strings(job);
  auto rng = derived_rng("kmeans", job.language, job.seed);
  KMeansOptions options;
  options.max_iterations = baseline.max_iterations;
  options.restarts = baseline.restarts;
  KMeansRun run{{}, kmeans_extract(model, strings, baseline.k, rng, options)};
  const auto fid = fidelity(run.extraction.minimized, model, eval_set);
  auto& row = run.row;
  row.language = job.language;
  row.method = "kmeans";
  row.seed = job.seed;
  row.epoch = job.epoch;
  row.data = job.data_count;
  row.acc_rnn = fid.rnn;
  row.acc_gold = fid.gold;
  row.acc_prefix = fid.prefix;
  row.merged_size = run.extraction.raw.size();
  row.min_size = run.extraction.minimized.size();
  row.gold_equivalent = equivalent(run.extraction.minimized, gold_dfa(LanguageId(job.language)));
  row.wall_ms = elapsed_ms(start);
  return run;
}

void ArtifactWriter::machine(const std::filesystem::path& stem, const Dfa& dfa, const std::string& name) const {
  if (!enabled()) return;
  write_file(root_ / (stem.string() + ".dfa"), to_text(dfa));
  write_file(root_ / (stem.string() + ".dot"), to_dot(dfa, name));
}

void ArtifactWriter::machine(const std::filesystem::path& stem, const Nfa& nfa, const std::string& name) const {
  if (!enabled()) return;
  write_file(root_ / (stem.string() + ".nfa"), to_text(nfa));
  write_file(root_ / (stem.string() + ".dot"), to_dot(nfa, name));
}

void ArtifactWriter::results(const std::filesystem::path& file, std::span<const ResultRow> rows) const {
  if (!enabled()) return;
  std::filesystem::create_directories((root_ / file).parent_path());
  save_results_csv(root_ / file, rows);
}

void ArtifactWriter::config(const ExperimentConfig& config) const {
  if (!enabled()) return;
  std::filesystem::create_directories(root_);
  save_config(root_ / "config.json", config);
}

void ArtifactWriter::text(const std::filesystem::path& file, const std::string& content) const {
  if (!enabled()) return;
  write_file(root_ / file, content);
}

void require_converged(const ExperimentConfig& config, const ModelStore& store) {
  std::vector<std::string> failures;
  for (int language : config.languages) {
    const auto record = store.record(language);
    if (!record.converged()) {
      const auto& best = record.metrics.at(static_cast<std::size_t>(record.best_epoch - 1));
      failures.push_back(fmt::format("tomita {} (best dev prefix accuracy {:.4f} at epoch {})", language,
                                     best.dev_prefix_accuracy, record.best_epoch));
    }
  }
  if (!failures.empty()) {
    std::string message = "recognizers below 100% dev accuracy:";
    for (const auto& f : failures) message += " " + f + ";";
    throw TrainingError(message);
  }
}

Table2Result reproduce_table2(const ExperimentConfig& config, const ModelStore& store, const ArtifactWriter& out) {
  out.config(config);
  const auto& ex = config.extraction;
  Table2Result result;
  for (int language : config.languages) {
    const auto checkpoint = store.load(language, ex.epoch);
    const auto& model = checkpoint.model;
    for (auto seed : config.seeds) {
      const JobSpec job{language, seed, checkpoint.meta.epoch, ex.data_count, ex.string_length};
      const auto eval_set = evaluation_set(ex, language, seed);
      auto merged = run_merge(model, job, ex.kappa, eval_set);
      out.machine(run_stem(job, "merge", ex.kappa), merged.report.minimized,
                  fmt::format("tomita{}_merge_seed{}", language, seed));
      auto km = run_kmeans(model, job, config.baseline, eval_set);
      out.machine(run_stem(job, "kmeans", 0.0), km.extraction.minimized,
                  fmt::format("tomita{}_kmeans_seed{}", language, seed));
      spdlog::info("tomita {} seed {}: merge {} states fidelity {:.4f}; kmeans {} states fidelity {:.4f}", language,
                   seed, merged.row.min_size, merged.row.acc_rnn, km.row.min_size, km.row.acc_rnn);
      result.rows.push_back(merged.row);
      result.rows.push_back(km.row);
    }
  }
  result.summary = summarize_table2(result.rows);
  out.results("results.csv", result.rows);
  if (out.enabled()) {
    std::ofstream os(out.root() / "summary.csv");
    write_table2_csv(os, result.summary);
    out.text("summary.txt", format_table2(result.summary));
  }
  return result;
}

std::vector<ResultRow> sweep_data_size(const ExperimentConfig& config, const ModelStore& store,
                                       const ArtifactWriter& out) {
  out.config(config);
  const auto& ex = config.extraction;
  std::vector<ResultRow> rows;
  for (int language : config.languages) {
    const auto checkpoint = store.load(language, ex.epoch);
    for (auto seed : config.seeds) {
      const auto eval_set = evaluation_set(ex, language, seed);
      for (auto n : ex.data_grid) {
        const JobSpec job{language, seed, checkpoint.meta.epoch, n, ex.sweep_string_length};
        rows.push_back(run_merge(checkpoint.model, job, ex.kappa, eval_set).row);
      }
      spdlog::info("data sweep: tomita {} seed {} done", language, seed);
    }
  }
  out.results("results.csv", rows);
  if (out.enabled()) {
    std::ofstream os(out.root() / "summary.csv");
    write_sweep_csv(os, summarize_sweep(rows));
  }
  return rows;
}

std::vector<ResultRow> sweep_kappa(const ExperimentConfig& config, const ModelStore& store, const ArtifactWriter& out) {
  out.config(config);
  const auto& ex = config.extraction;
  std::vector<ResultRow> rows;
  for (int language : config.languages) {
    const auto checkpoint = store.load(language, ex.epoch);
    for (auto seed : config.seeds) {
      const auto eval_set = evaluation_set(ex, language, seed);
      const JobSpec job{language, seed, checkpoint.meta.epoch, ex.data_count, ex.string_length};
      for (double kappa : ex.kappa_grid) {
        auto run = run_merge(checkpoint.model, job, kappa, eval_set);
        const auto stem = run_stem(job, "merge", kappa);
        const auto tag = fmt::format("tomita{}_kappa{}_seed{}", language, kappa, seed);
        out.machine(stem.string() + "-merged", run.report.merged, tag + "_merged");
        out.machine(stem.string() + "-min", run.report.minimized, tag + "_min");
        spdlog::info("kappa sweep: tomita {} seed {} kappa {}: merged {} minimized {}", language, seed, kappa,
                     run.row.merged_size, run.row.min_size);
        rows.push_back(run.row);
      }
    }
  }
  out.results("results.csv", rows);
  if (out.enabled()) {
    std::ofstream os(out.root() / "summary.csv");
    write_sweep_csv(os, summarize_sweep(rows));
  }
  return rows;
}

std::vector<ResultRow> sweep_epochs(const ExperimentConfig& config, const ModelStore& store,
                                    const ArtifactWriter& out) {
  out.config(config);
  const auto& ex = config.extraction;
  std::vector<ResultRow> rows;
  for (int language : config.languages) {
    for (int epoch : epochs_of(config)) {
      const auto checkpoint = store.load(language, epoch);
      for (auto seed : ex.epoch_seeds) {
        const auto eval_set = evaluation_set(ex, language, seed);
        for (auto n : ex.epoch_data_grid) {
          const JobSpec job{language, seed, epoch, n, ex.epoch_string_length};
          rows.push_back(run_merge(checkpoint.model, job, ex.kappa, eval_set).row);
        }
      }
      spdlog::info("epoch sweep: tomita {} epoch {} done", language, epoch);
    }
  }
  out.results("results.csv", rows);
  if (out.enabled()) {
    std::ofstream os(out.root() / "summary.csv");
    write_sweep_csv(os, summarize_sweep(rows));
  }
  return rows;
}

std::optional<std::size_t> data_to_full_fidelity(std::span<const ResultRow> rows, int language, int epoch,
                                                 std::uint64_t seed) {
  std::optional<std::size_t> best;
  for (const auto& r : rows) {
    if (r.language != language || r.epoch != epoch || r.seed != seed || r.acc_rnn != 1.0) continue;
    if (!best || r.data < *best) best = r.data;
  }
  return best;
}

}  // namespace dfx

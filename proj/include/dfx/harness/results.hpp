#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dfx/automata/dfa.hpp"
#include "dfx/languages/sampling.hpp"
#include "dfx/rnn/model.hpp"

namespace dfx {

struct ResultRow {
  int language = 0;
  std::string method;  // "merge" or "kmeans"
  std::uint64_t seed = 0;
  int epoch = 0;
  std::size_t data = 0;
  double kappa = 0.0;        // 0 for k-means rows
  double acc_rnn = 0.0;      // full-string fidelity to the recognizer
  double acc_gold = 0.0;     // full-string accuracy against the language
  double acc_prefix = 0.0;   // per-prefix fidelity to the recognizer
  std::size_t trie_size = 0;
  std::size_t merged_size = 0;
  std::size_t min_size = 0;
  bool gold_equivalent = false;
  double train_fidelity = 0.0;
  double wall_ms = 0.0;
};

/// Column order of the results CSV.
extern const char* const kResultHeader;

void write_result_header(std::ostream& os);
void write_result_row(std::ostream& os, const ResultRow& row);
void write_results_csv(std::ostream& os, std::span<const ResultRow> rows);
void save_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);
/// Throws FormatError on a malformed table.
std::vector<ResultRow> read_results_csv(std::istream& is);
std::vector<ResultRow> load_results_csv(const std::filesystem::path& path);

struct Fidelity {
  double rnn = 0.0;     // verdict agreement with the recognizer on full strings
  double gold = 0.0;    // verdict agreement with the stored labels
  double prefix = 0.0;  // agreement with the recognizer on every prefix
};

/// Throws InputError on an empty evaluation set or an alphabet mismatch.
Fidelity fidelity(const Dfa& dfa, const RnnModel& model, std::span<const LabeledSample> eval_set);

struct Stats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles use linear interpolation between order statistics
/// (position p * (n - 1)). Throws InputError on an empty sample.
Stats summarize(std::span<const double> values);
double quantile(std::span<const double> sorted, double p);

/// One line of the Table 2 reproduction for a (language, method) pair.
struct Table2Summary {
  int language = 0;
  std::string method;
  std::size_t runs = 0;
  Stats acc_rnn;
  Stats acc_gold;
  std::size_t size_min = 0;
  std::size_t size_mode = 0;       // most frequent minimized size, ties to the smaller
  std::size_t gold_hits = 0;       // runs whose machine is equivalent to the gold DFA
  std::size_t gold_size_hits = 0;  // runs whose minimized size equals the gold size
};

std::vector<Table2Summary> summarize_table2(std::span<const ResultRow> rows);
void write_table2_csv(std::ostream& os, std::span<const Table2Summary> summary);
/// Human-readable rendering, accuracies as percentages.
std::string format_table2(std::span<const Table2Summary> summary);

/// Median and quartiles of fidelity and minimized size per
/// (language, method, epoch, data, kappa) group.
struct SweepSummary {
  int language = 0;
  std::string method;
  int epoch = 0;
  std::size_t data = 0;
  double kappa = 0.0;
  Stats acc_rnn;
  Stats min_size;
  Stats merged_size;
};

std::vector<SweepSummary> summarize_sweep(std::span<const ResultRow> rows);
void write_sweep_csv(std::ostream& os, std::span<const SweepSummary> summary);

}  // namespace dfx

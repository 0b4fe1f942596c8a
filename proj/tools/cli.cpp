#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "dfx/automata/algorithms.hpp"
#include "dfx/automata/io.hpp"
#include "dfx/errors.hpp"
#include "dfx/harness/experiments.hpp"
#include "dfx/kernels/parallel.hpp"
#include "dfx/languages/tomita.hpp"

namespace dfx::cli {

namespace {

struct GlobalOptions {
  std::vector<int> languages;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> model_seed;
  std::string config_file;
  std::string out_dir;
  std::optional<int> threads;
  bool full_scale = false;
  std::string log_level = "info";
  bool no_train = false;
};

struct ExtractionOverrides {
  std::optional<std::size_t> data;
  std::optional<double> kappa;
  std::optional<std::size_t> length;
  std::optional<int> epoch;
  std::optional<int> k;
  std::optional<int> train_epochs;
};

ExperimentConfig resolve(const GlobalOptions& g, const ExtractionOverrides& x, bool seed_is_model_seed) {
  ExperimentConfig config = g.full_scale ? ExperimentConfig::full_scale() : ExperimentConfig{};
  if (!g.config_file.empty()) config = load_config(g.config_file);
  if (!g.languages.empty()) config.languages = g.languages;
  if (g.seed) {
    if (seed_is_model_seed) {
      config.training.model_seed = *g.seed;
    } else {
      config.seeds = {*g.seed};
      config.extraction.epoch_seeds = {*g.seed};
    }
  }
  if (g.model_seed) config.training.model_seed = *g.model_seed;
  if (!g.out_dir.empty()) config.out_dir = g.out_dir;
  if (g.threads) config.threads = *g.threads;
  if (x.train_epochs) config.training.epochs = *x.train_epochs;
  if (x.data) config.extraction.data_count = *x.data;
  if (x.kappa) config.extraction.kappa = *x.kappa;
  if (x.length) config.extraction.string_length = *x.length;
  if (x.epoch) config.extraction.epoch = *x.epoch;
  if (x.k) config.baseline.k = *x.k;
  config.validate();
  return config;
}

ModelStore make_store(const ExperimentConfig& config, bool auto_train) {
  return ModelStore(config.out_dir / "models", config.training, auto_train);
}

void add_extraction_flags(CLI::App* sub, ExtractionOverrides& x, bool with_kappa, bool with_k) {
  sub->add_option("--data", x.data, "Number of strings used to build the prefix tree")->check(CLI::PositiveNumber);
  sub->add_option("--length", x.length, "Length of the extraction strings")->check(CLI::PositiveNumber);
  sub->add_option("--epoch", x.epoch, "Checkpoint epoch to extract from (0: best dev epoch)")->check(CLI::NonNegativeNumber);
  sub->add_option("--epochs", x.train_epochs, "Training epochs of the models to use")->check(CLI::PositiveNumber);
  if (with_kappa) sub->add_option("--kappa", x.kappa, "Merge tolerance: merge when cosine > 1 - kappa");
  if (with_k) sub->add_option("--k", x.k, "Number of k-means clusters")->check(CLI::PositiveNumber);
}

void print_row(std::ostream& out, const ResultRow& r) {
  out << fmt::format("tomita{} {} seed {} epoch {} n={}: fidelity {:.4f}, gold accuracy {:.4f}, merged {} -> minimized {}{}\n",
                     r.language, r.method, r.seed, r.epoch, r.data, r.acc_rnn, r.acc_gold, r.merged_size, r.min_size,
                     r.gold_equivalent ? " (gold)" : "");
}

void append_rows(const std::filesystem::path& path, std::span<const ResultRow> rows) {
  std::filesystem::create_directories(path.parent_path());
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream os(path, std::ios::app);
  if (!os) throw InputError("cannot write " + path.string());
  if (fresh) write_result_header(os);
  for (const auto& r : rows) write_result_row(os, r);
}

int cmd_train(const ExperimentConfig& config, std::ostream& out) {
  const auto store = make_store(config, true);
  for (int language : config.languages) {
    const auto record = store.train(language);
    save_config(store.directory(language) / "config.json", config);
    const auto& best = record.metrics.at(static_cast<std::size_t>(record.best_epoch - 1));
    out << fmt::format("tomita{}: best epoch {} dev prefix accuracy {:.4f}; checkpoints in {}\n", language,
                       record.best_epoch, best.dev_prefix_accuracy, store.directory(language).string());
  }
  return 0;
}

int cmd_extract(const ExperimentConfig& config, bool auto_train, bool kmeans, std::ostream& out) {
  const auto store = make_store(config, auto_train);
  const auto root = config.out_dir / (kmeans ? "baseline" : "extract");
  const ArtifactWriter writer(root);
  writer.config(config);
  const auto& ex = config.extraction;
  std::vector<ResultRow> rows;
  for (int language : config.languages) {
    const auto checkpoint = store.load(language, ex.epoch);
    for (auto seed : config.seeds) {
      const JobSpec job{language, seed, checkpoint.meta.epoch, ex.data_count, ex.string_length};
      const auto eval_set = evaluation_set(ex, language, seed);
      const auto stem = std::filesystem::path(fmt::format("tomita{}", language)) /
                        fmt::format("seed{}-epoch{}-n{}", seed, job.epoch, job.data_count);
      if (kmeans) {
        auto run = run_kmeans(checkpoint.model, job, config.baseline, eval_set);
        writer.machine(stem.string() + "-kmeans-raw", run.extraction.raw, "kmeans_raw");
        writer.machine(stem.string() + "-kmeans", run.extraction.minimized, "kmeans");
        rows.push_back(run.row);
      } else {
        auto run = run_merge(checkpoint.model, job, ex.kappa, eval_set);
        const auto tag = fmt::format("-kappa{}", ex.kappa);
        writer.machine(stem.string() + tag + "-merged", run.report.merged, "merged");
        writer.machine(stem.string() + tag + "-min", run.report.minimized, "minimized");
        rows.push_back(run.row);
      }
      print_row(out, rows.back());
    }
  }
  append_rows(root / "results.csv", rows);
  return 0;
}

int cmd_eval(const ExperimentConfig& config, bool auto_train, const std::string& dfa_path, std::ostream& out) {
  const auto store = make_store(config, auto_train);
  const auto machine = std::get<Dfa>([&]() -> Automaton {
    auto a = load_automaton(dfa_path);
    if (std::holds_alternative<Nfa>(a)) return determinize(std::get<Nfa>(a));
    return a;
  }());
  const auto& ex = config.extraction;
  const ArtifactWriter writer(config.out_dir / "eval");
  writer.config(config);
  for (int language : config.languages) {
    const auto checkpoint = store.load(language, ex.epoch);
    for (auto seed : config.seeds) {
      const auto fid = fidelity(machine, checkpoint.model, evaluation_set(ex, language, seed));
      const bool gold = equivalent(machine, gold_dfa(LanguageId(language)));
      out << fmt::format("tomita{} seed {} epoch {}: fidelity {:.4f}, gold accuracy {:.4f}, prefix fidelity {:.4f}, "
                         "{} states{}\n",
                         language, seed, checkpoint.meta.epoch, fid.rnn, fid.gold, fid.prefix, machine.size(),
                         gold ? " (equivalent to gold)" : "");
    }
  }
  return 0;
}

int cmd_export_dot(const std::string& input, const std::string& output, const std::string& name, std::ostream& out) {
  const auto automaton = load_automaton(input);
  const auto dot = std::visit([&](const auto& a) { return to_dot(a, name); }, automaton);
  if (output.empty()) {
    out << dot;
  } else {
    std::ofstream os(output);
    if (!os) throw InputError("cannot write " + output);
    os << dot;
  }
  return 0;
}

int cmd_table2(const ExperimentConfig& config, bool auto_train, std::ostream& out) {
  const auto store = make_store(config, auto_train);
  const auto result = reproduce_table2(config, store, ArtifactWriter(config.out_dir / "table2"));
  out << format_table2(result.summary);
  return 0;
}

int cmd_sweep(const std::string& kind, const ExperimentConfig& config, bool auto_train, std::ostream& out) {
  const auto store = make_store(config, auto_train);
  const ArtifactWriter writer(config.out_dir / ("sweep-" + kind));
  std::vector<ResultRow> rows;
  if (kind == "data") {
    rows = sweep_data_size(config, store, writer);
  } else if (kind == "kappa") {
    rows = sweep_kappa(config, store, writer);
  } else {
    rows = sweep_epochs(config, store, writer);
  }
  for (const auto& s : summarize_sweep(rows)) {
    out << fmt::format("tomita{} epoch {} n={} kappa {}: median fidelity {:.4f} [{:.4f}, {:.4f}], median size {}\n",
                       s.language, s.epoch, s.data, s.kappa, s.acc_rnn.median, s.acc_rnn.q1, s.acc_rnn.q3,
                       s.min_size.median);
  }
  out << "results in " << writer.root().string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train recurrent recognizers on the Tomita languages and extract finite automata from them", "dfx"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  ExtractionOverrides x;
  app.add_option("--language", g.languages, "Tomita language id(s), 1-7; comma separated")
      ->delimiter(',')
      ->check(CLI::Range(1, 7));
  app.add_option("--seed", g.seed, "Run seed (model seed for `train`)")->envname("DFX_SEED");
  app.add_option("--model-seed", g.model_seed, "Seed of the trained models to use");
  app.add_option("--config", g.config_file, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "Output directory (default: runs)");
  app.add_option("--threads", g.threads, "OpenMP threads for the parallel kernels")
      ->envname("DFX_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_flag("--full-scale", g.full_scale, "Start from the 100,000-string, length-100, 22-epoch training setup");
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
  app.add_flag("--no-train", g.no_train, "Fail instead of training models that are missing");

  auto* train = app.add_subcommand("train", "Train recognizers and write per-epoch checkpoints and metrics");
  train->add_option("--epochs", x.train_epochs, "Training epochs")->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract", "State-merging extraction from a trained recognizer");
  add_extraction_flags(extract, x, true, false);

  auto* baseline = app.add_subcommand("baseline", "k-means extraction baseline");
  add_extraction_flags(baseline, x, false, true);

  std::string dfa_path;
  auto* eval = app.add_subcommand("eval", "Fidelity of an automaton file against a trained recognizer");
  eval->add_option("--dfa", dfa_path, "Automaton file to evaluate")->required()->check(CLI::ExistingFile);
  eval->add_option("--epoch", x.epoch, "Checkpoint epoch (0: best dev epoch)")->check(CLI::NonNegativeNumber);
  eval->add_option("--epochs", x.train_epochs, "Training epochs of the models to use")->check(CLI::PositiveNumber);

  std::string sweep_kind;
  auto* sweep = app.add_subcommand("sweep", "Data-size, kappa or per-epoch extraction sweeps");
  sweep->add_option("kind", sweep_kind, "data, kappa or epochs")
      ->required()
      ->check(CLI::IsMember({"data", "kappa", "epochs"}));
  add_extraction_flags(sweep, x, true, false);

  auto* table2 = app.add_subcommand("table2", "State merging and k-means for every language and seed");
  add_extraction_flags(table2, x, true, true);

  std::string dot_input, dot_output, dot_name = "dfa";
  auto* export_dot = app.add_subcommand("export-dot", "Render an automaton file as Graphviz DOT");
  export_dot->add_option("input", dot_input, "Automaton file")->required()->check(CLI::ExistingFile);
  export_dot->add_option("-o,--output", dot_output, "Write to this file instead of stdout");
  export_dot->add_option("--name", dot_name, "Graph name");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  spdlog::set_level(spdlog::level::from_str(g.log_level));
  try {
    if (export_dot->parsed()) return cmd_export_dot(dot_input, dot_output, dot_name, out);

    const auto config = resolve(g, x, train->parsed());
    if (config.threads > 0) kernels::set_thread_count(config.threads);
    const bool auto_train = !g.no_train;
    if (train->parsed()) return cmd_train(config, out);
    if (extract->parsed()) return cmd_extract(config, auto_train, false, out);
    if (baseline->parsed()) return cmd_extract(config, auto_train, true, out);
    if (eval->parsed()) return cmd_eval(config, auto_train, dfa_path, out);
    if (sweep->parsed()) return cmd_sweep(sweep_kind, config, auto_train, out);
    if (table2->parsed()) return cmd_table2(config, auto_train, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dfx::cli

#include "dfx/harness/results.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "dfx/errors.hpp"
#include "dfx/kernels/parallel.hpp"
#include "dfx/languages/tomita.hpp"

namespace dfx {

const char* const kResultHeader =
    "language,method,seed,epoch,data,kappa,acc_rnn,acc_gold,acc_prefix,trie_size,merged_size,min_size,"
    "gold_equivalent,train_fidelity,wall_ms";

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_number(const std::string& text, int line_no) {
  std::istringstream ss(text);
  T value{};
  ss >> value;
  if (!ss || !ss.eof()) throw FormatError(fmt::format("results line {}: bad number '{}'", line_no, text));
  return value;
}

std::string g17(double x) { return fmt::format("{:.17g}", x); }

}  // namespace

void write_result_header(std::ostream& os) { os << kResultHeader << "\n"; }

void write_result_row(std::ostream& os, const ResultRow& r) {
  os << r.language << ',' << r.method << ',' << r.seed << ',' << r.epoch << ',' << r.data << ',' << g17(r.kappa)
     << ',' << g17(r.acc_rnn) << ',' << g17(r.acc_gold) << ',' << g17(r.acc_prefix) << ',' << r.trie_size << ','
     << r.merged_size << ',' << r.min_size << ',' << (r.gold_equivalent ? 1 : 0) << ',' << g17(r.train_fidelity)
     << ',' << fmt::format("{:.3f}", r.wall_ms) << "\n";
}

void write_results_csv(std::ostream& os, std::span<const ResultRow> rows) {
  write_result_header(os);
  for (const auto& r : rows) write_result_row(os, r);
}

void save_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path.string());
  write_results_csv(os, rows);
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kResultHeader) throw FormatError("results table: unexpected header");
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 15) throw FormatError(fmt::format("results line {}: expected 15 fields", line_no));
    ResultRow r;
    r.language = parse_number<int>(f[0], line_no);
    r.method = f[1];
    r.seed = parse_number<std::uint64_t>(f[2], line_no);
    r.epoch = parse_number<int>(f[3], line_no);
    r.data = parse_number<std::size_t>(f[4], line_no);
    r.kappa = parse_number<double>(f[5], line_no);
    r.acc_rnn = parse_number<double>(f[6], line_no);
    r.acc_gold = parse_number<double>(f[7], line_no);
    r.acc_prefix = parse_number<double>(f[8], line_no);
    r.trie_size = parse_number<std::size_t>(f[9], line_no);
    r.merged_size = parse_number<std::size_t>(f[10], line_no);
    r.min_size = parse_number<std::size_t>(f[11], line_no);
    r.gold_equivalent = parse_number<int>(f[12], line_no) != 0;
    r.train_fidelity = parse_number<double>(f[13], line_no);
    r.wall_ms = parse_number<double>(f[14], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> load_results_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  return read_results_csv(is);
}

Fidelity fidelity(const Dfa& dfa, const RnnModel& model, std::span<const LabeledSample> eval_set) {
  if (eval_set.empty()) throw InputError("fidelity needs a nonempty evaluation set");
  if (!(dfa.alphabet() == model.alphabet())) throw InputError("fidelity: machine and recognizer alphabets differ");
  std::vector<std::string> strings;
  strings.reserve(eval_set.size());
  for (const auto& s : eval_set) strings.push_back(s.x);
  const auto rnn = kernels::decisions_all(model, strings);

  std::size_t agree = 0, gold = 0, prefix_agree = 0, prefixes = 0;
  for (std::size_t i = 0; i < eval_set.size(); ++i) {
    const auto machine = prefix_decisions(dfa, strings[i]);
    agree += machine.back() == rnn[i].back() ? 1 : 0;
    gold += machine.back() == eval_set[i].y.back() ? 1 : 0;
    for (std::size_t j = 0; j < machine.size(); ++j) prefix_agree += machine[j] == rnn[i][j] ? 1 : 0;
    prefixes += machine.size();
  }
  const auto n = static_cast<double>(eval_set.size());
  return {static_cast<double>(agree) / n, static_cast<double>(gold) / n,
          static_cast<double>(prefix_agree) / static_cast<double>(prefixes)};
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

Stats summarize(std::span<const double> values) {
  if (values.empty()) throw InputError("summary of an empty sample");
  Stats s;
  s.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(s.n));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);
  return s;
}

std::vector<Table2Summary> summarize_table2(std::span<const ResultRow> rows) {
  std::map<std::pair<int, std::string>, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{r.language, r.method}].push_back(&r);

  std::vector<Table2Summary> out;
  for (const auto& [key, members] : groups) {
    Table2Summary s;
    s.language = key.first;
    s.method = key.second;
    s.runs = members.size();
    std::vector<double> rnn, gold;
    std::map<std::size_t, std::size_t> sizes;
    s.size_min = members.front()->min_size;
    for (const auto* r : members) {
      rnn.push_back(r->acc_rnn);
      gold.push_back(r->acc_gold);
      ++sizes[r->min_size];
      s.size_min = std::min(s.size_min, r->min_size);
      s.gold_hits += r->gold_equivalent ? 1 : 0;
    }
    if (s.language >= 1 && s.language <= 7) {
      const auto it = sizes.find(gold_dfa(LanguageId(s.language)).size());
      s.gold_size_hits = it == sizes.end() ? 0 : it->second;
    }
    std::size_t best = 0;
    for (const auto& [size, count] : sizes) {
      if (count > best) {
        best = count;
        s.size_mode = size;
      }
    }
    s.acc_rnn = summarize(rnn);
    s.acc_gold = summarize(gold);
    out.push_back(std::move(s));
  }
  return out;
}

void write_table2_csv(std::ostream& os, std::span<const Table2Summary> summary) {
  os << "language,method,runs,acc_rnn_mean,acc_rnn_std,acc_gold_mean,acc_gold_std,size_min,size_mode,gold_hits,"
        "gold_size_hits\n";
  for (const auto& s : summary) {
    os << s.language << ',' << s.method << ',' << s.runs << ',' << g17(s.acc_rnn.mean) << ',' << g17(s.acc_rnn.std)
       << ',' << g17(s.acc_gold.mean) << ',' << g17(s.acc_gold.std) << ',' << s.size_min << ',' << s.size_mode << ','
       << s.gold_hits << ',' << s.gold_size_hits << "\n";
  }
}

std::string format_table2(std::span<const Table2Summary> summary) {
  std::string out = fmt::format("{:<8} {:<8} {:>18} {:>8} {:>8} {:>10}\n", "language", "method", "fidelity (%)",
                                "min |Q|", "mode |Q|", "gold runs");
  for (const auto& s : summary) {
    out += fmt::format("{:<8} {:<8} {:>9.2f} ± {:<6.2f} {:>8} {:>8} {:>6}/{}\n", fmt::format("tomita{}", s.language),
                       s.method, 100.0 * s.acc_rnn.mean, 100.0 * s.acc_rnn.std, s.size_min, s.size_mode,
                       s.gold_hits, s.runs);
  }
  return out;
}

std::vector<SweepSummary> summarize_sweep(std::span<const ResultRow> rows) {
  using Key = std::tuple<int, std::string, int, std::size_t, double>;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const auto& r : rows) groups[{r.language, r.method, r.epoch, r.data, r.kappa}].push_back(&r);

  std::vector<SweepSummary> out;
  for (const auto& [key, members] : groups) {
    SweepSummary s;
    std::tie(s.language, s.method, s.epoch, s.data, s.kappa) = key;
    std::vector<double> acc, size, merged;
    for (const auto* r : members) {
      acc.push_back(r->acc_rnn);
      size.push_back(static_cast<double>(r->min_size));
      merged.push_back(static_cast<double>(r->merged_size));
    }
    s.acc_rnn = summarize(acc);
    s.min_size = summarize(size);
    s.merged_size = summarize(merged);
    out.push_back(std::move(s));
  }
  return out;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepSummary> summary) {
  os << "language,method,epoch,data,kappa,runs,acc_median,acc_q1,acc_q3,acc_mean,size_median,size_q1,size_q3,"
        "merged_median,merged_q1,merged_q3\n";
  for (const auto& s : summary) {
    os << s.language << ',' << s.method << ',' << s.epoch << ',' << s.data << ',' << g17(s.kappa) << ','
       << s.acc_rnn.n << ',' << g17(s.acc_rnn.median) << ',' << g17(s.acc_rnn.q1) << ',' << g17(s.acc_rnn.q3) << ','
       << g17(s.acc_rnn.mean) << ',' << g17(s.min_size.median) << ',' << g17(s.min_size.q1) << ','
       << g17(s.min_size.q3) << ',' << g17(s.merged_size.median) << ',' << g17(s.merged_size.q1) << ','
       << g17(s.merged_size.q3) << "\n";
  }
}

}  // namespace dfx

#include "dfx/rnn/checkpoint_io.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "dfx/errors.hpp"

namespace dfx {

namespace {

constexpr std::array<const char*, RnnParams::kTensorCount> kTensorNames = {"embedding", "recurrent", "input", "head",
                                                                           "head_bias"};

double parse_double(const std::string& token) {
  char* end = nullptr;
  double value = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') throw FormatError("checkpoint: bad number '" + token + "'");
  return value;
}

std::string next_word(std::istream& is, const char* what) {
  std::string word;
  if (!(is >> word)) throw FormatError(std::string("checkpoint: unexpected end of input reading ") + what);
  return word;
}

}  // namespace

void write_checkpoint(std::ostream& os, const Checkpoint& checkpoint) {
  const auto& meta = checkpoint.meta;
  os << "dfx-checkpoint 1\n";
  os << std::setprecision(17);
  os << "meta language " << meta.language << "\n";
  os << "meta epoch " << meta.epoch << "\n";
  os << "meta seed " << meta.seed << "\n";
  os << "meta dev_accuracy " << meta.dev_accuracy << "\n";
  os << "meta param_norm " << meta.param_norm << "\n";
  os << "alphabet " << checkpoint.model.alphabet().symbols() << "\n";
  auto tensors = checkpoint.model.params().tensors();
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const auto& m = *tensors[i];
    os << "matrix " << kTensorNames[i] << ' ' << m.rows() << ' ' << m.cols() << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
      os << "\n";
    }
  }
  os << "end\n";
}

Checkpoint read_checkpoint(std::istream& is) {
  if (next_word(is, "header") != "dfx-checkpoint") throw FormatError("checkpoint: missing header");
  if (next_word(is, "version") != "1") throw FormatError("checkpoint: unsupported version");
  CheckpointMeta meta;
  std::string alphabet;
  RnnParams params;
  auto tensors = params.tensors();
  std::size_t loaded = 0;
  for (;;) {
    std::string key = next_word(is, "section");
    if (key == "end") break;
    if (key == "meta") {
      std::string name = next_word(is, "meta key");
      std::string value = next_word(is, "meta value");
      if (name == "language") meta.language = std::stoi(value);
      else if (name == "epoch") meta.epoch = std::stoi(value);
      else if (name == "seed") meta.seed = std::stoull(value);
      else if (name == "dev_accuracy") meta.dev_accuracy = parse_double(value);
      else if (name == "param_norm") meta.param_norm = parse_double(value);
      else throw FormatError("checkpoint: unknown meta key '" + name + "'");
    } else if (key == "alphabet") {
      alphabet = next_word(is, "alphabet");
    } else if (key == "matrix") {
      std::string name = next_word(is, "matrix name");
      if (loaded >= tensors.size() || name != kTensorNames[loaded]) {
        throw FormatError("checkpoint: unexpected matrix '" + name + "'");
      }
      long rows = std::stol(next_word(is, "rows"));
      long cols = std::stol(next_word(is, "cols"));
      if (rows < 1 || cols < 1) throw FormatError("checkpoint: bad matrix shape");
      auto& m = *tensors[loaded++];
      m.resize(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_double(next_word(is, "matrix entry"));
      }
    } else {
      throw FormatError("checkpoint: unknown section '" + key + "'");
    }
  }
  if (loaded != tensors.size()) throw FormatError("checkpoint: missing parameter matrices");
  try {
    return {RnnModel(Alphabet(alphabet), std::move(params)), meta};
  } catch (const InputError& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_checkpoint(os, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_checkpoint(is);
}

void write_metrics_csv(std::ostream& os, std::span<const EpochMetrics> metrics) {
  os << "epoch,train_loss,dev_prefix_accuracy,dev_string_accuracy,param_norm\n";
  os << std::setprecision(10);
  for (const auto& m : metrics) {
    os << m.epoch << ',' << m.train_loss << ',' << m.dev_prefix_accuracy << ',' << m.dev_string_accuracy << ','
       << m.param_norm << "\n";
  }
}

}  // namespace dfx

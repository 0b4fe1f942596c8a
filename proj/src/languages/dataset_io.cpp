#include "dfx/languages/dataset_io.hpp"

#include <fstream>
#include <sstream>

#include "dfx/errors.hpp"

namespace dfx {

std::string bits_to_string(const std::vector<bool>& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

void write_dataset(std::ostream& os, const Dataset& dataset) {
  os << "# dfx-dataset 1\n";
  for (const auto& [key, value] : dataset.header) os << "# " << key << ' ' << value << "\n";
  for (const auto& s : dataset.samples) os << s.x << '\t' << bits_to_string(s.y) << "\n";
}

Dataset read_dataset(std::istream& is) {
  Dataset dataset;
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key, value;
      ss >> key;
      std::getline(ss >> std::ws, value);
      if (key == "dfx-dataset") {
        if (value != "1") throw FormatError("unsupported dataset version " + value);
        saw_magic = true;
      } else if (!key.empty()) {
        dataset.header[key] = value;
      }
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError("dataset line " + std::to_string(line_no) + ": missing tab");
    LabeledSample sample{line.substr(0, tab), {}};
    std::string bits = line.substr(tab + 1);
    if (bits.size() != sample.x.size() + 1) {
      throw FormatError("dataset line " + std::to_string(line_no) + ": expected " +
                        std::to_string(sample.x.size() + 1) + " labels");
    }
    for (char c : bits) {
      if (c != '0' && c != '1') throw FormatError("dataset line " + std::to_string(line_no) + ": bad label bit");
      sample.y.push_back(c == '1');
    }
    dataset.samples.push_back(std::move(sample));
  }
  if (!saw_magic) throw FormatError("missing '# dfx-dataset 1' header");
  return dataset;
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_dataset(os, dataset);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_dataset(is);
}

}  // namespace dfx

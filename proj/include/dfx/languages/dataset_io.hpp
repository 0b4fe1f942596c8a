#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "dfx/languages/sampling.hpp"

namespace dfx {

// Dataset text format, version 1:
//
//   # dfx-dataset 1
//   # language 2
//   # seed 0
//   # length 10
//   ab<TAB>101
//
// Header lines are "# key value". Each record is the string, a tab, and
// the prefix labels as a bitstring of length |x| + 1. The empty string is
// written as an empty field before the tab.

struct Dataset {
  std::map<std::string, std::string> header;
  std::vector<LabeledSample> samples;
};

void write_dataset(std::ostream& os, const Dataset& dataset);
Dataset read_dataset(std::istream& is);

void save_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);

std::string bits_to_string(const std::vector<bool>& bits);

}  // namespace dfx

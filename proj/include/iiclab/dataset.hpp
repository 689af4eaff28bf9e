#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iiclab/linalg.hpp"

namespace iiclab {

struct Dataset {
  std::string name;
  Matrix X0;
  Vector y;
  std::vector<std::string> columns;  // feature column names, in X0 order
  std::string target;
};

/// Header plus raw string cells. Handles double-quoted fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header name, or -1.
  int column(const std::string& name) const;
};

CsvTable read_csv_table(const std::string& path);

/// Strict numeric parse of the whole token (surrounding blanks ignored);
/// false on empty input or trailing garbage.
bool parse_double(const std::string& token, double& out);

/// All non-target columns become features. An empty target selects the
/// last column. Any unparsable cell raises ParseError naming every bad cell.
Dataset ingest_csv(const std::string& path, const std::string& target = "");

/// Uniform random permutation (Fisher-Yates over CounterRng(seed)); the
/// first n_train permuted rows form the training set.
std::pair<Dataset, Dataset> split(const Dataset& data, Eigen::Index n_train, std::uint64_t seed);

/// x ~ U(-1, 1), y = sin(3x) + noise * N(0, 1).
Dataset synthetic_sine(Eigen::Index n_total, std::uint64_t seed, double noise = 0.1);

}  // namespace iiclab

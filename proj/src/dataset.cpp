#include "iiclab/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "iiclab/errors.hpp"
#include "iiclab/rng.hpp"

namespace iiclab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

Dataset take_rows(const Dataset& src, const std::vector<Index>& rows, const std::string& suffix) {
  Dataset out;
  out.name = src.name + suffix;
  out.columns = src.columns;
  out.target = src.target;
  out.X0.resize(static_cast<Index>(rows.size()), src.X0.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X0.row(static_cast<Index>(i)) = src.X0.row(rows[i]);
    out.y(static_cast<Index>(i)) = src.y(rows[i]);
  }
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

bool parse_double(const std::string& token, double& out) {
  const char* first = token.data();
  const char* last = first + token.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first == last) return false;
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::FileNotFound, "cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::ParseError, path + ": missing header row");
  t.header = split_line(line);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    t.rows.push_back(split_line(line));
  }
  return t;
}

Dataset ingest_csv(const std::string& path, const std::string& target) {
  const CsvTable t = read_csv_table(path);
  const int tcol = target.empty() ? static_cast<int>(t.header.size()) - 1 : t.column(target);
  if (tcol < 0) fail(ErrorKind::TargetMissing, "target column '" + target + "' not in header of " + path);

  const Index ncols = static_cast<Index>(t.header.size());
  const Index nrows = static_cast<Index>(t.rows.size());
  Dataset ds;
  ds.name = path;
  ds.target = t.header[static_cast<std::size_t>(tcol)];
  for (Index c = 0; c < ncols; ++c) {
    if (c != tcol) ds.columns.push_back(t.header[static_cast<std::size_t>(c)]);
  }
  ds.X0.resize(nrows, ncols - 1);
  ds.y.resize(nrows);

  std::ostringstream report;
  int bad = 0;
  for (Index r = 0; r < nrows; ++r) {
    const auto& row = t.rows[static_cast<std::size_t>(r)];
    // Data rows are 1-based after the header line.
    if (static_cast<Index>(row.size()) != ncols) {
      report << (bad++ ? "; " : "") << "row " << r + 1 << ": expected " << ncols << " cells, got "
             << row.size();
      continue;
    }
    Index out_c = 0;
    for (Index c = 0; c < ncols; ++c) {
      const std::string& tok = row[static_cast<std::size_t>(c)];
      double v = 0.0;
      if (!parse_double(tok, v) || !std::isfinite(v)) {
        report << (bad++ ? "; " : "") << "row " << r + 1 << ", column '"
               << t.header[static_cast<std::size_t>(c)] << "': '" << tok << "'";
        v = 0.0;
      }
      if (c == tcol) {
        ds.y(r) = v;
      } else {
        ds.X0(r, out_c++) = v;
      }
    }
  }
  if (bad) fail(ErrorKind::ParseError, path + ": " + report.str());
  if (nrows < 3) fail(ErrorKind::TooFew, path + ": need at least 3 data rows");
  return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& data, Index n_train, std::uint64_t seed) {
  const Index n = data.X0.rows();
  if (n_train < 1 || n_train >= n) {
    fail(ErrorKind::BadSize, "n_train must satisfy 1 <= n_train < " + std::to_string(n));
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  CounterRng rng(seed, 0x73706c6974ull);
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  const std::vector<Index> tr(perm.begin(), perm.begin() + n_train);
  const std::vector<Index> te(perm.begin() + n_train, perm.end());
  return {take_rows(data, tr, ":train"), take_rows(data, te, ":test")};
}

Dataset synthetic_sine(Index n_total, std::uint64_t seed, double noise) {
  if (n_total < 3) fail(ErrorKind::TooFew, "synthetic dataset needs at least 3 rows");
  Dataset ds;
  ds.name = "synthetic_sine";
  ds.columns = {"x"};
  ds.target = "y";
  ds.X0.resize(n_total, 1);
  ds.y.resize(n_total);
  CounterRng rng(seed, 0x73696e65ull);
  for (Index i = 0; i < n_total; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    ds.X0(i, 0) = x;
    ds.y(i) = std::sin(3.0 * x) + noise * rng.normal();
  }
  return ds;
}

}  // namespace iiclab

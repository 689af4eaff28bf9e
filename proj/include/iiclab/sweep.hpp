#pragma once
// Dimension sweeps: for every (d, p) cell, lift the training rows with a
// feature map, solve the minimum-norm interpolator, evaluate the criterion
// and the train/test error. A failing cell is a record, not an exception.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iiclab/dataset.hpp"
#include "iiclab/features.hpp"
#include "iiclab/iic.hpp"

namespace iiclab {

struct SweepConfig {
  // data
  std::string dataset = "synthetic";  // "synthetic" or "csv"
  std::string csv_path;
  std::string target;
  Index synthetic_n_total = 120;
  double synthetic_noise = 0.1;
  Index n_train = 20;
  // features
  FeatureKind feature = FeatureKind::Rff;
  double rff_sigma = 0.0;  // <= 0: median heuristic on the training rows
  int poly_degree = 1;
  int poly_degree_cap = kDefaultPolyDegreeCap;
  // grid
  std::vector<Index> d_grid;
  std::vector<double> p_list;
  std::uint64_t master_seed = 0;
  // p = 1 volume strategy
  Index mc_dim_limit = kDefaultMcDimLimit;
  std::int64_t mc_samples = 200000;
  /// 0: IIC_LAB_THREADS, else hardware concurrency.
  int threads = 0;
};

/// Flat `key = value` document; values are numbers, "strings" or
/// [comma, separated] lists. `#` starts a comment. Unknown keys and bad
/// values raise ConfigInvalid.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::string& path);

/// Throws ConfigInvalid describing the first violated constraint.
void validate_sweep_config(const SweepConfig& cfg);

struct ExperimentRecord {
  Index d = 0;
  double p = 2.0;
  std::optional<IICBreakdown> iic;
  std::optional<double> train_mse;
  std::optional<double> test_mse;
  std::optional<Index> support_size;
  std::optional<double> certificate_margin;  // p = 1
  bool ok = false;
  std::string failure_reason;
  double wall_time = 0.0;  // seconds; not part of the emitted tables
};

/// Seed of one cell; independent of the rest of the grid.
std::uint64_t cell_seed(std::uint64_t master, Index d, double p);

/// Loads (or synthesizes) the dataset named by the config.
Dataset load_sweep_dataset(const SweepConfig& cfg);

/// Runs every (d, p) cell of the config on a split of `data`; records are
/// ordered by (d, p) whatever the thread count.
std::vector<ExperimentRecord> run_sweep(const Dataset& data, const SweepConfig& cfg);

/// Worker count from the config, then IIC_LAB_THREADS, then the machine.
int resolve_threads(int requested);

}  // namespace iiclab

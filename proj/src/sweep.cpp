#include "iiclab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "iiclab/errors.hpp"
#include "iiclab/interpolate.hpp"
#include "iiclab/rng.hpp"
#include "iiclab/stats.hpp"

namespace iiclab {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_config(int line, const std::string& msg) {
  fail(ErrorKind::ConfigInvalid, "line " + std::to_string(line) + ": " + msg);
}

double number(const std::string& tok, int line, const std::string& key) {
  double v = 0.0;
  if (!parse_double(trim(tok), v)) bad_config(line, key + ": expected a number, got '" + tok + "'");
  return v;
}

Index integer(const std::string& tok, int line, const std::string& key) {
  const double v = number(tok, line, key);
  if (v != std::floor(v) || std::fabs(v) > 9e15) bad_config(line, key + ": expected an integer");
  return static_cast<Index>(v);
}

std::string string_value(const std::string& tok, int line, const std::string& key) {
  const std::string t = trim(tok);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  bad_config(line, key + ": expected a quoted string");
}

std::vector<std::string> list_items(const std::string& tok, int line, const std::string& key) {
  const std::string t = trim(tok);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') bad_config(line, key + ": expected [a, b, ...]");
  std::vector<std::string> items;
  std::stringstream ss(t.substr(1, t.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) items.push_back(trim(item));
  }
  return items;
}

ExperimentRecord run_cell(const Dataset& train, const Dataset& test, const SweepConfig& cfg,
                          Index d, double p) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.d = d;
  rec.p = p;
  try {
    Matrix Ztr, Zte;
    if (cfg.feature == FeatureKind::Rff) {
      const RffMap map(train.X0, RFFConfig{d, cfg.rff_sigma, cfg.master_seed});
      Ztr = map.transform(train.X0).Z;
      Zte = map.transform(test.X0).Z;
    } else {
      const PolyMap map(train.X0, cfg.poly_degree, d, cfg.poly_degree_cap);
      Ztr = map.transform(train.X0).Z;
      Zte = map.transform(test.X0).Z;
    }
    const DesignMatrix D = validate_design(Ztr);
    const Vector& Y = train.y;
    SolverOptions opts;
    opts.seed = cell_seed(cfg.master_seed, d, p);

    Interpolator interp;
    if (p == 1.0) {
      interp = min_norm_l1(D, Y, opts);
      const SupportSigns ss{interp.support, interp.signs};
      V0Result v0;
      if (static_cast<Index>(ss.support.size()) == D.n()) {
        v0 = v0_closed(D, ss);
      } else if (D.kernel_dim() <= cfg.mc_dim_limit) {
        v0 = v0_monte_carlo(D, ss, cfg.mc_samples, opts.seed, cfg.mc_dim_limit);
      } else {
        fail(ErrorKind::SupportNotFull, "|S| = " + std::to_string(ss.support.size()) + " < n and d - n = " +
                                            std::to_string(D.kernel_dim()) + " exceeds the Monte Carlo limit");
      }
      rec.iic = iic_sparse(D, interp, v0);
      if (interp.certificate) rec.certificate_margin = interp.certificate->margin;
    } else if (p == 2.0) {
      interp = min_norm_l2(D, Y);
      rec.iic = iic_ridge(D, interp);
    } else {
      k1(p, D.d(), D.n());  // dimension bound before the solve
      interp = min_norm_lp(D, Y, p, opts);
      rec.iic = iic_smooth(D, interp, p);
    }
    rec.support_size = static_cast<Index>(detect_support(interp.theta).support.size());
    const Vector pred_tr = Ztr * interp.theta;
    const Vector pred_te = Zte * interp.theta;
    rec.train_mse = mse({pred_tr.data(), static_cast<std::size_t>(pred_tr.size())},
                        {Y.data(), static_cast<std::size_t>(Y.size())});
    if (test.y.size() > 0) {
      rec.test_mse = mse({pred_te.data(), static_cast<std::size_t>(pred_te.size())},
                         {test.y.data(), static_cast<std::size_t>(test.y.size())});
    }
    const double var = (Y.array() - Y.mean()).square().mean();
    if (!(*rec.train_mse <= 1e-10 * var)) {
      rec.failure_reason = "InterpolationGate: train_mse above 1e-10 * var(y_train)";
    } else {
      rec.ok = true;
    }
  } catch (const Error& e) {
    rec.failure_reason = e.what();
  } catch (const std::exception& e) {
    rec.failure_reason = std::string("Internal: ") + e.what();
  }
  if (!rec.ok) rec.iic.reset();
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') quoted = !quoted;
      if (s[i] == '#' && !quoted) {
        s.resize(i);
        break;
      }
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[' && s.find('=') == std::string::npos) continue;  // [section] headers are ignored
    const auto eq = s.find('=');
    if (eq == std::string::npos) bad_config(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));

    if (key == "dataset") {
      cfg.dataset = string_value(val, line, key);
    } else if (key == "csv_path") {
      cfg.csv_path = string_value(val, line, key);
    } else if (key == "target") {
      cfg.target = string_value(val, line, key);
    } else if (key == "synthetic_n_total") {
      cfg.synthetic_n_total = integer(val, line, key);
    } else if (key == "synthetic_noise") {
      cfg.synthetic_noise = number(val, line, key);
    } else if (key == "n_train") {
      cfg.n_train = integer(val, line, key);
    } else if (key == "feature") {
      const std::string f = string_value(val, line, key);
      if (f == "rff") {
        cfg.feature = FeatureKind::Rff;
      } else if (f == "poly" || f == "polynomial") {
        cfg.feature = FeatureKind::Polynomial;
      } else {
        bad_config(line, "feature must be \"rff\" or \"poly\"");
      }
    } else if (key == "rff_sigma") {
      cfg.rff_sigma = number(val, line, key);
    } else if (key == "poly_degree") {
      cfg.poly_degree = static_cast<int>(integer(val, line, key));
    } else if (key == "poly_degree_cap") {
      cfg.poly_degree_cap = static_cast<int>(integer(val, line, key));
    } else if (key == "d_grid") {
      cfg.d_grid.clear();
      for (const auto& item : list_items(val, line, key)) cfg.d_grid.push_back(integer(item, line, key));
    } else if (key == "p_list") {
      cfg.p_list.clear();
      for (const auto& item : list_items(val, line, key)) cfg.p_list.push_back(number(item, line, key));
    } else if (key == "master_seed") {
      const Index v = integer(val, line, key);
      if (v < 0) bad_config(line, "master_seed must be nonnegative");
      cfg.master_seed = static_cast<std::uint64_t>(v);
    } else if (key == "mc_dim_limit") {
      cfg.mc_dim_limit = integer(val, line, key);
    } else if (key == "mc_samples") {
      cfg.mc_samples = integer(val, line, key);
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(integer(val, line, key));
    } else {
      bad_config(line, "unknown key '" + key + "'");
    }
  }
  validate_sweep_config(cfg);
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::FileNotFound, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str());
}

void validate_sweep_config(const SweepConfig& cfg) {
  const auto bad = [](const std::string& m) { fail(ErrorKind::ConfigInvalid, m); };
  if (cfg.dataset != "synthetic" && cfg.dataset != "csv") bad("dataset must be \"synthetic\" or \"csv\"");
  if (cfg.dataset == "csv" && cfg.csv_path.empty()) bad("csv dataset needs csv_path");
  if (cfg.n_train < 1) bad("n_train must be positive");
  if (cfg.dataset == "synthetic" && cfg.synthetic_n_total <= cfg.n_train) {
    bad("synthetic_n_total must exceed n_train");
  }
  if (cfg.d_grid.empty()) bad("d_grid is empty");
  for (std::size_t i = 0; i < cfg.d_grid.size(); ++i) {
    if (cfg.d_grid[i] <= cfg.n_train) bad("every d must exceed n_train");
    if (i > 0 && cfg.d_grid[i] <= cfg.d_grid[i - 1]) bad("d_grid must be strictly increasing");
  }
  if (cfg.p_list.empty()) bad("p_list is empty");
  for (double p : cfg.p_list) {
    if (!(p == 1.0 || p >= 2.0) || !std::isfinite(p)) bad("each p must be 1 or >= 2");
  }
  if (cfg.poly_degree < 1) bad("poly_degree must be positive");
  if (cfg.mc_dim_limit < 1) bad("mc_dim_limit must be positive");
  if (cfg.mc_samples < 100) bad("mc_samples must be at least 100");
  if (cfg.threads < 0) bad("threads must be nonnegative");
}

std::uint64_t cell_seed(std::uint64_t master, Index d, double p) {
  std::uint64_t pbits = 0;
  static_assert(sizeof pbits == sizeof p);
  std::memcpy(&pbits, &p, sizeof p);
  return combine_seed(combine_seed(master, static_cast<std::uint64_t>(d)), pbits);
}

Dataset load_sweep_dataset(const SweepConfig& cfg) {
  if (cfg.dataset == "csv") return ingest_csv(cfg.csv_path, cfg.target);
  return synthetic_sine(cfg.synthetic_n_total, combine_seed(cfg.master_seed, 0x64617461ull),
                        cfg.synthetic_noise);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IIC_LAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<ExperimentRecord> run_sweep(const Dataset& data, const SweepConfig& cfg) {
  validate_sweep_config(cfg);
  const auto [train, test] = split(data, cfg.n_train, combine_seed(cfg.master_seed, 0x73706c74ull));

  struct Cell {
    Index d;
    double p;
  };
  std::vector<Cell> cells;
  for (Index d : cfg.d_grid) {
    for (double p : cfg.p_list) cells.push_back({d, p});
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    return a.d != b.d ? a.d < b.d : a.p < b.p;
  });

  std::vector<ExperimentRecord> out(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      out[i] = run_cell(train, test, cfg, cells[i].d, cells[i].p);
    }
  };
  const int nthreads = std::min<int>(resolve_threads(cfg.threads), static_cast<int>(cells.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace iiclab

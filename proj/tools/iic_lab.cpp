// iic_lab: command-line front end. Every subcommand prints JSON (or writes
// CSV) and exits 0 on success, 2 on usage errors, 3 on data errors and 4 on
// numerical failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "iiclab/dataset.hpp"
#include "iiclab/emit.hpp"
#include "iiclab/errors.hpp"
#include "iiclab/iic.hpp"
#include "iiclab/interpolate.hpp"
#include "iiclab/oracle.hpp"
#include "iiclab/simd/kernels.hpp"
#include "iiclab/stats.hpp"
#include "iiclab/sweep.hpp"

using json = nlohmann::json;
using namespace iiclab;

namespace {

struct DataArgs {
  std::string csv;
  std::string target;
  std::string X;  // inline "a,b;c,d"
  std::string Y;  // inline "y1,y2"
  Index n_train = 0;
  std::uint64_t seed = 0;
};

void add_data_options(CLI::App* cmd, DataArgs& a, bool inline_ok) {
  cmd->add_option("--csv", a.csv, "CSV file with a header row");
  cmd->add_option("--target", a.target, "target column (default: last)");
  cmd->add_option("--n-train", a.n_train, "use a seeded random subset of this many rows");
  cmd->add_option("--seed", a.seed, "seed for the row subset and randomized solvers");
  if (inline_ok) {
    cmd->add_option("--X", a.X, "inline design, rows separated by ';'");
    cmd->add_option("--Y", a.Y, "inline targets, comma separated");
  }
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    double v = 0.0;
    if (b == std::string::npos || !parse_double(tok.substr(b, e - b + 1), v)) {
      fail(ErrorKind::Usage, std::string("cannot parse ") + what + " entry '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::pair<Matrix, Vector> load_data(const DataArgs& a) {
  if (!a.X.empty() || !a.Y.empty()) {
    if (a.X.empty() || a.Y.empty()) fail(ErrorKind::Usage, "--X and --Y go together");
    std::vector<std::vector<double>> rows;
    std::stringstream ss(a.X);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_list(row, "--X"));
    const std::vector<double> y = parse_list(a.Y, "--Y");
    if (rows.empty() || rows.size() != y.size()) fail(ErrorKind::Usage, "--X rows must match --Y length");
    Matrix X(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows[0].size()) fail(ErrorKind::Usage, "ragged --X");
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        X(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
      }
    }
    return {X, Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size()))};
  }
  if (a.csv.empty()) fail(ErrorKind::Usage, "give --csv or --X/--Y");
  Dataset ds = ingest_csv(a.csv, a.target);
  if (a.n_train > 0) ds = split(ds, a.n_train, a.seed).first;
  return {ds.X0, ds.y};
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json breakdown_json(const IICBreakdown& b) {
  json j = {{"p", b.p},
            {"total", b.total},
            {"reg_term", b.reg_term},
            {"sharpness_term", b.sharpness_term},
            {"ambient_constant", b.ambient_constant},
            {"tau_star", b.tau_star},
            {"log_det_gram", b.log_det_gram}};
  j["sum_log_abs_theta"] = b.sum_log_abs_theta ? json(*b.sum_log_abs_theta) : json(nullptr);
  j["log_v0"] = b.log_v0 ? json(*b.log_v0) : json(nullptr);
  j["v0_method"] = b.v0_method ? json(std::string(to_string(*b.v0_method))) : json(nullptr);
  return j;
}

json estimate_json(const DualPriorEstimate& e) {
  return {{"log_value", e.log_value},
          {"method", std::string(to_string(e.method))},
          {"abs_error_estimate", e.abs_error_estimate},
          {"tau", e.tau}};
}

V0Result choose_v0(const DesignMatrix& D, const Interpolator& it, const std::string& mode,
                   std::int64_t samples, std::uint64_t seed) {
  const SupportSigns ss{it.support, it.signs};
  const bool full = static_cast<Index>(ss.support.size()) == D.n();
  if (mode == "closed") {
    if (!full) fail(ErrorKind::SupportNotFull, "closed-form V0 needs |S| = n");
    return v0_closed(D, ss);
  }
  if (mode == "mc") return v0_monte_carlo(D, ss, samples, seed);
  if (full) return v0_closed(D, ss);
  if (D.kernel_dim() > kDefaultMcDimLimit) {
    fail(ErrorKind::SupportNotFull, "|S| < n and d - n exceeds the Monte Carlo limit");
  }
  return v0_monte_carlo(D, ss, samples, seed);
}

int run(int argc, char** argv) {
  CLI::App app{"Minimum-norm interpolators and the interpolating information criterion"};
  app.require_subcommand(1);

  DataArgs data;
  double p = 2.0;

  auto* solve = app.add_subcommand("solve", "minimum l_p-norm interpolator (JSON)");
  add_data_options(solve, data, true);
  solve->add_option("--p", p, "norm exponent: 1 or >= 2")->required();

  std::string v0_mode = "auto";
  std::int64_t mc_samples = 1'000'000;
  auto* iic = app.add_subcommand("iic", "criterion breakdown (JSON)");
  add_data_options(iic, data, true);
  iic->add_option("--p", p, "norm exponent: 1 or >= 2")->required();
  iic->add_option("--v0", v0_mode, "V0 strategy for p = 1")->check(CLI::IsMember({"closed", "mc", "auto"}));
  iic->add_option("--mc-samples", mc_samples, "Monte Carlo samples for V0");

  std::string mode;
  double tau = 0.0;
  std::string method = "quadrature";
  NumericBudget budget;
  double tau_lo = 1e-6, tau_hi = 1e6;
  int tau_points = 121;
  bool printed_curvature = false;
  auto* oracle = app.add_subcommand("oracle", "dual prior estimates and the tau* check (JSON)");
  add_data_options(oracle, data, true);
  oracle->add_option("--mode", mode, "estimator")
      ->required()
      ->check(CLI::IsMember({"numeric", "ridge", "smooth", "sparse", "residue", "tau-min"}));
  oracle->add_option("--p", p, "norm exponent");
  oracle->add_option("--tau", tau, "prior scale");
  oracle->add_option("--method", method, "numeric method")->check(CLI::IsMember({"quadrature", "mc"}));
  oracle->add_option("--budget", budget.max_intervals, "outer quadrature subintervals");
  oracle->add_option("--rel-tol", budget.rel_tol, "requested relative accuracy");
  oracle->add_option("--mc-samples", budget.mc_samples, "importance samples");
  oracle->add_option("--tau-lo", tau_lo, "tau-min grid start");
  oracle->add_option("--tau-hi", tau_hi, "tau-min grid end");
  oracle->add_option("--tau-points", tau_points, "tau-min grid size");
  oracle->add_flag("--printed-curvature", printed_curvature,
                   "smooth mode: product-of-coordinates curvature factor");

  std::string config, out_path, format = "csv";
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "dimension sweep to CSV");
  sweep->add_option("--config", config, "flat key = value config")->required();
  sweep->add_option("--out", out_path, "output path")->required();
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--threads", threads, "worker threads (overrides IIC_LAB_THREADS)");

  std::string in_path, xcol, ycol;
  int resamples = 1000;
  std::optional<double> p_filter;
  auto* corr = app.add_subcommand("corr", "Spearman correlation with bootstrap CI (JSON)");
  corr->add_option("--in", in_path, "CSV input")->required();
  corr->add_option("--x", xcol, "first column")->required();
  corr->add_option("--y", ycol, "second column")->required();
  corr->add_option("--resamples", resamples, "bootstrap resamples");
  corr->add_option("--seed", data.seed, "bootstrap seed");
  corr->add_option("--p", p_filter, "keep rows whose p column equals this");

  auto* info = app.add_subcommand("info", "build and kernel information (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  SolverOptions opts;
  opts.seed = data.seed;

  if (*solve) {
    const auto [X, Y] = load_data(data);
    const DesignMatrix D = validate_design(X);
    const Interpolator it = min_norm_interpolator(D, Y, p, opts);
    json j = {{"p", it.p},
              {"n", D.n()},
              {"d", D.d()},
              {"theta", vec_json(it.theta)},
              {"norm_p_to_p", it.norm_p_to_p()},
              {"support", it.support},
              {"signs", it.signs},
              {"residual", it.residual},
              {"stationarity", it.stationarity},
              {"iterations", it.iterations}};
    if (it.certificate) {
      j["certificate"] = {{"unique", it.certificate->unique},
                          {"margin", it.certificate->margin},
                          {"max_abs_offsupport", it.certificate->max_abs_offsupport},
                          {"mu", vec_json(it.certificate->mu)}};
    }
    std::cout << j.dump(2) << "\n";
  } else if (*iic) {
    const auto [X, Y] = load_data(data);
    const DesignMatrix D = validate_design(X);
    IICBreakdown b;
    if (p == 1.0) {
      const Interpolator it = min_norm_l1(D, Y, opts);
      b = iic_sparse(D, it, choose_v0(D, it, v0_mode, mc_samples, data.seed));
    } else if (p == 2.0) {
      b = iic_ridge(D, min_norm_l2(D, Y));
    } else if (p > 2.0) {
      k1(p, D.d(), D.n());
      b = iic_smooth(D, min_norm_lp(D, Y, p, opts), p);
    } else {
      fail(ErrorKind::Usage, "p must be 1 or >= 2");
    }
    std::cout << breakdown_json(b).dump(2) << "\n";
  } else if (*oracle) {
    const auto [X, Y] = load_data(data);
    if (mode == "tau-min") {
      const DesignMatrix D = validate_design(X);
      const std::vector<double> grid = log_grid(tau_lo, tau_hi, tau_points);
      const TauMinReport r = free_energy_numeric_min(D, Y, p, grid);
      std::cout << json{{"p", r.p},
                        {"tau_min", r.tau_min},
                        {"tau_star", r.tau_star},
                        {"value", r.value},
                        {"agrees", r.agrees}}
                       .dump(2)
                << "\n";
      return r.agrees ? 0 : 4;
    }
    if (!(tau > 0.0)) fail(ErrorKind::Usage, "--tau must be positive");
    DualPriorEstimate e;
    if (mode == "residue") {
      if (X.rows() != 1) fail(ErrorKind::Usage, "residue mode needs a single row");
      e = dual_prior_residue_n1(X.row(0).transpose(), Y(0), tau);
    } else {
      const DesignMatrix D = validate_design(X);
      if (mode == "numeric") {
        budget.seed = data.seed;
        e = dual_prior_numeric(D, Y, p, tau,
                               method == "mc" ? PriorMethod::MonteCarlo : PriorMethod::Quadrature, budget);
      } else if (mode == "ridge") {
        e = dual_prior_ridge_asymptotic(D, Y, tau);
      } else if (mode == "smooth") {
        e = dual_prior_smooth_asymptotic(D, Y, p, tau,
                                         printed_curvature ? LaplaceDeterminant::ProductOfCoordinates
                                                           : LaplaceDeterminant::Exact);
      } else {
        const Interpolator it = min_norm_l1(D, Y, opts);
        e = dual_prior_sparse_asymptotic(D, Y, tau, choose_v0(D, it, "auto", budget.mc_samples, data.seed));
      }
    }
    std::cout << estimate_json(e).dump(2) << "\n";
  } else if (*sweep) {
    SweepConfig cfg = load_sweep_config(config);
    if (threads > 0) cfg.threads = threads;
    const Dataset ds = load_sweep_dataset(cfg);
    const auto records = run_sweep(ds, cfg);
    emit(records, format == "json" ? EmitFormat::Json : EmitFormat::Csv, out_path);
    int failed = 0;
    for (const auto& r : records) failed += r.ok ? 0 : 1;
    std::fprintf(stderr, "%zu cells, %d failed, written to %s\n", records.size(), failed, out_path.c_str());
  } else if (*corr) {
    const CsvTable t = read_csv_table(in_path);
    const int cx = t.column(xcol), cy = t.column(ycol), cp = t.column("p");
    if (cx < 0 || cy < 0) fail(ErrorKind::TargetMissing, "column not found in " + in_path);
    if (p_filter && cp < 0) fail(ErrorKind::TargetMissing, "no p column in " + in_path);
    std::vector<double> a, b;
    for (const auto& row : t.rows) {
      double va = 0.0, vb = 0.0, vp = 0.0;
      if (row.size() != t.header.size()) continue;
      if (p_filter && !(parse_double(row[static_cast<std::size_t>(cp)], vp) && vp == *p_filter)) continue;
      if (parse_double(row[static_cast<std::size_t>(cx)], va) &&
          parse_double(row[static_cast<std::size_t>(cy)], vb)) {
        a.push_back(va);
        b.push_back(vb);
      }
    }
    const CorrelationReport r = bootstrap_ci(a, b, resamples, data.seed, xcol + "~" + ycol);
    std::cout << report_to_json(r) << "\n";
  } else if (*info) {
    std::cout << json{{"simd", std::string(simd::active_kernels().name)},
                      {"avx2_available", simd::avx2_kernels() != nullptr},
                      {"threads", resolve_threads(0)}}
                     .dump(2)
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}

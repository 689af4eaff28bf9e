#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "iiclab/emit.hpp"
#include "iiclab/errors.hpp"
#include "iiclab/sweep.hpp"

using namespace iiclab;
namespace fs = std::filesystem;

namespace {

SweepConfig small_config() {
  return parse_sweep_config(R"(
# three dimensions, all three regimes
dataset = "synthetic"
n_train = 12
feature = "rff"
rff_sigma = 0.03
d_grid = [16, 24, 40]
p_list = [1, 2, 3]
master_seed = 7
)");
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an iiclab::Error");
  return ErrorKind::Usage;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const SweepConfig cfg = small_config();
  CHECK(cfg.n_train == 12);
  CHECK(cfg.d_grid == std::vector<Index>{16, 24, 40});
  CHECK(cfg.p_list == std::vector<double>{1, 2, 3});
  CHECK(cfg.rff_sigma == 0.03);
  CHECK(cfg.feature == FeatureKind::Rff);
  CHECK(parse_sweep_config("feature = \"poly\"\nd_grid=[30]\np_list=[2]").feature == FeatureKind::Polynomial);

  CHECK(kind_of([] { parse_sweep_config("bogus = 1"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_sweep_config("n_train = abc"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { validate_sweep_config(parse_sweep_config("n_train = 20\nd_grid = [20]\np_list=[2]")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { validate_sweep_config(parse_sweep_config("d_grid = [30]\np_list = [1.5]")); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { load_sweep_config("/nonexistent/cfg.toml"); }) == ErrorKind::FileNotFound);
}

TEST_CASE("sweep records are complete, ordered and interpolating") {
  const SweepConfig cfg = small_config();
  const Dataset data = load_sweep_dataset(cfg);
  const auto recs = run_sweep(data, cfg);
  REQUIRE(recs.size() == 9);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    CHECK(std::make_pair(recs[i].d, recs[i].p) < std::make_pair(recs[i + 1].d, recs[i + 1].p));
  }
  int ok = 0;
  for (const auto& r : recs) {
    if (!r.ok) {
      CHECK_FALSE(r.failure_reason.empty());
      continue;
    }
    ++ok;
    REQUIRE(r.iic);
    CHECK(r.iic->total == doctest::Approx(r.iic->reg_term + r.iic->sharpness_term).epsilon(1e-12));
    CHECK(*r.train_mse <= 1e-10);
    if (r.p == 1.0) CHECK(r.certificate_margin);
  }
  CHECK(ok >= 6);
  // 2d - 3(d - n) <= 0 at d = 40, n = 12.
  CHECK(recs[8].p == 3.0);
  CHECK_FALSE(recs[8].ok);
  CHECK(recs[8].failure_reason.rfind("DimensionBound", 0) == 0);
}

TEST_CASE("sweep output does not depend on the thread count") {
  SweepConfig cfg = small_config();
  const Dataset data = load_sweep_dataset(cfg);
  cfg.threads = 1;
  const std::string one = records_to_csv(run_sweep(data, cfg));
  cfg.threads = 8;
  const std::string eight = records_to_csv(run_sweep(data, cfg));
  CHECK(one == eight);
}

TEST_CASE("cells are isolated from the rest of the grid") {
  SweepConfig cfg = small_config();
  const Dataset data = load_sweep_dataset(cfg);
  const auto full = run_sweep(data, cfg);
  cfg.d_grid = {24};
  const auto part = run_sweep(data, cfg);
  REQUIRE(part.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(part[k].ok == full[3 + k].ok);
    if (part[k].ok) CHECK(part[k].iic->total == full[3 + k].iic->total);
  }
  CHECK(cell_seed(1, 24, 2.0) != cell_seed(1, 24, 3.0));
}

TEST_CASE("csv emission round-trips") {
  const SweepConfig cfg = small_config();
  const auto recs = run_sweep(load_sweep_dataset(cfg), cfg);
  const std::string path = (fs::temp_directory_path() / "iiclab_test_records.csv").string();
  emit(recs, EmitFormat::Csv, path);
  const std::string text = slurp(path);
  CHECK(text.rfind("d,p,iic_total,reg_term,sharpness_term,ambient_constant,tau_star,log_det_gram,"
                   "sum_log_abs_theta,log_v0,v0_method,support_size,certificate_margin,train_mse,"
                   "test_mse,status,failure_reason\n",
                   0) == 0);
  const auto back = read_records_csv(path);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].d == recs[i].d);
    CHECK(back[i].ok == recs[i].ok);
    CHECK(back[i].failure_reason == recs[i].failure_reason);
    if (!recs[i].ok) continue;
    CHECK(std::memcmp(&back[i].iic->total, &recs[i].iic->total, sizeof(double)) == 0);
    CHECK(std::memcmp(&back[i].iic->sharpness_term, &recs[i].iic->sharpness_term, sizeof(double)) == 0);
    CHECK(*back[i].test_mse == *recs[i].test_mse);
  }
  CHECK(records_to_csv(back) == records_to_csv(recs));
  CHECK(records_to_csv({}).find('\n') == records_to_csv({}).size() - 1);

  const std::string json = records_to_json(recs);
  CHECK(json.find("\"sharpness_term\"") != std::string::npos);
  CHECK(json.find("\"status\": \"error\"") != std::string::npos);
  CHECK(kind_of([&] { emit(recs, EmitFormat::Csv, "/nonexistent/dir/out.csv"); }) == ErrorKind::IoError);
}

TEST_CASE("floats use 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(std::acos(-1.0))) == std::acos(-1.0));
}

#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "iiclab/dataset.hpp"
#include "iiclab/errors.hpp"

using namespace iiclab;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("iiclab_test_" + name);
  std::ofstream(p) << body;
  return p.string();
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

}  // namespace

TEST_CASE("csv ingestion") {
  const auto path = write_temp("ok.csv", "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
  const Dataset ds = ingest_csv(path, "y");
  CHECK(ds.X0.rows() == 3);
  CHECK(ds.X0(1, 1) == 5.0);
  CHECK(ds.y(2) == 9.0);
  CHECK(ds.columns == std::vector<std::string>{"a", "b"});
  CHECK(ingest_csv(path).target == "y");

  const auto quoted = write_temp("q.csv", "\"x, one\",y\n1,2\n\"3\",4\n5,6\n");
  CHECK(ingest_csv(quoted, "y").columns[0] == "x, one");

  CHECK(kind_of([&] { ingest_csv(path, "z"); }) == ErrorKind::TargetMissing);
  CHECK(kind_of([] { ingest_csv("/nonexistent/iiclab.csv"); }) == ErrorKind::FileNotFound);
  const auto bad = write_temp("bad.csv", "a,y\n1,2\nNA,3\n4,5\n");
  try {
    ingest_csv(bad, "y");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("NA") != std::string::npos);
  }
  CHECK(kind_of([&] { ingest_csv(write_temp("few.csv", "a,y\n1,2\n3,4\n"), "y"); }) == ErrorKind::TooFew);
}

TEST_CASE("strict numeric tokens") {
  double v = 0.0;
  CHECK(parse_double("1.5e3", v));
  CHECK(v == 1500.0);
  CHECK(parse_double(" -2 ", v));
  CHECK_FALSE(parse_double("", v));
  CHECK(v == -2.0);
  CHECK_FALSE(parse_double("3x", v));
  CHECK_FALSE(parse_double("  ", v));
  CHECK_FALSE(parse_double("1 2", v));
}

TEST_CASE("split is a seeded permutation") {
  const Dataset data = synthetic_sine(30, 4);
  const auto [tr, te] = split(data, 10, 77);
  CHECK(tr.X0.rows() == 10);
  CHECK(te.X0.rows() == 20);
  std::multiset<double> all(data.X0.data(), data.X0.data() + 30);
  std::multiset<double> got(tr.X0.data(), tr.X0.data() + 10);
  got.insert(te.X0.data(), te.X0.data() + 20);
  CHECK(all == got);
  const auto [tr2, te2] = split(data, 10, 77);
  CHECK(tr2.X0 == tr.X0);
  const auto [tr3, te3] = split(data, 10, 78);
  CHECK(tr3.X0 != tr.X0);
  CHECK(kind_of([&] { split(data, 30, 0); }) == ErrorKind::BadSize);
  CHECK(kind_of([&] { split(data, 0, 0); }) == ErrorKind::BadSize);
}

TEST_CASE("synthetic sine data") {
  const Dataset a = synthetic_sine(50, 1, 0.0);
  for (Index i = 0; i < 50; ++i) {
    CHECK(std::fabs(a.X0(i, 0)) < 1.0);
    CHECK(a.y(i) == doctest::Approx(std::sin(3 * a.X0(i, 0))));
  }
  CHECK(synthetic_sine(50, 1).X0 == a.X0);
}

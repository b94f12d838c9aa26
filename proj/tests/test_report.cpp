#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lookahead/errors.hpp"
#include "lookahead/report.hpp"

using namespace lookahead;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lookahead_report_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegretCurve synthetic(const std::string& id, std::uint64_t seed, int K, double scale) {
  RegretCurve c{id, seed, {}};
  for (int k = 1; k <= K; ++k) c.points.push_back({k, 1.0, 1.0 - scale / std::sqrt(k), scale * 2.0 * std::sqrt(k), 0.0, 0.0});
  return c;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty directory is an input error") {
  CHECK_THROWS_AS(write_report(fresh_dir("empty")), InputError);
  CHECK_THROWS_AS(write_report("/nonexistent/dir"), InputError);
}

TEST_CASE("one run gives one curve with its id in the legend") {
  const auto dir = fresh_dir("one");
  write_run_csv(synthetic("alpha", 0, 300, 1.0), run_csv_path(dir, "alpha", 0));
  const auto files = write_report(dir);
  const auto svg = slurp(files.chart);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count(svg, "<polyline") == 1);
  CHECK(count(svg, ">alpha</text>") == 1);
  CHECK(slurp(files.summary).find("alpha,1,300,") != std::string::npos);
}

TEST_CASE("report is a pure function of the CSVs") {
  const auto dir = fresh_dir("pure");
  for (std::uint64_t s = 0; s < 3; ++s) {
    write_run_csv(synthetic("a", s, 1200, 1.0 + s), run_csv_path(dir, "a", s));
    write_run_csv(synthetic("b", s, 1200, 0.5 + s), run_csv_path(dir, "b", s));
  }
  const auto f = write_report(dir);
  const auto svg1 = slurp(f.chart);
  const auto sum1 = slurp(f.summary);
  write_report(dir);
  CHECK(slurp(f.chart) == svg1);
  CHECK(slurp(f.summary) == sum1);
  CHECK(count(svg1, "<polyline") == 2);
  CHECK(count(svg1, "<polygon") == 2);
}

TEST_CASE("a corrupt CSV names its path") {
  const auto dir = fresh_dir("bad");
  write_run_csv(synthetic("ok", 0, 10, 1.0), run_csv_path(dir, "ok", 0));
  std::ofstream(dir / "broken__seed3.csv") << "seed,k,vstar,policy_value,cum_regret,elapsed_ms\n3,1,x,1,1,0\n";
  try {
    write_report(dir);
    FAIL("expected an input error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("broken__seed3.csv") != std::string::npos);
  }
}

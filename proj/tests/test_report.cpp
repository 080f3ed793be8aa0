#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "nesting/pipeline.hpp"
#include "nesting/report.hpp"
#include "support/fixtures.hpp"

using namespace nesting;

TEST_CASE("CSV header has exactly 13 fields in the documented order") {
  const std::string header = csv_header();
  std::stringstream ss(header);
  std::vector<std::string> fields;
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  REQUIRE(fields.size() == 13);
  CHECK(fields[0] == "instance");
  CHECK(fields[1] == "pieces");
  CHECK(fields[2] == "efficiency");
  CHECK(fields[3] == "lb");
  CHECK(fields[4] == "ub");
  CHECK(fields[5] == "gap_percent");
  CHECK(fields[6] == "binary_vars");
  CHECK(fields[7] == "nodes");
  CHECK(fields[8] == "time");
  CHECK(fields[9] == "constraints");
  CHECK(fields[10] == "time_to_best");
  CHECK(fields[11] == "best_node");
  CHECK(fields[12] == "build_time");
}

TEST_CASE("benchmark row from a solved instance") {
  Prepared p = prepare(testsupport::three_instance());
  SolveResult res = solve(p.state, p.trivial_lb, SolverConfig{});
  res.outcome.build_time = p.build_time;
  const BenchmarkRow row =
      make_benchmark_row(*p.instance, *p.cache, p.state, res.outcome);
  CHECK(row.instance == "three");
  CHECK(row.pieces == 3);
  CHECK(row.lb == Catch::Approx(6.0));
  CHECK(row.ub == Catch::Approx(6.0));
  CHECK(row.gap_percent == Catch::Approx(0.0));
  CHECK(row.efficiency == Catch::Approx(23.0 / (7.0 * 6.0)));
  CHECK(row.binary_vars == 61);
  CHECK(row.constraints == 1266);

  const std::string line = csv_row(row);
  std::stringstream ss(line);
  std::vector<std::string> fields;
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  CHECK(fields.size() == 13);
  CHECK(fields[0] == "three");
  CHECK(line.find(';') == std::string::npos);  // comma separated, dot decimal
}

TEST_CASE("SVG rendering is deterministic and complete") {
  Prepared p = prepare(testsupport::three_instance());
  const SolveResult res = solve(p.state, p.trivial_lb, SolverConfig{});
  const DecodedSolution sol =
      decode_solution(res.incumbent, p.state, *p.cache);

  std::ostringstream a, b;
  render_svg(a, sol, *p.cache);
  render_svg(b, sol, *p.cache);
  CHECK(a.str() == b.str());

  const std::string svg = a.str();
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);
  std::size_t paths = 0;
  for (std::size_t pos = svg.find("<path"); pos != std::string::npos;
       pos = svg.find("<path", pos + 1))
    ++paths;
  CHECK(paths == 3);

  // the used-length marker matches the reported optimum
  std::ostringstream marker;
  marker << "x1=\"" << std::setprecision(10) << (10.0 + sol.length * 40.0)
         << "\"";
  CHECK(svg.find(marker.str()) != std::string::npos);
}

TEST_CASE("profiles reproduce hand-computed ratio curves") {
  // two methods, two instances, times (1,2) and (2,1)
  MethodTimes m1{"m1", {{"a", 1.0}, {"b", 2.0}}};
  MethodTimes m2{"m2", {{"a", 2.0}, {"b", 1.0}}};
  const auto profiles = performance_profiles({m1, m2}, 100.0);
  REQUIRE(profiles.size() == 2);
  for (const PerformanceProfile& prof : profiles) {
    CHECK(profile_value(prof, 1.0) == Catch::Approx(0.5).margin(1e-12));
    CHECK(profile_value(prof, 1.5) == Catch::Approx(0.5).margin(1e-12));
    CHECK(profile_value(prof, 2.0) == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("one method solving everything is flat at one") {
  MethodTimes m{"only", {{"a", 1.0}, {"b", 7.0}, {"c", 0.5}}};
  const auto profiles = performance_profiles({m}, 100.0);
  REQUIRE(profiles.size() == 1);
  CHECK(profile_value(profiles[0], 1.0) == Catch::Approx(1.0));
  CHECK(profile_value(profiles[0], 50.0) == Catch::Approx(1.0));
}

TEST_CASE("unsolved runs are capped at the failure ratio") {
  const double inf = std::numeric_limits<double>::infinity();
  MethodTimes good{"good", {{"a", 1.0}, {"b", 1.0}}};
  MethodTimes bad{"bad", {{"a", inf}, {"b", inf}}};
  const auto profiles = performance_profiles({good, bad}, 100.0);
  const PerformanceProfile& b = profiles[1];
  CHECK(profile_value(b, 99.0) == Catch::Approx(0.0));
  CHECK(profile_value(b, 100.0) == Catch::Approx(1.0));
}

TEST_CASE("profile curves are monotone") {
  MethodTimes m1{"m1", {{"a", 1.0}, {"b", 4.0}, {"c", 9.0}}};
  MethodTimes m2{"m2", {{"a", 3.0}, {"b", 2.0}, {"c", 3.0}}};
  for (const PerformanceProfile& prof :
       performance_profiles({m1, m2}, 1e6)) {
    double prev = 0.0;
    for (const ProfilePoint& p : prof.curve) {
      CHECK(p.rho >= prev);
      prev = p.rho;
    }
    CHECK(prev == Catch::Approx(1.0));
  }
}

TEST_CASE("mismatched instance sets are rejected") {
  MethodTimes m1{"m1", {{"a", 1.0}, {"b", 2.0}}};
  MethodTimes m2{"m2", {{"a", 2.0}, {"c", 1.0}}};
  CHECK_THROWS_AS(performance_profiles({m1, m2}, 100.0), InputError);
}

TEST_CASE("profile CSV layout") {
  MethodTimes m1{"m1", {{"a", 1.0}, {"b", 2.0}}};
  MethodTimes m2{"m2", {{"a", 2.0}, {"b", 1.0}}};
  std::ostringstream os;
  emit_profile_csv(os, performance_profiles({m1, m2}, 100.0));
  CHECK(os.str().rfind("method,tau,rho\n", 0) == 0);
  CHECK(os.str().find("m1,1,0.5") != std::string::npos);
  CHECK(os.str().find("m1,2,1") != std::string::npos);
}

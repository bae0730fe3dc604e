#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sng/error.hpp"
#include "sng/report.hpp"

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(TraceCsv, HeaderAndRunningProcessed) {
  sng::PruningTrace tr;
  tr.owner = 7;
  tr.candidates = 6;
  tr.rows = {{1, 2, 3, 0.5}, {2, 0, 1, 0.75}};
  std::ostringstream out;
  sng::write_trace_csv(out, std::vector{tr});
  EXPECT_EQ(lines(out.str()),
            (std::vector<std::string>{"owner,t,s_size,delta,rho,processed",
                                      "7,1,2,3,0.5,4", "7,2,0,1,0.75,6"}));
}

TEST(DegreeCsv, OneRowPerDegree) {
  sng::DegreeStats s;
  s.histogram = {0, 3, 1};
  std::ostringstream out;
  sng::write_degree_csv(out, s);
  EXPECT_EQ(lines(out.str()),
            (std::vector<std::string>{"degree,count", "0,0", "1,3", "2,1"}));
  EXPECT_EQ(sng::to_json(s)["mode"], 1);
}

TEST(PathCsv, OneRowPerQuery) {
  sng::PathLengthStats s;
  s.hops = {2, 5};
  s.expanded = {9, 12};
  s.mean_hops = 3.5;
  std::ostringstream out;
  sng::write_path_csv(out, s);
  EXPECT_EQ(lines(out.str()),
            (std::vector<std::string>{"query,hops,expanded", "0,2,9", "1,5,12"}));
  const auto j = sng::to_json(s);
  EXPECT_EQ(j["queries"], 2);
  EXPECT_DOUBLE_EQ(j["mean_expanded"].get<double>(), 10.5);
}

TEST(Bench, SweepRowsAndCsv) {
  const auto base = sng::gen_uniform_ball(1000, 4, 1.0, 60);
  const auto q = sng::gen_uniform_ball(50, 4, 1.0, 61);
  const auto gt = sng::brute_force_knn(base, q, 10);
  sng::BuildParams params;
  params.r = 12;
  const auto g = sng::build_vamana(base, params);
  const std::vector<std::size_t> ls{10, 40};
  const auto rows = sng::bench_sweep(g, base, q, gt, ls, 10);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].l, 10u);
  EXPECT_LE(rows[0].recall, rows[1].recall);
  EXPECT_LE(rows[0].mean_expanded, rows[1].mean_expanded);
  for (const auto& r : rows) {
    EXPECT_GT(r.mean_latency_us, 0.0);
    EXPECT_GE(r.p99_latency_us, 0.0);
    EXPECT_GT(r.qps, 0.0);
  }
  std::ostringstream out;
  sng::write_bench_csv(out, rows);
  const auto ls_out = lines(out.str());
  ASSERT_EQ(ls_out.size(), 3u);
  EXPECT_EQ(ls_out[0],
            "l,k,recall,mean_latency_us,p99_latency_us,mean_hops,mean_expanded,qps");
  EXPECT_EQ(ls_out[1].substr(0, 6), "10,10,");
  EXPECT_TRUE(sng::to_json(rows[0]).contains("latency_note"));
}

TEST(WriteFile, ThrowsOnUnwritablePath) {
  sng::testing::TempDir dir;
  sng::write_file(dir / "ok.csv", [](std::ostream& o) { o << "x\n"; });
  EXPECT_EQ(sng::testing::read_bytes(dir / "ok.csv"), "x\n");
  EXPECT_THROW(sng::write_file(dir / "no/such/dir.csv", [](std::ostream&) {}),
               sng::IoError);
}

}  // namespace

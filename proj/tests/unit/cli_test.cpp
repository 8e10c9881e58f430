#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tripmatch/harness/cli.hpp"
#include "tripmatch/harness/io.hpp"

namespace fs = std::filesystem;
using tripmatch::harness::read_text_file;
using tripmatch::harness::write_text_file;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "tripmatch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tripmatch::harness::run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tripmatch_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST_F(CliTest, GenPriceSimulateAndRerun) {
  ASSERT_EQ(run({"gen", "--example", "1", "--L", "20", "--l", "10", "--out", path("inst")}).code, 0);
  for (const char* f : {"network.txt", "types.txt", "config.json"}) EXPECT_TRUE(fs::exists(path("inst/") + f));
  auto cfg = nlohmann::json::parse(read_text_file(path("inst/config.json")));
  cfg["periods"] = 3000;
  cfg["replications"] = 2;
  cfg["T"] = {1};
  write_text_file(path("cfg.json"), cfg.dump());

  const CliRun p = run({"price", "--config", path("cfg.json"), "--out", path("p")});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_TRUE(fs::exists(path("p/pricing.json")));
  EXPECT_TRUE(fs::exists(path("p/trace.csv")));

  const CliRun s1 = run({"simulate", "--config", path("cfg.json"), "--pricing", path("p/pricing.json"),
                      "--events", "--out", path("s1")});
  ASSERT_EQ(s1.code, 0) << s1.err;
  const CliRun s2 = run({"simulate", "--config", path("cfg.json"), "--pricing", path("p/pricing.json"),
                      "--events", "--out", path("s2")});
  ASSERT_EQ(s2.code, 0) << s2.err;
  const std::string m = read_text_file(path("s1/metrics.csv"));
  EXPECT_EQ(m, read_text_file(path("s2/metrics.csv")));
  const std::string header = first_line(m);
  for (const char* col : {"profit_per_period", "match_rate", "cost_efficiency", "detour_rate",
                          "on_trip_match_portion", "throughput_per_minute"}) {
    EXPECT_NE(header.find(col), std::string::npos) << col;
  }
  EXPECT_TRUE(fs::exists(path("s1/events_0.csv")));
  EXPECT_TRUE(fs::exists(path("s1/metrics.json")));
  EXPECT_TRUE(fs::exists(path("s1/config.used.json")));

  const CliRun f = run({"solve-fluid", "--config", path("cfg.json"), "--lambda", "0.2", "--out", path("f")});
  ASSERT_EQ(f.code, 0) << f.err;
  EXPECT_EQ(first_line(read_text_file(path("f/fluid_solution.csv"))), "name,value,dual");
}

TEST_F(CliTest, ConfigErrorsExitTwoAndNameTheKey) {
  write_text_file(path("bad.json"), R"({"instance": {"kind": "example1", "L": 10, "l": 5}, "c": [0.7, "x"]})");
  const CliRun r = run({"price", "--config", path("bad.json"), "--out", path("o")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("c[1]"), std::string::npos) << r.err;
  write_text_file(path("bad2.json"), R"({"instanse": {}})");
  const CliRun r2 = run({"simulate", "--config", path("bad2.json"), "--out", path("o")});
  EXPECT_EQ(r2.code, 2);
  EXPECT_NE(r2.err.find("instanse"), std::string::npos) << r2.err;
  EXPECT_NE(run({"frobnicate"}).code, 0);
}

TEST_F(CliTest, SweepShutdownPointHasZeroProfit) {
  write_text_file(path("sweep.json"), R"({
    "instance": {"kind": "example1", "L": 10, "l": 5},
    "policy": ["pre_trip"], "T": [0], "c": [1.1],
    "periods": 2000, "replications": 2})");
  const CliRun r = run({"sweep", "--config", path("sweep.json"), "--out", path("sw")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(read_text_file(path("sw/sweep.csv")));
  std::string header, row, cell;
  std::getline(csv, header);
  std::getline(csv, row);
  std::vector<std::string> h, v;
  for (std::istringstream a(header); std::getline(a, cell, ',');) h.push_back(cell);
  for (std::istringstream b(row); std::getline(b, cell, ',');) v.push_back(cell);
  if (!row.empty() && row.back() == ',') v.push_back("");
  ASSERT_EQ(h.size(), v.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (h[k] == "profit_per_period" || h[k] == "fluid_profit") EXPECT_EQ(std::stod(v[k]), 0.0) << h[k];
  }
}

TEST_F(CliTest, IngestWritesInstance) {
  std::ofstream(path("trips.csv")) << "pickup_x,pickup_y,dropoff_x,dropoff_y,timestamp\n"
                                      "1,1,9,9,2020-01-01T00:00:00\n"
                                      "1,1,9,9,2020-01-01T00:30:00\n"
                                      "1,1,9,9,2020-01-01T01:00:00\n";
  std::ofstream(path("zones.txt")) << "1 0 0 5 0 5 5 0 5\n2 20 20 30 20 30 30\n";
  const CliRun r = run({"ingest", "--trips", path("trips.csv"), "--zones", path("zones.txt"), "--grid-cells", "6",
                     "--out", path("ing")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("ing/types.txt")));
  EXPECT_NE(read_text_file(path("ing/ingest.json")).find("zone 2 is empty"), std::string::npos);
  const CliRun p = run({"solve-fluid", "--config", path("ing/config.json"), "--lambda", "0.5", "--out", path("f")});
  EXPECT_EQ(p.code, 0) << p.err;
}

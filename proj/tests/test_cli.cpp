#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "fundnet/cli.hpp"
#include "support/testutil.hpp"

using fundnet::run_cli;

namespace {

int cli(std::initializer_list<std::string> args) {
  std::vector<std::string> full{"fundnet"};
  full.insert(full.end(), args.begin(), args.end());
  return run_cli(full);
}

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("generate then metrics round trip") {
  testutil::TempDir dir;
  const std::string bundle = (dir.path() / "m1").string();
  CHECK(cli({"generate", "--funds", "80", "--assets", "20", "--seed", "7",
             "--mean-asset-degree", "9", "--out", bundle}) == 0);
  CHECK(std::filesystem::exists(dir.path() / "m1" / "funds.csv"));
  CHECK(std::filesystem::exists(dir.path() / "m1" / "manifest.json"));

  const std::string out = (dir.path() / "reports").string();
  CHECK(cli({"metrics", bundle, "--out", out}) == 0);
  const std::string centrality =
      testutil::read_file(dir.path() / "reports" / "centrality.csv");
  CHECK(count_lines(centrality) == 81);  // header + one row per fund
  CHECK(centrality.rfind("node_id,degree_in,degree_out,closeness,betweenness,"
                         "eigenvector\n",
                         0) == 0);
  for (const char* name :
       {"histogram.csv", "histogram_out.csv", "histogram_fund.csv",
        "histogram_asset.csv", "summary.json"})
    CHECK(std::filesystem::exists(dir.path() / "reports" / name));

  const auto summary = nlohmann::json::parse(
      testutil::read_file(dir.path() / "reports" / "summary.json"));
  CHECK(summary.at("funds") == 80);
  CHECK(summary.at("density").contains("crossholdings"));
  CHECK(summary.at("assortativity").contains("administrator"));
  CHECK(summary.at("assortativity").contains("class"));
}

TEST_CASE("generate rejects bad flags with exit 2") {
  testutil::TempDir dir;
  CHECK(cli({"generate", "--funds", "0", "--out",
             (dir.path() / "x").string()}) == 2);
  CHECK(cli({"generate", "--funds", "abc", "--out",
             (dir.path() / "x").string()}) == 2);
  CHECK(cli({"no-such-command"}) == 2);
}

TEST_CASE("generate refuses to overwrite without --force") {
  testutil::TempDir dir;
  const std::string bundle = (dir.path() / "m1").string();
  CHECK(cli({"generate", "--funds", "20", "--assets", "8", "--mean-asset-degree", "5", "--out", bundle}) ==
        0);
  CHECK(cli({"generate", "--funds", "20", "--assets", "8", "--mean-asset-degree", "5", "--out", bundle}) ==
        3);
  CHECK(cli({"generate", "--funds", "20", "--assets", "8", "--mean-asset-degree", "5", "--out", bundle,
             "--force"}) == 0);
}

TEST_CASE("metrics without inputs or with a missing bundle") {
  testutil::TempDir dir;
  CHECK(cli({"metrics", "--out", dir.str()}) == 2);
  CHECK(cli({"metrics", (dir.path() / "missing").string(), "--out",
             dir.str()}) == 3);
}

TEST_CASE("metrics --series on identical bundles gives coefficients 1.0") {
  testutil::TempDir dir;
  const std::string b1 = (dir.path() / "p1").string();
  const std::string b2 = (dir.path() / "p2").string();
  for (const std::string& b : {b1, b2})
    REQUIRE(cli({"generate", "--funds", "40", "--assets", "10", "--seed", "3",
                 "--mean-asset-degree", "6", "--out", b}) == 0);
  const std::string out = (dir.path() / "stab").string();
  CHECK(cli({"metrics", "--series", b1, b2, "--out", out}) == 0);
  const std::string stability =
      testutil::read_file(dir.path() / "stab" / "stability.csv");
  CHECK(stability ==
        "period_a,period_b,node_jaccard,edge_jaccard\np1,p2,1,1\n");
}

TEST_CASE("generate --periods writes dated sub-bundles usable as a series") {
  testutil::TempDir dir;
  const std::string out = (dir.path() / "series").string();
  CHECK(cli({"generate", "--funds", "30", "--assets", "10",
             "--mean-asset-degree", "6", "--seed", "4", "--date", "2014-01",
             "--periods", "3", "--churn", "0.1", "--out", out}) == 0);
  for (const char* d : {"2014-01", "2014-02", "2014-03"})
    CHECK(std::filesystem::exists(dir.path() / "series" / d / "funds.csv"));

  const std::string stab = (dir.path() / "stab").string();
  CHECK(cli({"metrics", "--series", out + "/2014-01", out + "/2014-02",
             out + "/2014-03", "--out", stab}) == 0);
  const std::string stability =
      testutil::read_file(dir.path() / "stab" / "stability.csv");
  CHECK(count_lines(stability) == 3);  // header + two consecutive pairs
  CHECK(stability.find("2014-01,2014-02,1,") != std::string::npos);
}

TEST_CASE("metrics degrades gracefully without cross-holdings edges") {
  testutil::TempDir dir;
  const std::string bundle = (dir.path() / "m").string();
  REQUIRE(cli({"generate", "--funds", "12", "--assets", "6",
               "--mean-asset-degree", "4", "--mean-cross-degree", "0",
               "--out", bundle}) == 0);
  const std::string out = (dir.path() / "rep").string();
  CHECK(cli({"metrics", bundle, "--out", out}) == 0);
  const auto summary = nlohmann::json::parse(
      testutil::read_file(dir.path() / "rep" / "summary.json"));
  CHECK(summary.at("eigenvector_converged") == false);
  CHECK(summary.at("assortativity").at("administrator").is_null());
  CHECK(summary.contains("assortativity_notes"));
}

TEST_CASE("metrics rejects a corrupt bundle with exit 4") {
  testutil::TempDir dir;
  const auto bundle = dir.path() / "bad";
  std::filesystem::create_directories(bundle);
  const auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(bundle / name, std::ios::binary);
    out << text;
  };
  write("funds.csv", "fund_id,class,administrator,open_ended\nF1,c,M,1\n");
  write("assets.csv", "asset_id,class,price\nA1,bond,1\n");
  write("crossholdings.csv",
        "investor_fund_id,investee_fund_id,fraction\nF1,NOBODY,0.5\n");
  write("holdings.csv", "fund_id,asset_id,value\nF1,A1,10\n");
  CHECK(cli({"metrics", bundle.string(), "--out", (dir.path() / "o").string()}) ==
        4);
}

TEST_CASE("simulate writes trajectory and summary; meltdown is exit 0") {
  testutil::TempDir dir;
  const std::string bundle = (dir.path() / "m").string();
  REQUIRE(cli({"generate", "--funds", "60", "--assets", "15", "--seed", "11",
               "--mean-asset-degree", "8", "--out", bundle}) == 0);

  SUBCASE("tiny shock") {
    const std::string out = (dir.path() / "sim").string();
    CHECK(cli({"simulate", bundle, "--shock-assets", "GOV", "--eta", "0.999",
               "--crit-rate", "0.5", "--out", out}) == 0);
    const std::string summary =
        testutil::read_file(dir.path() / "sim" / "summary.csv");
    CHECK(summary.find(",0,0,1,") != std::string::npos);  // 0 failures, 1 round
    CHECK(std::filesystem::exists(dir.path() / "sim" / "cascade.json"));
  }
  SUBCASE("meltdown still exits 0") {
    const std::string out = (dir.path() / "melt").string();
    CHECK(cli({"simulate", bundle, "--shock-assets", "GOV", "--eta", "0.3",
               "--crit-rate", "0.7", "--beta-rate", "0.1", "--omega", "0.3",
               "--out", out}) == 0);
  }
  SUBCASE("unknown asset id is exit 2 and names the id") {
    CHECK(cli({"simulate", bundle, "--shock-assets", "NOPE", "--out",
               (dir.path() / "u").string()}) == 2);
  }
  SUBCASE("presets fill eta and crit unless overridden") {
    const std::string out = (dir.path() / "preset").string();
    CHECK(cli({"simulate", bundle, "--shock-assets", "GOV", "--preset",
               "stress15", "--out", out}) == 0);
    const std::string summary =
        testutil::read_file(dir.path() / "preset" / "summary.csv");
    CHECK(summary.find("GOV,0.15,0.85,") != std::string::npos);
  }
  SUBCASE("invalid scenario parameter is exit 4") {
    CHECK(cli({"simulate", bundle, "--shock-assets", "GOV", "--eta", "1.0",
               "--out", (dir.path() / "v").string()}) == 4);
  }
}

TEST_CASE("sweep matches simulate on a 1-point grid and orders the grid") {
  testutil::TempDir dir;
  const std::string bundle = (dir.path() / "m").string();
  REQUIRE(cli({"generate", "--funds", "50", "--assets", "12", "--seed", "23",
               "--mean-asset-degree", "8", "--out", bundle}) == 0);

  const std::string sim_out = (dir.path() / "sim").string();
  REQUIRE(cli({"simulate", bundle, "--shock-assets", "GOV", "--eta", "0.4",
               "--crit-rate", "0.75", "--beta-rate", "0.2", "--omega", "0.1",
               "--out", sim_out}) == 0);
  const std::string sim_summary =
      testutil::read_file(dir.path() / "sim" / "summary.csv");

  const std::string sweep_out = (dir.path() / "sw1").string();
  REQUIRE(cli({"sweep", bundle, "--shock-assets", "GOV", "--eta", "0.4",
               "--crit-rate", "0.75", "--beta-rate", "0.2", "--omega", "0.1",
               "--out", sweep_out}) == 0);
  const std::string sweep_rows =
      testutil::read_file(dir.path() / "sw1" / "sweep.csv");
  // the simulate summary row embeds the same four results the sweep row has
  const std::string sweep_row =
      sweep_rows.substr(sweep_rows.find('\n') + 1);
  std::string tail = sweep_row.substr(std::string("0.4,0.75,0.2,0.1,").size());
  tail.pop_back();  // newline
  tail.pop_back();  // trailing empty error field's comma
  CHECK(sim_summary.find(tail) != std::string::npos);

  const std::string grid_out = (dir.path() / "sw2").string();
  REQUIRE(cli({"sweep", bundle, "--shock-assets", "GOV", "--eta",
               "0.9,0.7,0.5", "--crit-rate", "0.6,0.8", "--out", grid_out,
               "--heatmap", "eta,crit_rate,final_failures"}) == 0);
  const std::string grid =
      testutil::read_file(dir.path() / "sw2" / "sweep.csv");
  CHECK(count_lines(grid) == 7);  // header + 6 rows
  const std::string heatmap = testutil::read_file(
      dir.path() / "sw2" / "heatmap_final_failures.csv");
  CHECK(count_lines(heatmap) == 3);  // header + 2 crit rows
  CHECK(heatmap.rfind("crit_rate\\eta,0.9,0.7,0.5\n", 0) == 0);
  CHECK(std::filesystem::exists(dir.path() / "sw2" / "manifest.json"));

  SUBCASE("bad heatmap axes are exit 2") {
    CHECK(cli({"sweep", bundle, "--shock-assets", "GOV", "--eta", "0.9,0.5",
               "--out", (dir.path() / "sw3").string(), "--heatmap",
               "eta,beta_rate,final_failures"}) == 2);
  }
}

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <sstream>

#include "biasdrift/cli.hpp"
#include "test_support.hpp"

using namespace biasdrift;
using testing_support::read_text;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

const std::string kFixture = BIASDRIFT_FIXTURE_DIR "/doctor_table1.csv";

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args, const char* env_store = nullptr) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err, env_store);
  return {status, out.str(), err.str()};
}

// 200 images for one day whose tally is known by construction:
// 15 solo men, 10 solo women, 6 images with 2 men + 1 woman, 3 with 1 man +
// 3 women, then 70 cant_identify, 90 not_human, 6 cant_say_gender.
// male = 15 + 6*(2/3) + 3*(1/4) = 19.75, female = 10 + 6*(1/3) + 3*(3/4) = 14.25.
std::string synthetic_images() {
  std::string csv = "date,image_id,category,male_persons,female_persons\n";
  int id = 0;
  const auto add = [&](int n, const std::string& cat, int m, int f) {
    for (int i = 0; i < n; ++i)
      csv += "06-05-19,img" + std::to_string(id++) + "," + cat + "," + std::to_string(m) + "," +
             std::to_string(f) + "\n";
  };
  add(15, "gendered", 1, 0);
  add(10, "gendered", 0, 1);
  add(6, "gendered", 2, 1);
  add(3, "gendered", 1, 3);
  add(70, "cant_identify", 0, 0);
  add(90, "not_human", 0, 0);
  add(6, "cant_say_gender", 0, 0);
  return csv;
}

}  // namespace

TEST(Cli, MetricsPaperRoundedJson) {
  const auto r = run_cli({"metrics", "--input", kFixture, "--query", "#Doctor", "--rounding",
                          "paper", "--format", "json", "--timestamp", "fixed"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const auto& m = j.at("metrics");
  EXPECT_NEAR(m.at("roc_pct_per_obs").get<double>(), -0.71, 0.005);
  EXPECT_EQ(m.at("range_pct").get<double>(), 46.0);
  EXPECT_EQ(m.at("rmsb_pct").get<double>(), 12.34);
  EXPECT_EQ(j.at("query_label"), "#Doctor");
}

TEST(Cli, DefaultsGiveExactReportLabelledByFileStem) {
  const auto r = run_cli({"metrics", "--input", kFixture, "--timestamp", "fixed"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("metrics").at("rounding_mode"), "exact");
  EXPECT_EQ(j.at("query_label"), "doctor_table1");
  EXPECT_EQ(j.at("metrics").at("max_bias_pct").get<double>(), 29.86);
}

TEST(Cli, MissingInputIsParseError) {
  const auto r = run_cli({"metrics", "--input", "missing.csv", "--query", "#Doctor"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("E_PARSE", 0), 0u) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"metrics", "--input", kFixture, "--bogus"},
           {"metrics", "--input", kFixture, "--rounding", "sloppy"},
           {"tally"},
           {"append", "--input", kFixture}}) {
    const auto r = run_cli(args);
    EXPECT_EQ(r.status, 2) << r.err;
    EXPECT_EQ(r.err.rfind("E_USAGE", 0), 0u) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
  }
}

TEST(Cli, HelpSucceeds) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("metrics"), std::string::npos);
}

TEST(Cli, MalformedCsvIsParseError) {
  TempDir dir;
  write_text(dir / "bad.csv", "date,male,female,cant_identify,not_human,cant_say_gender\n"
                              "06-02-19,-1,1,1,1,1\n");
  const auto r = run_cli({"metrics", "--input", (dir / "bad.csv").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("E_PARSE", 0), 0u);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
}

TEST(Cli, AllGapsIsDataError) {
  TempDir dir;
  write_text(dir / "gaps.csv", "date,male,female,cant_identify,not_human,cant_say_gender\n"
                               "06-02-19,0,0,100,100,0\n");
  const auto r = run_cli({"metrics", "--input", (dir / "gaps.csv").string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("E_DATA", 0), 0u) << r.err;
}

TEST(Cli, TallySyntheticDay) {
  TempDir dir;
  write_text(dir / "images.csv", synthetic_images());
  const auto r = run_cli({"tally", "--input", (dir / "images.csv").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto tallies = parse_tallies_csv(r.out);
  ASSERT_EQ(tallies.size(), 1u);
  EXPECT_NEAR(tallies[0].male, 19.75, 1e-9);
  EXPECT_NEAR(tallies[0].female, 14.25, 1e-9);
  EXPECT_EQ(tallies[0].cant_identify, 70);
  EXPECT_EQ(tallies[0].not_human, 90);
  EXPECT_EQ(tallies[0].cant_say_gender, 6);
  EXPECT_NEAR(tallies[0].total(), 200.0, 1e-6);
}

TEST(Cli, ReportRunsWholePipeline) {
  TempDir dir;
  write_text(dir / "images.csv", synthetic_images());
  const auto r =
      run_cli({"report", "--input", (dir / "images.csv").string(), "--timestamp", "fixed"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  // (19.75 - 14.25) / 34 * 100 = 16.176...
  EXPECT_EQ(j.at("metrics").at("rmsb_pct").get<double>(), 16.18);
  EXPECT_TRUE(j.at("metrics").at("roc_pct_per_obs").is_null());
}

TEST(Cli, AppendThenMetricsFromStore) {
  TempDir dir;
  const std::string store = (dir / "store").string();
  auto r = run_cli({"append", "--input", kFixture, "--store", store, "--query", "#Doctor"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("appended 21 tallies"), std::string::npos);

  r = run_cli({"append", "--input", kFixture, "--store", store, "--query", "#Doctor"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("E_DATA", 0), 0u);

  r = run_cli({"append", "--input", kFixture, "--store", store, "--query", "#Doctor",
               "--overwrite"});
  EXPECT_EQ(r.status, 0) << r.err;

  const auto from_store = run_cli({"metrics", "--query", "#Doctor", "--timestamp", "fixed"},
                                  store.c_str());
  const auto from_file = run_cli(
      {"metrics", "--input", kFixture, "--query", "#Doctor", "--timestamp", "fixed"});
  ASSERT_EQ(from_store.status, 0) << from_store.err;
  EXPECT_EQ(from_store.out, from_file.out);
}

TEST(Cli, OutputFileWrittenOnlyOnSuccess) {
  TempDir dir;
  const auto out_path = dir / "report.csv";
  auto r = run_cli({"metrics", "--input", kFixture, "--format", "csv", "--output",
                    out_path.string(), "--timestamp", "fixed"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_text(out_path).rfind("date,bias_pct\n", 0), 0u);

  const auto missing_out = dir / "never.json";
  r = run_cli({"metrics", "--input", "missing.csv", "--output", missing_out.string()});
  EXPECT_EQ(r.status, 1);
  EXPECT_FALSE(std::filesystem::exists(missing_out));
  for (const auto& entry : std::filesystem::directory_iterator(dir.path()))
    EXPECT_EQ(entry.path().filename(), "report.csv");
}

TEST(Cli, FixedTimestampIsDeterministic) {
  const std::vector<std::string> args = {"metrics", "--input", kFixture, "--timestamp", "fixed"};
  EXPECT_EQ(run_cli(args).out, run_cli(args).out);
}

TEST(Cli, BinaryExitStatusAndStreams) {
  TempDir dir;
  const std::string cmd = std::string("'") + BIASDRIFT_CLI_PATH + "' metrics --input '" +
                          kFixture + "' --rounding paper --timestamp fixed > '" +
                          (dir / "out.json").string() + "' 2> '" + (dir / "err.txt").string() +
                          "'";
  int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NE(read_text(dir / "out.json").find("\"range_pct\": 46.00"), std::string::npos);

  const std::string bad = std::string("'") + BIASDRIFT_CLI_PATH + "' metrics --nope 2> '" +
                          (dir / "err.txt").string() + "'";
  status = std::system(bad.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_EQ(read_text(dir / "err.txt").rfind("E_USAGE", 0), 0u);
}

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>
#include <zlib.h>

#include <gtest/gtest.h>

#include "json.hpp"

#include "lexshift/config.hpp"

using namespace lexshift;
namespace fs = std::filesystem;

TEST(Config, ParsesKeysCommentsAndTypes) {
  auto cfg = KeyValueConfig::parse("# comment\n  pool_size = 20 \n\nstemming = no\nscale=2.5\nwords = a, b\r\n",
                                   "/base");
  EXPECT_EQ(cfg.get_int("pool_size", 0), 20);
  EXPECT_FALSE(cfg.get_bool("stemming", true));
  EXPECT_DOUBLE_EQ(cfg.get_double("scale", 0.0), 2.5);
  EXPECT_EQ(cfg.get("words", ""), "a, b");
  EXPECT_EQ(cfg.get_int("missing", 7), 7);
  EXPECT_EQ(cfg.unused_keys(), (std::set<std::string>{}));
}

TEST(Config, PathsResolveAgainstConfigDirectory) {
  auto cfg = KeyValueConfig::parse("corpus = data/c.jsonl\nabs = /x/y\n", "/base");
  EXPECT_EQ(cfg.get_path("corpus"), fs::path("/base/data/c.jsonl"));
  EXPECT_EQ(cfg.get_path("abs"), fs::path("/x/y"));
  EXPECT_EQ(cfg.get_path("missing", "out"), fs::path("/base/out"));
}

TEST(Config, Errors) {
  EXPECT_THROW((void)KeyValueConfig::parse("a = 1\na = 2\n"), InvalidInput);
  EXPECT_THROW((void)KeyValueConfig::parse("just text\n"), InvalidInput);
  EXPECT_THROW((void)KeyValueConfig::parse(" = 3\n"), InvalidInput);
  auto cfg = KeyValueConfig::parse("n = 3x\nb = maybe\nu = -1\n");
  EXPECT_THROW((void)cfg.get_int("n", 0), InvalidInput);
  EXPECT_THROW((void)cfg.get_bool("b", false), InvalidInput);
  EXPECT_THROW((void)cfg.get_u64("u", 0), InvalidInput);
}

TEST(Config, UnusedKeysReported) {
  auto cfg = KeyValueConfig::parse("seed = 1\ntypo_key = 2\n");
  (void)cfg.get_u64("seed", 0);
  EXPECT_EQ(cfg.unused_keys(), (std::set<std::string>{"typo_key"}));
}

namespace {

const fs::path kFixtures = LEXSHIFT_FIXTURES;

int run_cli(const std::string& args, const fs::path& log) {
  std::string line = std::string("\"") + LEXSHIFT_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

nlohmann::json json_of(const fs::path& p) { return nlohmann::json::parse(std::ifstream(p)); }

fs::path fresh_dir(const std::string& name) {
  // Per-process directories: ctest runs each test case in its own process.
  fs::path d = fs::temp_directory_path() / ("lexshift_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Runs ingest through did once and shares the output directory.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    out_ = fresh_dir("pipeline");
    std::string common = "--config \"" + (kFixtures / "config.txt").string() + "\" --out \"" + out_.string() + "\"";
    for (const char* cmd : {"ingest", "score", "synth", "placebo", "intime", "did"})
      status_.push_back(run_cli(std::string(cmd) + " " + common, out_ / (std::string(cmd) + ".log")));
  }
  static inline fs::path out_;
  static inline std::vector<int> status_;
};

}  // namespace

TEST_F(CliPipeline, AllStagesSucceed) {
  for (std::size_t i = 0; i < status_.size(); ++i) EXPECT_EQ(status_[i], 0) << "stage " << i;
}

TEST_F(CliPipeline, IngestReportCountsRejections) {
  auto r = json_of(out_ / "ingest_report.json");
  EXPECT_EQ(r["kept"], 66 * 200);
  EXPECT_EQ(r["rejected_bad_timestamp"], 1);
  EXPECT_EQ(r["rejected_out_of_window"], 1);
  EXPECT_EQ(r["rejected_duplicate_id"], 1);
  EXPECT_TRUE(r["malformed"].empty());
  EXPECT_EQ(r["per_month"].size(), 66u);
  EXPECT_EQ(lines_of(out_ / "frequency.csv").front(), "word,year,month,doc_count,contain_count,log_rel_freq");
}

TEST_F(CliPipeline, ScoresRankPlantedWordsFirst) {
  auto rows = lines_of(out_ / "gpt_scores.csv");
  ASSERT_GE(rows.size(), 3u);
  EXPECT_EQ(rows[0], "word,score,lo95,hi95,n_cells");
  EXPECT_EQ(rows[1].substr(0, 5), "delv,");
  EXPECT_EQ(rows[2].substr(0, 8), "meticul,");
}

TEST_F(CliPipeline, SynthOutputsHaveDocumentedColumns) {
  for (const char* w : {"delv", "meticul"}) {
    std::string s = w;
    auto series = lines_of(out_ / ("synth_" + s + "_series.csv"));
    ASSERT_EQ(series.size(), 67u);
    EXPECT_EQ(series[0], "ym,y_treated,y_synth");
    EXPECT_EQ(series[1].substr(0, 8), "2018-12,");
    auto weights = lines_of(out_ / ("synth_" + s + "_weights.csv"));
    EXPECT_EQ(weights[0], "donor,weight");
    EXPECT_EQ(weights.size(), 21u);
    double total = 0.0;
    for (std::size_t i = 1; i < weights.size(); ++i) {
      double wt = std::stod(weights[i].substr(weights[i].find(',') + 1));
      EXPECT_GE(wt, 0.0);
      total += wt;
    }
    EXPECT_NEAR(total, 1.0, 1e-8);
    auto fit = json_of(out_ / ("synth_" + s + ".json"));
    EXPECT_EQ(fit["n_pre"], 48);
    EXPECT_EQ(fit["n_post"], 18);
    EXPECT_EQ(fit["event"], "2022-11");
  }
}

TEST_F(CliPipeline, PlaceboAndInTimeFiles) {
  auto p = json_of(out_ / "placebo_delv.json");
  EXPECT_EQ(p["n_donors"], 20);
  double pv = p["p_value"];
  EXPECT_GE(pv, 1.0 / 21.0 - 1e-15);
  EXPECT_LE(pv, 1.0);
  auto rows = lines_of(out_ / "placebo_delv.csv");
  EXPECT_EQ(rows[0], "word,role,mspe_ratio");
  EXPECT_EQ(rows.size(), 22u);
  auto intime = lines_of(out_ / "intime_delv.csv");
  EXPECT_EQ(intime[0], "ym,kind,mspe_ratio");
  EXPECT_EQ(intime[1].substr(0, 13), "2022-11,true,");
  EXPECT_EQ(intime.size(), 10u);
}

TEST_F(CliPipeline, DidReportsPositiveInteraction) {
  auto d = json_of(out_ / "did_delv.json");
  EXPECT_EQ(d["mode"], "hinge");
  EXPECT_EQ(d["n_observations"], 132);
  const auto& beta = d["parameters"][3];
  EXPECT_EQ(beta["name"], "beta_gpt_post");
  EXPECT_GT(beta["hdi95"][0].get<double>(), 0.0);
  auto draws = lines_of(out_ / "did_delv_draws.csv");
  EXPECT_EQ(draws[0], "chain,iter,alpha,beta,beta_post,beta_gpt_post,sigma");
  EXPECT_EQ(draws.size(), 4001u);
}

TEST(Cli, MalformedCorpusRecordFailsIngest) {
  auto dir = fresh_dir("malformed");
  std::ofstream(dir / "corpus.jsonl") << "{\"id\":\"a\",\"timestamp\":\"2020-01-02\",\"text\":\"delve deeper\"}\nnot json\n";
  std::ofstream(dir / "config.txt") << "corpus = corpus.jsonl\nt_start = 2019-12\nt_end = 2020-03\n"
                                       "event_date = 2020-01-15\nmin_doc_count = 1\n";
  EXPECT_EQ(run_cli("ingest --config \"" + (dir / "config.txt").string() + "\" --out \"" + (dir / "out").string() + "\"",
                    dir / "log.txt"),
            1);
  auto r = json_of(dir / "out" / "ingest_report.json");
  ASSERT_EQ(r["malformed"].size(), 1u);
  EXPECT_EQ(r["malformed"][0]["line"], 2);
}

TEST(Cli, GzipAndPlainCorporaGiveSameFrequencies) {
  auto dir = fresh_dir("gzip");
  std::string plain;
  {
    gzFile f = gzopen((kFixtures / "corpus.jsonl.gz").string().c_str(), "rb");
    ASSERT_NE(f, nullptr);
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) plain.append(buf, static_cast<std::size_t>(n));
    gzclose(f);
  }
  std::ofstream(dir / "corpus.jsonl", std::ios::binary) << plain;
  std::ofstream(dir / "config.txt") << "corpus = corpus.jsonl\nmin_doc_count = 5\n";
  ASSERT_EQ(run_cli("ingest --config \"" + (dir / "config.txt").string() + "\" --out \"" + (dir / "plain").string() + "\"",
                    dir / "plain.log"),
            0);
  ASSERT_EQ(run_cli("ingest --config \"" + (kFixtures / "config.txt").string() + "\" --out \"" +
                        (dir / "gz").string() + "\"",
                    dir / "gz.log"),
            0);
  EXPECT_EQ(lines_of(dir / "plain" / "frequency.csv"), lines_of(dir / "gz" / "frequency.csv"));
}

TEST(Cli, InvalidWindowIsRejected) {
  auto dir = fresh_dir("window");
  std::ofstream(dir / "config.txt") << "corpus = x.jsonl\nt_start = 2022-01\nt_end = 2021-01\n";
  EXPECT_NE(run_cli("ingest --config \"" + (dir / "config.txt").string() + "\"", dir / "log.txt"), 0);
  std::ofstream(dir / "config2.txt") << "corpus = x.jsonl\nevent_date = 2030-01-01\n";
  EXPECT_NE(run_cli("ingest --config \"" + (dir / "config2.txt").string() + "\"", dir / "log2.txt"), 0);
}

TEST(Cli, SimulateWritesReport) {
  auto dir = fresh_dir("simulate");
  std::ofstream(dir / "config.txt") << "scenario = " << (kFixtures / "scenario.txt").string()
                                    << "\nreplicates = 2\npool_size = 20\nchains = 2\ndraws = 200\nwarmup = 200\n";
  ASSERT_EQ(run_cli("simulate --config \"" + (dir / "config.txt").string() + "\" --out \"" + (dir / "out").string() + "\"",
                    dir / "log.txt"),
            0);
  auto rows = lines_of(dir / "out" / "simulate_report.csv");
  EXPECT_EQ(rows.size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "out" / "simulate_summary.json"));
}

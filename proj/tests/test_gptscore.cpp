#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lexshift/gptscore.hpp"
#include "lexshift/gptscore_io.hpp"

using namespace lexshift;
namespace fs = std::filesystem;

namespace {

// n documents, the first k of which contain `word`.
std::vector<StemSet> docs_with(const std::string& word, int k, int n) {
  std::vector<StemSet> out(static_cast<std::size_t>(n), StemSet{"filler"});
  for (int i = 0; i < k; ++i) out[static_cast<std::size_t>(i)].insert(word);
  return out;
}

ContrastiveCell cell(std::string d, std::string m, std::string p, int k_human, int k_edited, int n,
                     const std::string& word = "delv") {
  return {{std::move(d), std::move(m), std::move(p)}, docs_with(word, k_human, n), docs_with(word, k_edited, n)};
}

// Type-7 quantile written out independently of the library.
double quantile7(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  double h = (static_cast<double>(v.size()) - 1.0) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST(DocProbability, Examples) {
  EXPECT_DOUBLE_EQ(doc_probability(docs_with("w", 1, 9), "w"), 0.2);
  EXPECT_DOUBLE_EQ(doc_probability(docs_with("w", 0, 9), "w"), 0.1);
  EXPECT_DOUBLE_EQ(doc_probability(docs_with("w", 9, 9), "w"), 1.0);
  EXPECT_THROW((void)doc_probability({}, "w"), InvalidInput);
}

TEST(LogOdds, Examples) {
  EXPECT_DOUBLE_EQ(log_odds(0.5), 0.0);
  EXPECT_NEAR(log_odds(0.2), -1.38629, 5e-6);
  EXPECT_NEAR(log_odds(0.2), std::log(0.25), 1e-15);
  EXPECT_NEAR(log_odds(0.6), 0.405465, 5e-7);
  EXPECT_THROW((void)log_odds(1.0), SaturationError);
}

TEST(ComputeLor, HandExample) {
  auto c = cell("d", "m", "p", 1, 5, 9);
  EXPECT_NEAR(compute_lor(c, "delv"), 1.79176, 5e-6);
  EXPECT_NEAR(compute_lor(c, "delv"), std::log(1.5) - std::log(0.25), 1e-14);
}

TEST(ComputeLor, IdenticalSidesGiveZero) { EXPECT_EQ(compute_lor(cell("d", "m", "p", 4, 4, 9), "delv"), 0.0); }

TEST(ComputeLor, SaturationPropagates) {
  EXPECT_THROW((void)compute_lor(cell("d", "m", "p", 1, 9, 9), "delv"), SaturationError);
}

TEST(ComputeLor, Antisymmetric) {
  for (int kh = 0; kh < 9; ++kh)
    for (int ke = 0; ke < 9; ++ke) {
      auto c = cell("d", "m", "p", kh, ke, 9);
      ContrastiveCell swapped{c.key, c.edited_docs, c.human_docs};
      EXPECT_DOUBLE_EQ(compute_lor(c, "delv"), -compute_lor(swapped, "delv"));
    }
}

TEST(ComputeLor, MonotoneInEditedCount) {
  for (int kh = 0; kh < 9; ++kh) {
    double prev = -INFINITY;
    for (int ke = 0; ke < 9; ++ke) {
      double v = compute_lor(cell("d", "m", "p", kh, ke, 9), "delv");
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(VocabularyFilter, InclusiveBoundaryAndExclusions) {
  ContrastiveCell c{{"d", "m", "p"}, std::vector<StemSet>(1000), std::vector<StemSet>(1000)};
  c.human_docs[0] = {"rare"};
  c.edited_docs[1] = {"delv"};
  for (const auto& w : prompt_exclusion_words()) c.edited_docs[2].insert(porter_stem(w));
  EXPECT_TRUE(c.edited_docs[2].contains("certainli"));
  std::vector<ContrastiveCell> cells{c};
  auto vocab = vocabulary_filter(cells, 0.001);
  EXPECT_EQ(vocab, (std::set<std::string>{"delv", "rare"}));
}

TEST(VocabularyFilter, BelowThresholdDropped) {
  ContrastiveCell c{{"d", "m", "p"}, std::vector<StemSet>(1001), std::vector<StemSet>(1001)};
  c.human_docs[0] = {"rare"};
  c.human_docs[1] = {"twice"};
  c.human_docs[2] = {"twice"};
  std::vector<ContrastiveCell> cells{c};
  EXPECT_EQ(vocabulary_filter(cells, 0.001), (std::set<std::string>{"twice"}));
}

TEST(VocabularyFilter, AnyCellEitherSide) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 0, 1, 10, "x"), cell("b", "m", "p", 1, 0, 10, "y")};
  auto v = vocabulary_filter(cells, 0.1);
  EXPECT_TRUE(v.count("x"));
  EXPECT_TRUE(v.count("y"));
  EXPECT_FALSE(v.count("absent"));
}

TEST(SampleWeight, SingleCellIsOne) {
  std::vector<CellKey> grid{{"d", "m", "p"}};
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_EQ(sample_weight(grid, s).lambda, (std::vector<double>{1.0}));
}

TEST(SampleWeight, ReproducibleAndNormalized) {
  std::vector<CellKey> grid{{"a", "m", "p"}, {"b", "m", "p"}};
  auto x = sample_weight(grid, 42), y = sample_weight(grid, 42);
  EXPECT_EQ(x.lambda, y.lambda);
  EXPECT_NEAR(x.lambda[0] + x.lambda[1], 1.0, 1e-12);
  EXPECT_NE(sample_weight(grid, 43).lambda, x.lambda);
}

TEST(SampleWeight, DuplicateCellRejected) {
  std::vector<CellKey> grid{{"a", "m", "p"}, {"a", "m", "p"}};
  EXPECT_THROW((void)sample_weight(grid, 1), InvalidInput);
}

TEST(SampleWeight, MeanUniformOnFullFactorial) {
  std::vector<CellKey> grid;
  for (auto d : {"d1", "d2"})
    for (auto m : {"m1", "m2"})
      for (auto p : {"p1", "p2"}) grid.push_back({d, m, p});
  const int n = 100000;
  auto samples = draw_weight_samples(grid, n, 7);
  for (std::size_t c = 0; c < grid.size(); ++c) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : samples) {
      sum += s.lambda[c];
      sum2 += s.lambda[c] * s.lambda[c];
    }
    double mean = sum / n;
    double se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 1.0 / 8.0, 3.0 * se) << grid[c].str();
  }
  for (const auto& s : samples) {
    double total = 0.0;
    for (double l : s.lambda) {
      EXPECT_GE(l, 0.0);
      total += l;
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(SampleWeight, UnbalancedGridFollowsHierarchy) {
  // One dataset with two models, another with one: E[lambda] = 1/4, 1/4, 1/2.
  std::vector<CellKey> grid{{"a", "m1", "p"}, {"a", "m2", "p"}, {"b", "m1", "p"}};
  const int n = 100000;
  auto samples = draw_weight_samples(grid, n, 3);
  const double expect[] = {0.25, 0.25, 0.5};
  for (std::size_t c = 0; c < 3; ++c) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& s : samples) sum += s.lambda[c], sum2 += s.lambda[c] * s.lambda[c];
    double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, expect[c], 3.0 * se);
  }
}

TEST(MixProbabilities, ConvexAndExactOnTies) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::vector<CellKey> grid{{"a", "m", "p"}, {"b", "m", "p"}, {"b", "n", "p"}};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p{u(rng), u(rng), u(rng)};
    auto w = sample_weight(grid, static_cast<std::uint64_t>(trial)).lambda;
    double m = mix_probabilities(p, w);
    EXPECT_GE(m, *std::min_element(p.begin(), p.end()));
    EXPECT_LE(m, *std::max_element(p.begin(), p.end()));
    std::vector<double> same(3, p[0]);
    EXPECT_EQ(mix_probabilities(same, w), p[0]);
  }
}

TEST(GptScore, SingleCellCollapses) {
  std::vector<ContrastiveCell> cells{cell("d", "m", "p", 2, 6, 20)};
  auto s = gpt_score("delv", cells, 1000, 5);
  double lor = compute_lor(cells[0], "delv");
  EXPECT_EQ(s.score, lor);
  EXPECT_EQ(s.lo95, lor);
  EXPECT_EQ(s.hi95, lor);
  EXPECT_EQ(s.n_samples, 1000);
  EXPECT_EQ(s.n_cells, 1);
}

TEST(GptScore, EqualCellsCollapse) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 2, 6, 20), cell("b", "m", "p", 2, 6, 20),
                                     cell("b", "n", "q", 2, 6, 20)};
  auto s = gpt_score("delv", cells, 500, 5);
  double lor = compute_lor(cells[0], "delv");
  EXPECT_EQ(s.score, lor);
  EXPECT_EQ(s.lo95, lor);
  EXPECT_EQ(s.hi95, lor);
}

TEST(GptScore, MatchesIndependentReimplementation) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 1, 7, 30), cell("a", "n", "p", 3, 9, 25),
                                     cell("b", "m", "p", 0, 4, 40)};
  const int n = 400;
  const std::uint64_t seed = 17;
  auto s = gpt_score("delv", cells, n, seed);
  std::vector<CellKey> grid;
  for (const auto& c : cells) grid.push_back(c.key);
  std::vector<double> lor;
  for (int i = 0; i < n; ++i) {
    auto w = sample_weight(grid, derive_seed(seed, "gptscore.weights", static_cast<std::uint64_t>(i))).lambda;
    double h = 0.0, g = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      h += w[c] * doc_probability(cells[c].human_docs, "delv");
      g += w[c] * doc_probability(cells[c].edited_docs, "delv");
    }
    lor.push_back(std::log(g / (1 - g)) - std::log(h / (1 - h)));
  }
  EXPECT_NEAR(s.score, quantile7(lor, 0.5), 1e-12);
  EXPECT_NEAR(s.lo95, quantile7(lor, 0.025), 1e-12);
  EXPECT_NEAR(s.hi95, quantile7(lor, 0.975), 1e-12);
  EXPECT_LE(s.lo95, s.score);
  EXPECT_LE(s.score, s.hi95);
}

TEST(GptScore, AntisymmetricUnderSideSwap) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 1, 7, 30), cell("b", "m", "p", 5, 2, 30)};
  std::vector<ContrastiveCell> swapped;
  for (const auto& c : cells) swapped.push_back({c.key, c.edited_docs, c.human_docs});
  auto a = gpt_score("delv", cells, 301, 9), b = gpt_score("delv", swapped, 301, 9);
  EXPECT_NEAR(a.score, -b.score, 1e-12);
  EXPECT_NEAR(a.lo95, -b.hi95, 1e-12);
}

TEST(GptScore, DeterministicForSeed) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 1, 7, 30), cell("b", "m", "p", 5, 2, 30)};
  auto a = gpt_score("delv", cells, 200, 1), b = gpt_score("delv", cells, 200, 1);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.lo95, b.lo95);
  EXPECT_EQ(a.hi95, b.hi95);
}

TEST(GptScore, PositiveWhenEveryCellIsPositive) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ContrastiveCell> cells;
    for (int c = 0; c < 3; ++c) {
      int kh = static_cast<int>(rng() % 5);
      int ke = kh + 1 + static_cast<int>(rng() % 10);
      cells.push_back(cell("d" + std::to_string(c), "m", "p", kh, ke, 30));
    }
    for (const auto& c : cells) ASSERT_GT(compute_lor(c, "delv"), 0.0);
    // Every mixture has g > h, so every draw is positive.
    auto s = gpt_score("delv", cells, 200, static_cast<std::uint64_t>(trial));
    EXPECT_GT(s.lo95, 0.0);
  }
}

TEST(ScoreVocabulary, SaturatedWordsReported) {
  std::vector<ContrastiveCell> cells{cell("a", "m", "p", 1, 7, 10)};
  for (auto& d : cells[0].edited_docs) d.insert("everywhere");
  std::vector<CellCounts> counts(cells.begin(), cells.end());
  auto r = score_vocabulary(counts, 100, 3);
  // "filler" is in every document on both sides.
  EXPECT_EQ(r.saturated, (std::vector<std::string>{"everywhere", "filler"}));
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_EQ(r.scores[0].word, "delv");
}

namespace {

fs::path make_dir(const std::string& name) {
  fs::path d = fs::path(::testing::TempDir()) / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

}  // namespace

TEST(ContrastiveDir, LoadsCellsAndDropsFailedEdits) {
  auto d = make_dir("contrastive_ok");
  write(d / "arxiv__gpt__polish.human.txt", "We study running.\nA second line.\nThird one here.\n");
  write(d / "arxiv__gpt__polish.edited.txt", "We delve into running.\n\nThird one delves here.\n");
  auto load = load_contrastive_dir(d.string());
  ASSERT_EQ(load.cells.size(), 1u);
  EXPECT_TRUE(load.failures.empty());
  EXPECT_EQ(load.dropped_pairs, 1u);
  const auto& c = load.cells[0];
  EXPECT_EQ(c.key.str(), "arxiv__gpt__polish");
  ASSERT_EQ(c.human_docs.size(), 2u);
  EXPECT_EQ(c.human_docs[0], (StemSet{"run", "studi"}));
  EXPECT_TRUE(c.edited_docs[1].contains("delv"));
  EXPECT_FALSE(c.human_docs[1].contains("delv"));
}

TEST(ContrastiveDir, MisalignedCellIsReportedNotFatal) {
  auto d = make_dir("contrastive_bad");
  write(d / "a__m__p.human.txt", "one\ntwo\n");
  write(d / "a__m__p.edited.txt", "one\n");
  write(d / "b__m__p.human.txt", "one\n");
  write(d / "b__m__p.edited.txt", "one delve\n");
  write(d / "c__m__p.human.txt", "orphan\n");
  auto load = load_contrastive_dir(d.string());
  ASSERT_EQ(load.cells.size(), 1u);
  EXPECT_EQ(load.cells[0].key.dataset, "b");
  EXPECT_EQ(load.failures.size(), 2u);
}

TEST(ScoreCsv, RoundTrip) {
  std::vector<GptScore> scores{{"delv", 2.5, 2.0, 3.0, 100, 4}, {"realm", -0.25, -0.5, 0.125, 100, 4}};
  auto p = fs::path(::testing::TempDir()) / "scores.csv";
  write_score_csv(p.string(), scores);
  auto back = read_score_csv(p.string());
  ASSERT_EQ(back.size(), 2u);
  EXPECT_DOUBLE_EQ(back.at("delv").score, 2.5);
  EXPECT_DOUBLE_EQ(back.at("realm").hi95, 0.125);
  EXPECT_EQ(back.at("realm").n_cells, 4);
}

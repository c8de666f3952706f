#pragma once

// Contrastive word-preference scoring: per-cell log-odds ratios between human
// texts and their LLM-edited versions, aggregated over (dataset, model, prompt)
// cells with hierarchical Dirichlet weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lexshift/common.hpp"
#include "lexshift/porter.hpp"
#include "lexshift/random.hpp"
#include "lexshift/stats.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

struct CellKey {
  std::string dataset;
  std::string model;
  std::string prompt;

  auto operator<=>(const CellKey&) const = default;
  [[nodiscard]] std::string str() const { return dataset + "__" + model + "__" + prompt; }
};

/// Human documents and their edited counterparts for one grid cell. Index i on
/// both sides is the same source text; failed edits are absent from both.
struct ContrastiveCell {
  CellKey key;
  std::vector<StemSet> human_docs;
  std::vector<StemSet> edited_docs;

  void validate() const {
    if (human_docs.empty() || edited_docs.empty())
      throw InvalidInput("cell " + key.str() + " has no documents");
    if (human_docs.size() != edited_docs.size())
      throw InvalidInput("cell " + key.str() + " is not pairwise aligned");
  }
};

/// Smoothed document probability (k + 1) / (n + 1).
[[nodiscard]] inline double smoothed_probability(std::int64_t containing, std::int64_t total) {
  return static_cast<double>(containing + 1) / static_cast<double>(total + 1);
}

[[nodiscard]] inline double doc_probability(std::span<const StemSet> docs, const std::string& word) {
  if (docs.empty()) throw InvalidInput("doc_probability: no documents");
  auto k = std::count_if(docs.begin(), docs.end(), [&](const StemSet& d) { return d.contains(word); });
  return smoothed_probability(k, static_cast<std::int64_t>(docs.size()));
}

/// ln(p / (1 - p)). Throws SaturationError when p >= 1.
[[nodiscard]] inline double log_odds(double p) {
  if (p >= 1.0) throw SaturationError("log-odds undefined at p = 1");
  if (!(p > 0.0)) throw InvalidInput("log-odds requires p > 0");
  return std::log(p / (1.0 - p));
}

[[nodiscard]] inline double compute_lor(const ContrastiveCell& cell, const std::string& word) {
  cell.validate();
  double p_gpt = doc_probability(cell.edited_docs, word);
  double p_human = doc_probability(cell.human_docs, word);
  return log_odds(p_gpt) - log_odds(p_human);
}

/// Words that are frequent only because of the editing prompts themselves.
/// "claritiy" is the misspelling found in the original list; both spellings
/// are excluded.
inline const std::vector<std::string>& prompt_exclusion_words() {
  static const std::vector<std::string> words = {"rephrase", "polish",   "dear",    "text",
                                                 "certainly", "subject", "readable", "clarity",
                                                 "claritiy", "enhance",  "version", "title"};
  return words;
}

/// Per-cell containment counts, computed once and reused for every word.
struct CellCounts {
  CellKey key;
  std::int64_t n_human = 0;
  std::int64_t n_edited = 0;
  std::unordered_map<std::string, std::int64_t> human;
  std::unordered_map<std::string, std::int64_t> edited;

  explicit CellCounts(const ContrastiveCell& cell) : key(cell.key) {
    cell.validate();
    n_human = static_cast<std::int64_t>(cell.human_docs.size());
    n_edited = static_cast<std::int64_t>(cell.edited_docs.size());
    for (const auto& d : cell.human_docs)
      for (const auto& w : d) ++human[w];
    for (const auto& d : cell.edited_docs)
      for (const auto& w : d) ++edited[w];
  }

  [[nodiscard]] std::int64_t human_count(const std::string& w) const {
    auto it = human.find(w);
    return it == human.end() ? 0 : it->second;
  }
  [[nodiscard]] std::int64_t edited_count(const std::string& w) const {
    auto it = edited.find(w);
    return it == edited.end() ? 0 : it->second;
  }
  [[nodiscard]] double p_human(const std::string& w) const { return smoothed_probability(human_count(w), n_human); }
  [[nodiscard]] double p_gpt(const std::string& w) const { return smoothed_probability(edited_count(w), n_edited); }
};

/// Keeps stems whose raw document frequency reaches `threshold` on the human
/// or the edited side of at least one cell, minus the stemmed prompt words.
[[nodiscard]] inline std::set<std::string> vocabulary_filter(std::span<const CellCounts> cells,
                                                             double threshold = 0.001) {
  if (cells.empty()) throw InvalidInput("vocabulary_filter: no cells");
  // Inclusive boundary, tolerant of the rounding in threshold * n.
  auto reaches = [threshold](std::int64_t k, std::int64_t n) {
    return static_cast<double>(k) >= threshold * static_cast<double>(n) * (1.0 - 1e-12);
  };
  std::set<std::string> kept;
  for (const auto& c : cells) {
    for (const auto& [w, k] : c.human)
      if (k > 0 && reaches(k, c.n_human)) kept.insert(w);
    for (const auto& [w, k] : c.edited)
      if (k > 0 && reaches(k, c.n_edited)) kept.insert(w);
  }
  for (const auto& w : prompt_exclusion_words()) {
    kept.erase(w);
    kept.erase(porter_stem(w));
  }
  return kept;
}

[[nodiscard]] inline std::set<std::string> vocabulary_filter(std::span<const ContrastiveCell> cells,
                                                             double threshold = 0.001) {
  std::vector<CellCounts> counts(cells.begin(), cells.end());
  return vocabulary_filter(std::span<const CellCounts>(counts), threshold);
}

/// One draw of grid weights lambda(d, m, p), aligned with the grid order.
struct WeightSample {
  std::vector<double> lambda;
};

namespace detail {

inline std::vector<double> flat_dirichlet(Rng& rng, std::size_t k) {
  std::vector<double> x(k);
  if (k == 1) {
    x[0] = 1.0;
    return x;
  }
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (auto& v : x) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : x) v /= total;
  return x;
}

}  // namespace detail

/// Draws P(D) ~ Dir(1), P(M|D) ~ Dir(1) per dataset and P(P|D,M) ~ Dir(1) per
/// (dataset, model), restricted to the categories present in the grid, and
/// returns their normalized product for each cell.
[[nodiscard]] inline WeightSample sample_weight(std::span<const CellKey> grid, std::uint64_t rng_seed) {
  if (grid.empty()) throw InvalidInput("sample_weight: empty grid");
  std::map<std::string, std::map<std::string, std::set<std::string>>> tree;
  for (const auto& c : grid) {
    if (!tree[c.dataset][c.model].insert(c.prompt).second)
      throw InvalidInput("duplicate grid cell " + c.str());
  }
  Rng rng(rng_seed);
  std::map<CellKey, double> weight;
  auto p_d = detail::flat_dirichlet(rng, tree.size());
  std::size_t di = 0;
  for (const auto& [d, models] : tree) {
    auto p_m = detail::flat_dirichlet(rng, models.size());
    std::size_t mi = 0;
    for (const auto& [m, prompts] : models) {
      auto p_p = detail::flat_dirichlet(rng, prompts.size());
      std::size_t pi = 0;
      for (const auto& p : prompts) weight[{d, m, p}] = p_d[di] * p_m[mi] * p_p[pi++];
      ++mi;
    }
    ++di;
  }
  WeightSample out;
  out.lambda.reserve(grid.size());
  double total = 0.0;
  for (const auto& c : grid) {
    out.lambda.push_back(weight.at(c));
    total += out.lambda.back();
  }
  for (auto& l : out.lambda) l /= total;
  return out;
}

/// Weight draws for sample s use the substream derive_seed(root, "gptscore.weights", s).
[[nodiscard]] inline std::vector<WeightSample> draw_weight_samples(std::span<const CellKey> grid, int n_samples,
                                                                   std::uint64_t rng_seed) {
  if (n_samples < 1) throw InvalidInput("n_samples must be positive");
  std::vector<WeightSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int s = 0; s < n_samples; ++s)
    out.push_back(sample_weight(grid, derive_seed(rng_seed, "gptscore.weights", static_cast<std::uint64_t>(s))));
  return out;
}

/// Convex combination sum_i lambda_i * p_i, written relative to p_0 so that
/// equal inputs reproduce p_0 exactly, then clamped to [min p, max p].
[[nodiscard]] inline double mix_probabilities(std::span<const double> p, std::span<const double> lambda) {
  double acc = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) acc += lambda[i] * (p[i] - p[0]);
  auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  return std::clamp(p[0] + acc, *lo, *hi);
}

struct GptScore {
  std::string word;
  double score = 0.0;  // median LOR over the weight samples
  double lo95 = 0.0;
  double hi95 = 0.0;
  int n_samples = 0;
  int n_cells = 0;
};

/// Scores one word against precomputed cell counts and weight draws.
[[nodiscard]] inline GptScore gpt_score(const std::string& word, std::span<const CellCounts> cells,
                                        std::span<const WeightSample> samples) {
  if (cells.empty()) throw InvalidInput("gpt_score: no cells");
  if (samples.empty()) throw InvalidInput("gpt_score: no weight samples");
  std::vector<double> ph, pg;
  for (const auto& c : cells) {
    ph.push_back(c.p_human(word));
    pg.push_back(c.p_gpt(word));
  }
  std::vector<double> lor;
  lor.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.lambda.size() != cells.size()) throw InvalidInput("weight sample does not match the grid");
    double h = mix_probabilities(ph, s.lambda);
    double g = mix_probabilities(pg, s.lambda);
    if (h >= 1.0 || g >= 1.0)
      throw SaturationError("weighted probability of '" + word + "' reached 1");
    lor.push_back(log_odds(g) - log_odds(h));
  }
  std::sort(lor.begin(), lor.end());
  return GptScore{word,
                  stats::quantile_sorted(lor, 0.5),
                  stats::quantile_sorted(lor, 0.025),
                  stats::quantile_sorted(lor, 0.975),
                  static_cast<int>(samples.size()),
                  static_cast<int>(cells.size())};
}

[[nodiscard]] inline std::vector<CellKey> grid_of(std::span<const CellCounts> cells) {
  std::vector<CellKey> g;
  for (const auto& c : cells) g.push_back(c.key);
  return g;
}

[[nodiscard]] inline GptScore gpt_score(const std::string& word, std::span<const ContrastiveCell> cells,
                                        int n_samples, std::uint64_t rng_seed) {
  std::vector<CellCounts> counts(cells.begin(), cells.end());
  auto samples = draw_weight_samples(grid_of(counts), n_samples, rng_seed);
  return gpt_score(word, counts, samples);
}

struct ScoringResult {
  std::vector<GptScore> scores;        // sorted by score descending, then word
  std::vector<std::string> saturated;  // dropped: a weighted probability reached 1
};

/// Full flow: vocabulary filter, weight draws, per-word scores.
[[nodiscard]] inline ScoringResult score_vocabulary(std::span<const CellCounts> cells, int n_samples,
                                                    std::uint64_t rng_seed, double threshold = 0.001) {
  auto vocab = vocabulary_filter(cells, threshold);
  auto samples = draw_weight_samples(grid_of(cells), n_samples, rng_seed);
  ScoringResult out;
  for (const auto& w : vocab) {
    try {
      out.scores.push_back(gpt_score(w, cells, samples));
    } catch (const SaturationError&) {
      out.saturated.push_back(w);
    }
  }
  std::sort(out.scores.begin(), out.scores.end(), [](const GptScore& a, const GptScore& b) {
    return std::tie(b.score, a.word) < std::tie(a.score, b.word);
  });
  return out;
}

}  // namespace lexshift

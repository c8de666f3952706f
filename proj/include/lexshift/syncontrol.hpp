#pragma once

// Synthetic control for word-frequency series: donor selection, simplex-weight
// fitting on the pre-treatment months, MSPE-ratio placebo inference across the
// donor pool, and in-time placebos with earlier fake treatment dates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "lexshift/calendar.hpp"
#include "lexshift/common.hpp"
#include "lexshift/corpus.hpp"
#include "lexshift/embeddings.hpp"
#include "lexshift/gptscore.hpp"
#include "lexshift/random.hpp"
#include "lexshift/simplex_ls.hpp"

namespace lexshift {

enum class DonorStrategy { untreated, synonym, random };

[[nodiscard]] inline std::string to_string(DonorStrategy s) {
  switch (s) {
    case DonorStrategy::untreated: return "untreated";
    case DonorStrategy::synonym: return "synonym";
    case DonorStrategy::random: return "random";
  }
  return "?";
}

[[nodiscard]] inline DonorStrategy parse_strategy(std::string_view s) {
  if (s == "untreated") return DonorStrategy::untreated;
  if (s == "synonym") return DonorStrategy::synonym;
  if (s == "random") return DonorStrategy::random;
  throw InvalidInput("unknown donor strategy '" + std::string(s) + "'");
}

struct DonorPool {
  std::string treated;
  DonorStrategy strategy = DonorStrategy::untreated;
  std::vector<std::string> donors;
};

/// Restricts donor candidates, e.g. to words that have a frequency series.
using WordFilter = std::function<bool(const std::string&)>;

namespace detail {

inline std::vector<std::string> nearest_by_cosine(const std::string& treated, std::vector<std::string> candidates,
                                                  const EmbeddingStore& emb, int pool_size) {
  std::vector<std::pair<double, std::string>> ranked;
  ranked.reserve(candidates.size());
  for (auto& c : candidates) ranked.emplace_back(emb.cosine(treated, c), std::move(c));
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return std::tie(b.first, a.second) < std::tie(a.first, b.second);
  });
  std::vector<std::string> out;
  for (int i = 0; i < pool_size; ++i) out.push_back(std::move(ranked[static_cast<std::size_t>(i)].second));
  return out;
}

inline void check_pool_size(int pool_size) {
  if (pool_size < 1) throw InvalidInput("pool size must be positive");
}

}  // namespace detail

/// The 10% of scored, embedded words with GPT score closest to zero, then the
/// `pool_size` of those nearest to the treated word by cosine similarity. Ties
/// are broken lexicographically.
[[nodiscard]] inline DonorPool select_donors_untreated(const std::string& treated,
                                                       const std::map<std::string, GptScore>& scores,
                                                       const EmbeddingStore& embeddings, int pool_size = 100,
                                                       const WordFilter& allow = {}) {
  detail::check_pool_size(pool_size);
  if (!embeddings.contains(treated)) throw InvalidInput("treated word '" + treated + "' has no embedding");
  std::vector<std::pair<double, std::string>> universe;
  for (const auto& [w, s] : scores) {
    if (w == treated || !embeddings.contains(w) || (allow && !allow(w))) continue;
    universe.emplace_back(std::abs(s.score), w);
  }
  if (universe.size() < static_cast<std::size_t>(10 * pool_size))
    throw InfeasibleError("untreated donors: " + std::to_string(universe.size()) +
                          " scored words with embeddings, need at least " + std::to_string(10 * pool_size));
  std::sort(universe.begin(), universe.end());
  std::size_t keep = (universe.size() + 9) / 10;
  std::vector<std::string> candidates;
  for (std::size_t i = 0; i < keep; ++i) candidates.push_back(universe[i].second);
  if (candidates.size() < static_cast<std::size_t>(pool_size))
    throw InfeasibleError("untreated donors: fewer than pool_size candidates survive");
  return {treated, DonorStrategy::untreated, detail::nearest_by_cosine(treated, std::move(candidates), embeddings, pool_size)};
}

/// The `pool_size` embedded words most similar to the treated word.
[[nodiscard]] inline DonorPool select_donors_synonym(const std::string& treated, const EmbeddingStore& embeddings,
                                                     int pool_size = 100, const WordFilter& allow = {}) {
  detail::check_pool_size(pool_size);
  if (!embeddings.contains(treated)) throw InvalidInput("treated word '" + treated + "' has no embedding");
  std::vector<std::string> candidates;
  for (const auto& [w, v] : embeddings.vectors())
    if (w != treated && (!allow || allow(w))) candidates.push_back(w);
  if (candidates.size() < static_cast<std::size_t>(pool_size))
    throw InfeasibleError("synonym donors: only " + std::to_string(candidates.size()) + " candidates for pool of " +
                          std::to_string(pool_size));
  return {treated, DonorStrategy::synonym, detail::nearest_by_cosine(treated, std::move(candidates), embeddings, pool_size)};
}

/// Uniform sample without replacement from `vocab` minus the treated word.
[[nodiscard]] inline DonorPool select_donors_random(const std::string& treated, std::span<const std::string> vocab,
                                                    int pool_size, std::uint64_t rng_seed) {
  detail::check_pool_size(pool_size);
  std::vector<std::string> candidates;
  for (const auto& w : vocab)
    if (w != treated) candidates.push_back(w);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() < static_cast<std::size_t>(pool_size))
    throw InfeasibleError("random donors: only " + std::to_string(candidates.size()) + " candidates for pool of " +
                          std::to_string(pool_size));
  Rng rng(rng_seed);
  std::vector<std::string> donors;
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(donors), pool_size, rng);
  return {treated, DonorStrategy::random, std::move(donors)};
}

/// Treated and donor series aligned on a common month grid.
struct SeriesPanel {
  std::vector<YearMonth> months;
  std::string treated;
  Eigen::VectorXd y;
  std::vector<std::string> donors;
  Eigen::MatrixXd X;  // months x donors

  [[nodiscard]] Eigen::Index n_months() const { return static_cast<Eigen::Index>(months.size()); }

  /// Number of leading months at or before `event` (months are ascending).
  [[nodiscard]] Eigen::Index pre_count(YearMonth event) const {
    return static_cast<Eigen::Index>(std::upper_bound(months.begin(), months.end(), event) - months.begin());
  }
};

/// Builds the panel for a pool. Months where any series has no documents are
/// dropped when `exclude_empty_months` is set.
[[nodiscard]] inline SeriesPanel make_panel(const DonorPool& pool, const FrequencyStore& store,
                                            bool exclude_empty_months = true) {
  auto find = [&](const std::string& w) -> const FrequencySeries& {
    auto it = store.find(w);
    if (it == store.end()) throw InvalidInput("no frequency series for '" + w + "'");
    return it->second;
  };
  const auto& t = find(pool.treated);
  std::vector<const FrequencySeries*> ds;
  for (const auto& d : pool.donors) {
    if (d == pool.treated) throw InvalidInput("treated word '" + d + "' listed as its own donor");
    const auto& s = find(d);
    if (s.first_month != t.first_month || s.size() != t.size())
      throw InvalidInput("series of '" + d + "' is not on the month grid of '" + pool.treated + "'");
    ds.push_back(&s);
  }
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < t.size(); ++i) {
    bool empty = t.is_empty_month(i);
    for (auto* s : ds) empty = empty || s->is_empty_month(i);
    if (!exclude_empty_months || !empty) rows.push_back(i);
  }
  SeriesPanel panel;
  panel.treated = pool.treated;
  panel.donors = pool.donors;
  panel.y.resize(static_cast<Eigen::Index>(rows.size()));
  panel.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ds.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto ri = static_cast<Eigen::Index>(r);
    panel.months.push_back(t.month(rows[r]));
    panel.y(ri) = t.log_rel_freq[rows[r]];
    for (std::size_t j = 0; j < ds.size(); ++j) panel.X(ri, static_cast<Eigen::Index>(j)) = ds[j]->log_rel_freq[rows[r]];
  }
  return panel;
}

/// Ratio of post- to pre-treatment MSPE; the ratio is absent when the
/// pre-treatment MSPE is below 1e-15.
struct MspeSummary {
  double pre_mspe = 0.0;
  double post_mspe = 0.0;
  std::optional<double> ratio;
  Eigen::Index n_pre = 0;
  Eigen::Index n_post = 0;
};

inline constexpr double kDegeneratePreMspe = 1e-15;

/// MSPE split at `n_pre`: rows [0, n_pre) are pre-treatment.
[[nodiscard]] inline MspeSummary mspe_ratio(const Eigen::VectorXd& actual, const Eigen::VectorXd& synthetic,
                                            Eigen::Index n_pre) {
  if (actual.size() != synthetic.size()) throw InvalidInput("mspe_ratio: length mismatch");
  if (n_pre < 1 || n_pre >= actual.size())
    throw InvalidInput("mspe_ratio: event must fall strictly inside the series window");
  MspeSummary m;
  m.n_pre = n_pre;
  m.n_post = actual.size() - n_pre;
  Eigen::VectorXd gap = actual - synthetic;
  m.pre_mspe = gap.head(n_pre).squaredNorm() / static_cast<double>(m.n_pre);
  m.post_mspe = gap.tail(m.n_post).squaredNorm() / static_cast<double>(m.n_post);
  if (m.pre_mspe >= kDegeneratePreMspe) m.ratio = m.post_mspe / m.pre_mspe;
  return m;
}

/// MSPE summary for given weights, with the event month counted as pre-treatment.
[[nodiscard]] inline MspeSummary mspe_ratio(const SeriesPanel& panel, const Eigen::VectorXd& weights, YearMonth event) {
  if (weights.size() != panel.X.cols()) throw InvalidInput("mspe_ratio: weight count mismatch");
  return mspe_ratio(panel.y, panel.X * weights, panel.pre_count(event));
}

struct SyntheticFit {
  std::vector<std::string> donors;
  Eigen::VectorXd weights;
  Eigen::VectorXd synthetic;  // per panel month
  MspeSummary mspe;
  bool converged = true;
};

namespace detail {

inline SyntheticFit fit_rows(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, Eigen::Index n_pre) {
  if (n_pre < 2) throw InvalidInput("synthetic control needs at least 2 pre-treatment months");
  auto w = fit_weights(y.head(n_pre), X.topRows(n_pre));
  SyntheticFit fit;
  fit.weights = std::move(w.weights);
  fit.converged = w.converged;
  fit.synthetic = X * fit.weights;
  fit.mspe = mspe_ratio(y, fit.synthetic, n_pre);
  return fit;
}

// Runs body(i) for i in [0, n) on a few threads; results are written by index.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t threads = std::min<std::size_t>(hw, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Fits weights on months at or before `event` and evaluates the whole window.
[[nodiscard]] inline SyntheticFit fit_synthetic(const SeriesPanel& panel, YearMonth event) {
  auto fit = detail::fit_rows(panel.y, panel.X, panel.pre_count(event));
  fit.donors = panel.donors;
  return fit;
}

/// (1 + #{donor ratios >= treated}) / (#donors + 1).
[[nodiscard]] inline double placebo_p_value(double treated_ratio, std::span<const double> donor_ratios) {
  auto at_least = std::count_if(donor_ratios.begin(), donor_ratios.end(), [&](double r) { return r >= treated_ratio; });
  return static_cast<double>(1 + at_least) / static_cast<double>(donor_ratios.size() + 1);
}

struct PlaceboOutcome {
  double treated_ratio = 0.0;
  std::vector<std::string> donors;
  std::vector<std::optional<double>> donor_ratios;  // absent: degenerate pre-MSPE
  std::size_t excluded = 0;
  double p_value = 1.0;
};

inline constexpr std::size_t kMinPlaceboRatios = 19;

/// Treats every donor in turn as the treated word, with the other donors as its
/// pool, and ranks the treated word's MSPE ratio among theirs.
[[nodiscard]] inline PlaceboOutcome placebo_test(const SeriesPanel& panel, YearMonth event,
                                                 std::size_t min_ratios = kMinPlaceboRatios) {
  const Eigen::Index n_pre = panel.pre_count(event);
  auto treated = detail::fit_rows(panel.y, panel.X, n_pre);
  if (!treated.mspe.ratio) throw InvalidInput("placebo test: treated fit has degenerate pre-treatment MSPE");
  const auto p = static_cast<std::size_t>(panel.X.cols());
  if (p < 2) throw InfeasibleError("placebo test needs at least 2 donors");

  PlaceboOutcome out;
  out.treated_ratio = *treated.mspe.ratio;
  out.donors = panel.donors;
  out.donor_ratios.resize(p);
  detail::parallel_for(p, [&](std::size_t j) {
    Eigen::MatrixXd others(panel.X.rows(), static_cast<Eigen::Index>(p - 1));
    for (std::size_t c = 0, k = 0; c < p; ++c)
      if (c != j) others.col(static_cast<Eigen::Index>(k++)) = panel.X.col(static_cast<Eigen::Index>(c));
    out.donor_ratios[j] = detail::fit_rows(panel.X.col(static_cast<Eigen::Index>(j)), others, n_pre).mspe.ratio;
  });
  std::vector<double> valid;
  for (const auto& r : out.donor_ratios) {
    if (r)
      valid.push_back(*r);
    else
      ++out.excluded;
  }
  if (valid.size() < min_ratios)
    throw InfeasibleError("placebo test: only " + std::to_string(valid.size()) + " computable donor ratios, need " +
                          std::to_string(min_ratios));
  out.p_value = placebo_p_value(out.treated_ratio, valid);
  return out;
}

struct InTimePlaceboResult {
  YearMonth true_month;
  std::optional<double> true_ratio;
  std::vector<YearMonth> fake_months;           // most recent first
  std::vector<std::optional<double>> ratios;    // per fake month
  std::vector<YearMonth> skipped;               // fewer than min_pre_months before them

  /// True when the true-date ratio is defined and exceeds every defined fake ratio.
  [[nodiscard]] bool peaks_at_true_date() const {
    if (!true_ratio) return false;
    for (const auto& r : ratios)
      if (r && *r >= *true_ratio) return false;
    return true;
  }
};

/// Refits the synthetic control with the treatment moved to fake months every
/// `spacing` months over the `n_fake * spacing` months before the true event.
[[nodiscard]] inline InTimePlaceboResult in_time_placebo(const SeriesPanel& panel, YearMonth true_event, int n_fake = 8,
                                                         int spacing = 3, int min_pre_months = 12) {
  if (panel.months.empty() || months_between(panel.months.front(), true_event) < n_fake * spacing)
    throw InvalidInput("in-time placebo: window must cover " + std::to_string(n_fake * spacing) +
                       " months before the event");
  InTimePlaceboResult out;
  out.true_month = true_event;
  out.true_ratio = fit_synthetic(panel, true_event).mspe.ratio;
  for (int k = 1; k <= n_fake; ++k) {
    YearMonth fake = true_event.plus(-k * spacing);
    if (panel.pre_count(fake) < min_pre_months) {
      out.skipped.push_back(fake);
      continue;
    }
    out.fake_months.push_back(fake);
    out.ratios.push_back(fit_synthetic(panel, fake).mspe.ratio);
  }
  return out;
}

}  // namespace lexshift

#pragma once

// Simulated word-frequency panels with known adoption effects, and the
// end-to-end pipeline (random donors, synthetic control, placebo, in-time
// placebo, DiD) evaluated against that ground truth.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lexshift/calendar.hpp"
#include "lexshift/common.hpp"
#include "lexshift/corpus.hpp"
#include "lexshift/didreg.hpp"
#include "lexshift/random.hpp"
#include "lexshift/syncontrol.hpp"

namespace lexshift {

struct WordSpec {
  std::string word;
  double baseline = -2.0;  // log10 containment probability at the window start
  double delta = 0.0;      // extra log10 slope per year after the event
  bool treated = false;    // evaluated as a treated word; other words form the donor universe
};

struct AdoptionScenario {
  int n_months_pre = 48;
  int n_months_post = 18;
  std::int64_t docs_per_month = 50000;
  YearMonth start{2018, 12};
  double slope = 0.0;  // common log10 trend per year
  double noise_sd = 0.05;
  std::vector<WordSpec> vocab;
  std::uint64_t seed = 1;

  [[nodiscard]] int n_months() const { return n_months_pre + n_months_post; }
  /// Last pre-treatment month.
  [[nodiscard]] YearMonth event_month() const { return start.plus(n_months_pre - 1); }
  [[nodiscard]] double t_event() const { return (n_months_pre - 1) / 12.0; }
  [[nodiscard]] double t_of(int month_index) const { return month_index / 12.0; }

  /// Noise-free latent log10 probability.
  [[nodiscard]] double trend(const WordSpec& w, int month_index) const {
    double t = t_of(month_index);
    return w.baseline + slope * t + w.delta * std::max(0.0, t - t_event());
  }

  void validate() const {
    if (n_months_pre < 2 || n_months_post < 1) throw InvalidInput("scenario: need >= 2 pre and >= 1 post months");
    if (docs_per_month < 1) throw InvalidInput("scenario: docs_per_month must be positive");
    if (!(noise_sd >= 0.0)) throw InvalidInput("scenario: noise_sd must be non-negative");
    std::size_t treated = 0;
    std::map<std::string, int> seen;
    for (const auto& w : vocab) {
      if (seen[w.word]++) throw InvalidInput("scenario: duplicate word '" + w.word + "'");
      if (w.treated) ++treated;
      // Trends are piecewise linear, so the extremes sit at the end points or the event.
      for (int i : {0, n_months_pre - 1, n_months() - 1}) {
        double x = trend(w, i);
        if (!(x < 0.0) || !std::isfinite(x))
          throw InvalidInput("scenario: latent probability of '" + w.word + "' leaves (0, 1)");
      }
    }
    std::size_t nulls = vocab.size() - treated;
    if (treated == 0) throw InvalidInput("scenario: no treated word");
    if (nulls < 20 * treated) throw InvalidInput("scenario: need at least 20 null words per treated word");
  }
};

/// Generator settings for a standard scenario: `n_treated` words with effect
/// `treated_delta` and `n_null` words without, baselines uniform in
/// [baseline_min, baseline_max].
struct ScenarioParams {
  int n_months_pre = 48;
  int n_months_post = 18;
  std::int64_t docs_per_month = 50000;
  YearMonth start{2018, 12};
  double slope = 0.0;
  double noise_sd = 0.05;
  int n_treated = 1;
  int n_null = 100;
  double treated_delta = 0.15;
  double baseline_min = -2.0;
  double baseline_max = -1.0;
  std::uint64_t seed = 1;
};

[[nodiscard]] inline AdoptionScenario make_scenario(const ScenarioParams& p) {
  AdoptionScenario s;
  s.n_months_pre = p.n_months_pre;
  s.n_months_post = p.n_months_post;
  s.docs_per_month = p.docs_per_month;
  s.start = p.start;
  s.slope = p.slope;
  s.noise_sd = p.noise_sd;
  s.seed = p.seed;
  Rng rng = make_rng(p.seed, "sim.baselines");
  std::uniform_real_distribution<double> base(p.baseline_min, p.baseline_max);
  char name[32];
  for (int i = 0; i < p.n_treated; ++i) {
    std::snprintf(name, sizeof name, "treat%03d", i);
    s.vocab.push_back({name, base(rng), p.treated_delta, true});
  }
  for (int i = 0; i < p.n_null; ++i) {
    std::snprintf(name, sizeof name, "null%04d", i);
    s.vocab.push_back({name, base(rng), 0.0, false});
  }
  return s;
}

struct SimulatedPanel {
  FrequencyStore store;
  std::map<std::string, double> true_delta;
  std::map<std::string, std::vector<double>> latent_log10;  // with noise
};

/// Draws monthly containment counts c ~ Binomial(docs_per_month, p) with
/// log10 p = trend + Normal(0, noise_sd), and smooths them like a real corpus.
[[nodiscard]] inline SimulatedPanel simulate_series(const AdoptionScenario& sc) {
  sc.validate();
  SimulatedPanel out;
  const auto months = static_cast<std::size_t>(sc.n_months());
  std::vector<std::int64_t> docs(months, sc.docs_per_month);
  for (std::size_t w = 0; w < sc.vocab.size(); ++w) {
    const auto& spec = sc.vocab[w];
    Rng rng = make_rng(sc.seed, "sim.word", w);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::int64_t> contain(months);
    std::vector<double> latent(months);
    for (std::size_t i = 0; i < months; ++i) {
      double x = sc.trend(spec, static_cast<int>(i)) + sc.noise_sd * noise(rng);
      double p = std::pow(10.0, x);
      if (!(p > 0.0 && p < 1.0))
        throw InvalidInput("simulate_series: latent probability of '" + spec.word + "' left (0, 1)");
      latent[i] = x;
      contain[i] = std::binomial_distribution<std::int64_t>(sc.docs_per_month, p)(rng);
    }
    out.store.emplace(spec.word, make_series(spec.word, sc.start, docs, std::move(contain)));
    out.true_delta[spec.word] = spec.delta;
    out.latent_log10[spec.word] = std::move(latent);
  }
  return out;
}

struct PipelineOptions {
  int pool_size = 100;
  DesignMode mode = DesignMode::hinge;
  PriorSpec priors;
  int chains = 4;
  int draws_per_chain = 1000;
  int warmup = 1000;
  bool run_placebo = true;
  bool run_in_time = true;
  bool run_did = true;
};

struct WordEvaluation {
  std::string word;
  double true_delta = 0.0;
  std::optional<double> treated_ratio;
  std::optional<double> placebo_p;
  std::optional<bool> in_time_peak_at_true;
  std::optional<ParameterSummary> beta_gpt_post;
  std::optional<bool> hdi_covers_truth;
  double max_rhat = 0.0;
};

struct PipelineReport {
  std::vector<WordEvaluation> words;
};

/// Runs the causal pipeline for every treated word with random donors drawn
/// from the untreated words.
[[nodiscard]] inline PipelineReport evaluate_pipeline(const AdoptionScenario& sc, const PipelineOptions& opt = {}) {
  auto sim = simulate_series(sc);
  std::vector<std::string> nulls;
  for (const auto& w : sc.vocab)
    if (!w.treated) nulls.push_back(w.word);
  const int pool_size = std::min<int>(opt.pool_size, static_cast<int>(nulls.size()));
  const YearMonth event = sc.event_month();

  PipelineReport report;
  for (std::size_t i = 0; i < sc.vocab.size(); ++i) {
    const auto& spec = sc.vocab[i];
    if (!spec.treated) continue;
    WordEvaluation ev;
    ev.word = spec.word;
    ev.true_delta = spec.delta;
    try {
      auto pool = select_donors_random(spec.word, nulls, pool_size, derive_seed(sc.seed, "sim.donors", i));
      auto panel = make_panel(pool, sim.store);
      auto fit = fit_synthetic(panel, event);
      ev.treated_ratio = fit.mspe.ratio;
      if (opt.run_placebo) ev.placebo_p = placebo_test(panel, event).p_value;
      if (opt.run_in_time) ev.in_time_peak_at_true = in_time_placebo(panel, event).peaks_at_true_date();
      if (opt.run_did) {
        PairedSeries paired{panel.months, {}, {}};
        paired.y_treated.assign(panel.y.begin(), panel.y.end());
        paired.y_control.assign(fit.synthetic.begin(), fit.synthetic.end());
        auto design = build_design(paired, sc.start, event, opt.mode);
        SamplerOptions so{opt.chains, opt.draws_per_chain, opt.warmup, derive_seed(sc.seed, "sim.did", i)};
        auto post = sample_posterior(design, opt.priors, so);
        auto summary = summarize(post);
        ev.beta_gpt_post = summary[kBetaGptPost];
        ev.hdi_covers_truth = summary[kBetaGptPost].hdi_lo <= spec.delta && spec.delta <= summary[kBetaGptPost].hdi_hi;
        for (const auto& s : summary) ev.max_rhat = std::max(ev.max_rhat, s.rhat);
      }
    } catch (const Error& e) {
      throw Error("word '" + spec.word + "': " + e.what());
    }
    report.words.push_back(std::move(ev));
  }
  return report;
}

/// Replicate r redraws baselines and noise from derive_seed(seed, "sim.replicate", r),
/// so replicates are exchangeable draws of the whole scenario.
[[nodiscard]] inline AdoptionScenario replicate_scenario(const ScenarioParams& p, std::uint64_t r) {
  ScenarioParams copy = p;
  copy.seed = derive_seed(p.seed, "sim.replicate", r);
  return make_scenario(copy);
}

}  // namespace lexshift

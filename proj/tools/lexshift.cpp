// Command-line driver. Subcommands communicate only through files in the
// output directory; every random stream derives from the root seed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexshift/lexshift.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lexshift;

namespace {

struct RunConfig {
  fs::path corpus, embeddings, contrastive_dir, out_dir, frequency, scores, stopwords, scenario;
  bool contrastive_prestemmed = false;
  MonthWindow window{{2018, 12}, {2024, 5}};
  Date event_date{2022, 11, 30};
  DonorStrategy strategy = DonorStrategy::untreated;
  int pool_size = 100;
  PriorSpec priors;
  int chains = 4, draws = 1000, warmup = 1000;
  std::uint64_t seed = 20221130;
  DesignMode mode = DesignMode::hinge;
  int n_samples = 1000;
  double vocab_threshold = 0.001;
  int top_k = 20;
  std::int64_t min_doc_count = 1;
  int min_token_length = 3;
  bool stemming = true;
  bool exclude_empty_months = true;
  bool stem_embedding_keys = false;
  int replicates = 1;
  std::vector<std::string> words;

  [[nodiscard]] YearMonth event() const { return event_date.year_month(); }

  [[nodiscard]] PreprocessConfig preprocess() const {
    PreprocessConfig cfg;
    if (!stopwords.empty()) cfg.stopwords = load_stopwords(stopwords.string());
    cfg.min_token_length = min_token_length;
    cfg.stemming_enabled = stemming;
    return cfg;
  }
};

struct Overrides {
  std::string config;
  std::vector<std::string> words;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string strategy;
  std::string mode;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto part : io::split(s, ',')) {
    std::string w(part);
    w.erase(0, w.find_first_not_of(' '));
    w.erase(w.find_last_not_of(' ') + 1);
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

YearMonth year_month_or_throw(const std::string& key, const std::string& v) {
  auto ym = parse_year_month(v);
  if (!ym) throw InvalidInput("config key '" + key + "': expected YYYY-MM, got '" + v + "'");
  return *ym;
}

RunConfig load_run_config(const Overrides& o) {
  KeyValueConfig kv = o.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(o.config);
  RunConfig rc;
  auto abs = [](const fs::path& p) { return p.empty() ? p : fs::absolute(p).lexically_normal(); };
  rc.corpus = abs(kv.get_path("corpus"));
  rc.embeddings = abs(kv.get_path("embeddings"));
  rc.contrastive_dir = abs(kv.get_path("contrastive_dir"));
  rc.contrastive_prestemmed = kv.get_bool("contrastive_prestemmed", false);
  fs::path configured_out = kv.get_path("out_dir", "out");
  rc.out_dir = abs(o.out.empty() ? configured_out : fs::path(o.out));
  rc.frequency = abs(kv.get_path("frequency", rc.out_dir / "frequency.csv"));
  rc.scores = abs(kv.get_path("scores", rc.out_dir / "gpt_scores.csv"));
  rc.stopwords = abs(kv.get_path("stopwords"));
  rc.scenario = abs(kv.get_path("scenario"));
  rc.window = {year_month_or_throw("t_start", kv.get("t_start", "2018-12")),
               year_month_or_throw("t_end", kv.get("t_end", "2024-05"))};
  auto event = parse_iso_date(kv.get("event_date", "2022-11-30"));
  if (!event) throw InvalidInput("config: invalid event_date");
  rc.event_date = *event;
  rc.strategy = parse_strategy(o.strategy.empty() ? kv.get("strategy", "untreated") : o.strategy);
  rc.pool_size = static_cast<int>(kv.get_int("pool_size", 100));
  rc.priors.coef_prior_scale = kv.get_double("coef_prior_scale", 10.0);
  rc.priors.sigma_prior_scale = kv.get_double("sigma_prior_scale", 1.0);
  rc.chains = static_cast<int>(kv.get_int("chains", 4));
  rc.draws = static_cast<int>(kv.get_int("draws", 1000));
  rc.warmup = static_cast<int>(kv.get_int("warmup", 1000));
  rc.seed = o.seed ? *o.seed : kv.get_u64("seed", 20221130);
  rc.mode = parse_design_mode(o.mode.empty() ? kv.get("mode", "hinge") : o.mode);
  rc.n_samples = static_cast<int>(kv.get_int("n_samples", 1000));
  rc.vocab_threshold = kv.get_double("vocab_threshold", 0.001);
  rc.top_k = static_cast<int>(kv.get_int("top_k", 20));
  rc.min_doc_count = kv.get_int("min_doc_count", 1);
  rc.min_token_length = static_cast<int>(kv.get_int("min_token_length", 3));
  rc.stemming = kv.get_bool("stemming", true);
  rc.exclude_empty_months = kv.get_bool("exclude_empty_months", true);
  rc.stem_embedding_keys = kv.get_bool("stem_embedding_keys", false);
  rc.replicates = static_cast<int>(kv.get_int("replicates", 1));
  rc.words = o.words.empty() ? split_list(kv.get("words", "")) : o.words;

  rc.window.validate();
  if (!(rc.window.first <= rc.event() && rc.event() < rc.window.last))
    throw InvalidInput("config: event_date must fall inside [t_start, t_end)");
  if (!(rc.priors.coef_prior_scale > 0.0) || !(rc.priors.sigma_prior_scale > 0.0))
    throw InvalidInput("config: prior scales must be positive");
  for (const auto& k : kv.unused_keys()) std::cerr << "warning: unknown config key '" << k << "'\n";
  return rc;
}

void require_file(const fs::path& p, const std::string& what) {
  if (p.empty()) throw InvalidInput("missing path: " + what);
  if (!fs::exists(p)) throw InvalidInput(what + " not found: " + p.string());
}

void require_words(const RunConfig& rc) {
  if (rc.words.empty()) throw InvalidInput("no word given (use --word or the 'words' config key)");
}

fs::path out_file(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.out_dir);
  return rc.out_dir / name;
}

void write_json(const fs::path& path, const json& j) {
  io::TextWriter w(path.string());
  w << j.dump(2) << "\n";
  w.close();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Runs `body` for each word, reporting failures; returns the process exit code.
template <class F>
int for_each_word(const RunConfig& rc, F body) {
  require_words(rc);
  std::vector<std::string> failed;
  for (const auto& w : rc.words) {
    try {
      body(w);
    } catch (const std::exception& e) {
      std::cerr << "error: word '" << w << "': " << e.what() << "\n";
      failed.push_back(w);
    }
  }
  if (!failed.empty()) {
    std::cerr << "failed words:";
    for (const auto& w : failed) std::cerr << " " << w;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

int cmd_ingest(const RunConfig& rc) {
  require_file(rc.corpus, "corpus");
  auto cfg = rc.preprocess();
  auto ingest = read_corpus(rc.corpus.string(), rc.window);
  auto store = build_frequency_series_all(ingest.documents, rc.window, cfg, rc.min_doc_count);
  write_frequency_csv(out_file(rc, "frequency.csv").string(), store);

  std::vector<std::int64_t> per_month(static_cast<std::size_t>(rc.window.size()), 0);
  for (const auto& d : ingest.documents) ++per_month[static_cast<std::size_t>(rc.window.index_of(d.timestamp.year_month()))];
  json report;
  report["kept"] = ingest.documents.size();
  report["rejected_out_of_window"] = ingest.rejected_out_of_window;
  report["rejected_bad_timestamp"] = ingest.rejected_bad_timestamp;
  report["rejected_duplicate_id"] = ingest.rejected_duplicate_id;
  report["malformed"] = json::array();
  for (const auto& m : ingest.malformed) report["malformed"].push_back({{"line", m.line}, {"reason", m.reason}});
  report["vocabulary_size"] = store.size();
  report["window"] = {rc.window.first.str(), rc.window.last.str()};
  report["per_month"] = json::array();
  for (std::size_t i = 0; i < per_month.size(); ++i)
    report["per_month"].push_back({{"ym", rc.window.at(static_cast<int>(i)).str()}, {"documents", per_month[i]}});
  write_json(out_file(rc, "ingest_report.json"), report);

  std::cout << "kept " << ingest.documents.size() << " documents, " << store.size() << " stems\n";
  for (const auto& m : ingest.malformed)
    std::cerr << rc.corpus.string() << ":" << m.line << ": malformed record: " << m.reason << "\n";
  return ingest.malformed.empty() ? 0 : 1;
}

int cmd_score(const RunConfig& rc) {
  require_file(rc.contrastive_dir, "contrastive_dir");
  auto load = load_contrastive_dir(rc.contrastive_dir.string(), rc.contrastive_prestemmed, rc.preprocess());
  for (const auto& f : load.failures) std::cerr << "unreadable cell " << f.cell << ": " << f.reason << "\n";
  if (load.cells.empty()) throw InvalidInput("no readable contrastive cells in " + rc.contrastive_dir.string());
  if (load.dropped_pairs) std::cerr << "dropped " << load.dropped_pairs << " failed-edit pairs\n";
  std::vector<CellCounts> counts;
  for (const auto& c : load.cells) counts.emplace_back(c);
  auto result = score_vocabulary(counts, rc.n_samples, derive_seed(rc.seed, "cli.score"), rc.vocab_threshold);
  for (const auto& w : result.saturated) std::cerr << "warning: '" << w << "' saturated, not scored\n";
  write_score_csv(out_file(rc, "gpt_scores.csv").string(), result.scores);
  int shown = 0;
  for (const auto& s : result.scores) {
    if (shown++ >= rc.top_k) break;
    std::cout << s.word << "\t" << io::fmt(s.score, 4) << "\t[" << io::fmt(s.lo95, 4) << ", " << io::fmt(s.hi95, 4)
              << "]\n";
  }
  return 0;
}

DonorPool choose_donors(const RunConfig& rc, const std::string& word, const FrequencyStore& store) {
  auto in_store = [&](const std::string& w) { return store.count(w) != 0; };
  switch (rc.strategy) {
    case DonorStrategy::untreated: {
      require_file(rc.scores, "scores");
      require_file(rc.embeddings, "embeddings");
      auto scores = read_score_csv(rc.scores.string());
      auto emb = load_embeddings(rc.embeddings.string(), rc.stem_embedding_keys);
      return select_donors_untreated(word, scores, emb, rc.pool_size, in_store);
    }
    case DonorStrategy::synonym: {
      require_file(rc.embeddings, "embeddings");
      auto emb = load_embeddings(rc.embeddings.string(), rc.stem_embedding_keys);
      return select_donors_synonym(word, emb, rc.pool_size, in_store);
    }
    case DonorStrategy::random: {
      std::vector<std::string> vocab;
      for (const auto& [w, s] : store) vocab.push_back(w);
      return select_donors_random(word, vocab, rc.pool_size, derive_seed(rc.seed, "cli.donors." + word));
    }
  }
  throw InvalidInput("unknown donor strategy");
}

const FrequencyStore& frequency_store(const RunConfig& rc) {
  static std::optional<FrequencyStore> cache;
  if (!cache) {
    require_file(rc.frequency, "frequency");
    cache = read_frequency_csv(rc.frequency.string());
  }
  return *cache;
}

int cmd_synth(const RunConfig& rc) {
  const auto& store = frequency_store(rc);
  return for_each_word(rc, [&](const std::string& word) {
    if (!store.count(word)) throw InvalidInput("no frequency series for '" + word + "'");
    auto pool = choose_donors(rc, word, store);
    auto panel = make_panel(pool, store, rc.exclude_empty_months);
    auto fit = fit_synthetic(panel, rc.event());

    io::TextWriter wcsv(out_file(rc, "synth_" + word + "_weights.csv").string());
    wcsv << "donor,weight\n";
    for (std::size_t j = 0; j < fit.donors.size(); ++j)
      wcsv << fit.donors[j] << "," << io::fmt(fit.weights(static_cast<Eigen::Index>(j)), 12) << "\n";
    wcsv.close();

    io::TextWriter series(out_file(rc, "synth_" + word + "_series.csv").string());
    series << "ym,y_treated,y_synth\n";
    io::TextWriter paired(out_file(rc, "synth_" + word + "_paired.csv").string());
    paired << "year,month,y_treated,y_control\n";
    for (std::size_t i = 0; i < panel.months.size(); ++i) {
      auto r = static_cast<Eigen::Index>(i);
      series << panel.months[i].str() << "," << io::fmt(panel.y(r), 12) << "," << io::fmt(fit.synthetic(r), 12) << "\n";
      paired << panel.months[i].year << "," << panel.months[i].month << "," << io::fmt(panel.y(r), 12) << ","
             << io::fmt(fit.synthetic(r), 12) << "\n";
    }
    series.close();
    paired.close();

    json j{{"word", word},
           {"strategy", to_string(pool.strategy)},
           {"event", rc.event().str()},
           {"n_donors", fit.donors.size()},
           {"n_pre", fit.mspe.n_pre},
           {"n_post", fit.mspe.n_post},
           {"pre_mspe", fit.mspe.pre_mspe},
           {"post_mspe", fit.mspe.post_mspe},
           {"ratio", optional_number(fit.mspe.ratio)},
           {"converged", fit.converged}};
    write_json(out_file(rc, "synth_" + word + ".json"), j);
    std::cout << word << ": pre_mspe " << io::fmt(fit.mspe.pre_mspe, 8) << ", post_mspe "
              << io::fmt(fit.mspe.post_mspe, 8) << ", ratio "
              << (fit.mspe.ratio ? io::fmt(*fit.mspe.ratio, 4) : std::string("undefined")) << "\n";
  });
}

// Donor pool recorded by a previous synth run.
DonorPool pool_from_weights(const RunConfig& rc, const std::string& word) {
  fs::path p = rc.out_dir / ("synth_" + word + "_weights.csv");
  require_file(p, "synth weights for '" + word + "' (run synth first)");
  auto lines = io::read_lines(p.string());
  DonorPool pool{word, rc.strategy, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = io::split(lines[i], ',');
    if (f.size() != 2) throw InvalidInput(p.string() + ":" + std::to_string(i + 1) + ": expected donor,weight");
    pool.donors.emplace_back(f[0]);
  }
  return pool;
}

int cmd_placebo(const RunConfig& rc) {
  const auto& store = frequency_store(rc);
  return for_each_word(rc, [&](const std::string& word) {
    auto panel = make_panel(pool_from_weights(rc, word), store, rc.exclude_empty_months);
    auto out = placebo_test(panel, rc.event());
    io::TextWriter csv(out_file(rc, "placebo_" + word + ".csv").string());
    csv << "word,role,mspe_ratio\n";
    csv << word << ",treated," << io::fmt(out.treated_ratio, 10) << "\n";
    for (std::size_t j = 0; j < out.donors.size(); ++j)
      csv << out.donors[j] << ",donor," << (out.donor_ratios[j] ? io::fmt(*out.donor_ratios[j], 10) : "") << "\n";
    csv.close();
    json j{{"word", word},
           {"treated_ratio", out.treated_ratio},
           {"n_donors", out.donors.size()},
           {"excluded", out.excluded},
           {"p_value", out.p_value}};
    write_json(out_file(rc, "placebo_" + word + ".json"), j);
    std::cout << word << ": placebo p = " << io::fmt(out.p_value, 4) << " (" << out.donors.size() - out.excluded
              << " donor ratios)\n";
  });
}

int cmd_intime(const RunConfig& rc) {
  const auto& store = frequency_store(rc);
  return for_each_word(rc, [&](const std::string& word) {
    auto panel = make_panel(pool_from_weights(rc, word), store, rc.exclude_empty_months);
    auto out = in_time_placebo(panel, rc.event());
    io::TextWriter csv(out_file(rc, "intime_" + word + ".csv").string());
    csv << "ym,kind,mspe_ratio\n";
    csv << out.true_month.str() << ",true," << (out.true_ratio ? io::fmt(*out.true_ratio, 10) : "") << "\n";
    for (std::size_t i = 0; i < out.fake_months.size(); ++i)
      csv << out.fake_months[i].str() << ",fake," << (out.ratios[i] ? io::fmt(*out.ratios[i], 10) : "") << "\n";
    for (const auto& m : out.skipped) csv << m.str() << ",skipped,\n";
    csv.close();
    std::cout << word << ": true-date ratio "
              << (out.true_ratio ? io::fmt(*out.true_ratio, 4) : std::string("undefined"))
              << (out.peaks_at_true_date() ? ", exceeds" : ", does not exceed") << " all fake dates\n";
  });
}

PairedSeries read_paired_csv(const fs::path& p) {
  auto lines = io::read_lines(p.string());
  if (lines.empty() || lines[0] != "year,month,y_treated,y_control")
    throw InvalidInput(p.string() + ": unexpected header");
  PairedSeries s;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = io::split(lines[i], ',');
    if (f.size() != 4) throw InvalidInput(p.string() + ":" + std::to_string(i + 1) + ": expected 4 fields");
    s.months.push_back({std::stoi(std::string(f[0])), std::stoi(std::string(f[1]))});
    s.y_treated.push_back(std::stod(std::string(f[2])));
    s.y_control.push_back(std::stod(std::string(f[3])));
  }
  return s;
}

int cmd_did(const RunConfig& rc) {
  return for_each_word(rc, [&](const std::string& word) {
    fs::path p = rc.out_dir / ("synth_" + word + "_paired.csv");
    require_file(p, "paired series for '" + word + "' (run synth first)");
    auto design = build_design(read_paired_csv(p), rc.window.first, rc.event(), rc.mode);
    SamplerOptions opt{rc.chains, rc.draws, rc.warmup, derive_seed(rc.seed, "cli.did." + word)};
    auto post = sample_posterior(design, rc.priors, opt);
    auto summary = summarize(post);

    json params = json::array();
    for (const auto& s : summary) {
      json e{{"name", s.name},     {"mean", s.mean}, {"median", s.median}, {"hdi95", {s.hdi_lo, s.hdi_hi}},
             {"rhat", s.rhat},     {"ess", s.ess}};
      e["annual_pct_change"] = optional_number(s.annual_pct_change);
      params.push_back(e);
    }
    json j{{"word", word},
           {"mode", to_string(post.mode)},
           {"t_event", post.t_event},
           {"chains", rc.chains},
           {"draws_per_chain", rc.draws},
           {"warmup", post.warmup},
           {"n_observations", design.X.rows()},
           {"parameters", params},
           {"warnings", post.warnings}};
    write_json(out_file(rc, "did_" + word + ".json"), j);

    io::TextWriter csv(out_file(rc, "did_" + word + "_draws.csv").string());
    csv << "chain,iter";
    for (const auto* n : kDidParameterNames) csv << "," << n;
    csv << "\n";
    for (std::size_t c = 0; c < post.chains.size(); ++c)
      for (std::size_t i = 0; i < post.chains[c].size(); ++i) {
        csv << c << "," << i;
        for (double v : post.chains[c][i]) csv << "," << io::fmt(v, 10);
        csv << "\n";
      }
    csv.close();

    for (const auto& w : post.warnings) std::cerr << "warning: " << word << ": " << w << "\n";
    const auto& b = summary[kBetaGptPost];
    std::cout << word << ": beta_gpt_post " << io::fmt(b.mean, 4) << " [" << io::fmt(b.hdi_lo, 4) << ", "
              << io::fmt(b.hdi_hi, 4) << "], " << io::fmt(b.annual_pct_change.value_or(0.0), 1) << "% per year\n";
  });
}

ScenarioParams load_scenario(const RunConfig& rc) {
  require_file(rc.scenario, "scenario");
  auto kv = KeyValueConfig::load(rc.scenario);
  ScenarioParams p;
  p.n_months_pre = static_cast<int>(kv.get_int("n_months_pre", p.n_months_pre));
  p.n_months_post = static_cast<int>(kv.get_int("n_months_post", p.n_months_post));
  p.docs_per_month = kv.get_int("docs_per_month", p.docs_per_month);
  p.start = year_month_or_throw("start", kv.get("start", p.start.str()));
  p.slope = kv.get_double("slope", p.slope);
  p.noise_sd = kv.get_double("noise_sd", p.noise_sd);
  p.n_treated = static_cast<int>(kv.get_int("n_treated", p.n_treated));
  p.n_null = static_cast<int>(kv.get_int("n_null", p.n_null));
  p.treated_delta = kv.get_double("treated_delta", p.treated_delta);
  p.baseline_min = kv.get_double("baseline_min", p.baseline_min);
  p.baseline_max = kv.get_double("baseline_max", p.baseline_max);
  p.seed = rc.seed;
  for (const auto& k : kv.unused_keys()) std::cerr << "warning: unknown scenario key '" << k << "'\n";
  make_scenario(p).validate();
  return p;
}

int cmd_simulate(const RunConfig& rc) {
  auto base = load_scenario(rc);
  PipelineOptions opt;
  opt.pool_size = rc.pool_size;
  opt.mode = rc.mode;
  opt.priors = rc.priors;
  opt.chains = rc.chains;
  opt.draws_per_chain = rc.draws;
  opt.warmup = rc.warmup;

  io::TextWriter csv(out_file(rc, "simulate_report.csv").string());
  csv << "replicate,word,true_delta,mspe_ratio,placebo_p,in_time_peak,beta_gpt_post_mean,hdi_lo,hdi_hi,covered,max_rhat\n";
  std::size_t rows = 0, rejected = 0, covered = 0, peaks = 0;
  double abs_err = 0.0, max_rhat = 0.0;
  for (int r = 0; r < rc.replicates; ++r) {
    auto report = evaluate_pipeline(replicate_scenario(base, static_cast<std::uint64_t>(r)), opt);
    for (const auto& w : report.words) {
      const auto& b = *w.beta_gpt_post;
      csv << r << "," << w.word << "," << io::fmt(w.true_delta, 6) << ","
          << (w.treated_ratio ? io::fmt(*w.treated_ratio, 8) : "") << "," << io::fmt(*w.placebo_p, 8) << ","
          << (*w.in_time_peak_at_true ? 1 : 0) << "," << io::fmt(b.mean, 8) << "," << io::fmt(b.hdi_lo, 8) << ","
          << io::fmt(b.hdi_hi, 8) << "," << (*w.hdi_covers_truth ? 1 : 0) << "," << io::fmt(w.max_rhat, 6) << "\n";
      ++rows;
      rejected += *w.placebo_p <= 0.05;
      covered += *w.hdi_covers_truth;
      peaks += *w.in_time_peak_at_true;
      abs_err += std::abs(b.mean - w.true_delta);
      max_rhat = std::max(max_rhat, w.max_rhat);
    }
  }
  csv.close();
  const double n = static_cast<double>(rows);
  json j{{"replicates", rc.replicates},
         {"evaluations", rows},
         {"placebo_rejection_rate_05", rejected / n},
         {"hdi_coverage", covered / n},
         {"in_time_peak_rate", peaks / n},
         {"mean_abs_error", abs_err / n},
         {"max_rhat", max_rhat}};
  write_json(out_file(rc, "simulate_summary.json"), j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-frequency shift analysis: contrastive scoring, synthetic control and DiD"};
  app.require_subcommand(1);
  Overrides o;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Root seed (overrides config)");
    sub->add_option("--out", o.out, "Output directory (overrides config)");
  };
  auto add_word = [&](CLI::App* sub) { sub->add_option("--word", o.words, "Treated word stem (repeatable)"); };

  auto* ingest = app.add_subcommand("ingest", "Corpus to monthly frequency series");
  auto* score = app.add_subcommand("score", "GPT scores from contrastive corpora");
  auto* synth = app.add_subcommand("synth", "Synthetic-control fit");
  auto* placebo = app.add_subcommand("placebo", "Donor placebo test");
  auto* intime = app.add_subcommand("intime", "In-time placebo");
  auto* did = app.add_subcommand("did", "Bayesian difference-in-differences");
  auto* simulate = app.add_subcommand("simulate", "Calibration on simulated panels");
  for (auto* s : {ingest, score, synth, placebo, intime, did, simulate}) add_common(s);
  for (auto* s : {synth, placebo, intime, did}) add_word(s);
  synth->add_option("--strategy", o.strategy, "Donor strategy")->check(CLI::IsMember({"untreated", "synonym", "random"}));
  for (auto* s : {did, simulate})
    s->add_option("--mode", o.mode, "DiD design")->check(CLI::IsMember({"hinge", "as_printed"}));

  CLI11_PARSE(app, argc, argv);
  try {
    for (auto* s : app.get_subcommands())
      if (s->count("--seed")) o.seed = seed;
    RunConfig rc = load_run_config(o);
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "ingest") return cmd_ingest(rc);
    if (name == "score") return cmd_score(rc);
    if (name == "synth") return cmd_synth(rc);
    if (name == "placebo") return cmd_placebo(rc);
    if (name == "intime") return cmd_intime(rc);
    if (name == "did") return cmd_did(rc);
    if (name == "simulate") return cmd_simulate(rc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

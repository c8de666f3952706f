#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexshift/calendar.hpp"
#include "lexshift/common.hpp"
#include "lexshift/text.hpp"

namespace lexshift {

/// One time-stamped text unit (a video transcript, an episode, an abstract).
struct Document {
  std::string id;
  Date timestamp;
  std::optional<std::string> category;
  std::string text;
};

/// Monthly document-containment counts for one stem over a contiguous window.
///
/// `log_rel_freq[t] = log10((contain_count[t] + 1) / (doc_count[t] + 1))`.
/// Months without documents are kept (doc_count 0, log_rel_freq 0) and
/// reported by `is_empty_month`.
struct FrequencySeries {
  std::string word;
  YearMonth first_month;
  std::vector<std::int64_t> doc_count;
  std::vector<std::int64_t> contain_count;
  std::vector<double> log_rel_freq;

  [[nodiscard]] std::size_t size() const { return doc_count.size(); }
  [[nodiscard]] YearMonth month(std::size_t i) const { return first_month.plus(static_cast<int>(i)); }
  [[nodiscard]] YearMonth last_month() const { return month(size() - 1); }
  [[nodiscard]] MonthWindow window() const { return {first_month, last_month()}; }
  [[nodiscard]] bool is_empty_month(std::size_t i) const { return doc_count[i] == 0; }
};

/// Laplace-smoothed log10 relative document frequency.
[[nodiscard]] inline double smoothed_log10_frequency(std::int64_t contain, std::int64_t total) {
  return std::log10(static_cast<double>(contain + 1) / static_cast<double>(total + 1));
}

/// Builds a series from raw monthly counts, checking 0 <= c <= N.
[[nodiscard]] inline FrequencySeries make_series(std::string word, YearMonth first,
                                                 std::vector<std::int64_t> doc_count,
                                                 std::vector<std::int64_t> contain_count) {
  if (doc_count.size() != contain_count.size())
    throw InvalidInput("series '" + word + "': count vectors differ in length");
  FrequencySeries s{std::move(word), first, std::move(doc_count), std::move(contain_count), {}};
  s.log_rel_freq.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.contain_count[i] < 0 || s.contain_count[i] > s.doc_count[i])
      throw InvalidInput("series '" + s.word + "': containment count out of range in " +
                         s.month(i).str());
    s.log_rel_freq.push_back(smoothed_log10_frequency(s.contain_count[i], s.doc_count[i]));
  }
  return s;
}

using FrequencyStore = std::map<std::string, FrequencySeries>;

namespace detail {

struct MonthlyCounts {
  MonthWindow window;
  std::vector<std::int64_t> docs;
  std::unordered_map<std::string, std::vector<std::int64_t>> contains;
};

// Counts per month; stems outside `vocab` are ignored unless vocab is null.
inline MonthlyCounts count_months(std::span<const Document> corpus,
                                  const std::unordered_set<std::string>* vocab,
                                  MonthWindow window, const PreprocessConfig& cfg) {
  MonthlyCounts mc{window, std::vector<std::int64_t>(static_cast<std::size_t>(window.size()), 0), {}};
  for (const auto& doc : corpus) {
    YearMonth ym = doc.timestamp.year_month();
    if (!window.contains(ym)) continue;
    auto idx = static_cast<std::size_t>(window.index_of(ym));
    ++mc.docs[idx];
    for (const auto& stem : preprocess(doc.text, cfg)) {
      if (vocab && !vocab->contains(stem)) continue;
      auto& v = mc.contains[stem];
      if (v.empty()) v.assign(mc.docs.size(), 0);
      ++v[idx];
    }
  }
  return mc;
}

inline FrequencyStore to_store(const MonthlyCounts& mc, std::span<const std::string> words) {
  FrequencyStore out;
  for (const auto& w : words) {
    auto it = mc.contains.find(w);
    std::vector<std::int64_t> c =
        it == mc.contains.end() ? std::vector<std::int64_t>(mc.docs.size(), 0) : it->second;
    out.emplace(w, make_series(w, mc.window.first, mc.docs, std::move(c)));
  }
  return out;
}

inline void check_frequency_inputs(std::span<const Document> corpus, MonthWindow window) {
  window.validate();
  if (corpus.empty()) throw InvalidInput("corpus is empty");
}

}  // namespace detail

/// Monthly containment series for every stem in `vocab`. Documents outside the
/// window are ignored; they are expected to have been rejected at ingest.
[[nodiscard]] inline FrequencyStore build_frequency_series(std::span<const Document> corpus,
                                                           const std::unordered_set<std::string>& vocab,
                                                           MonthWindow window,
                                                           const PreprocessConfig& cfg = {}) {
  if (vocab.empty()) throw InvalidInput("vocabulary is empty");
  detail::check_frequency_inputs(corpus, window);
  auto mc = detail::count_months(corpus, &vocab, window, cfg);
  std::vector<std::string> words(vocab.begin(), vocab.end());
  return detail::to_store(mc, words);
}

/// Same as build_frequency_series with the vocabulary taken to be every stem
/// found in at least `min_doc_count` documents inside the window.
[[nodiscard]] inline FrequencyStore build_frequency_series_all(std::span<const Document> corpus,
                                                               MonthWindow window,
                                                               const PreprocessConfig& cfg = {},
                                                               std::int64_t min_doc_count = 1) {
  detail::check_frequency_inputs(corpus, window);
  auto mc = detail::count_months(corpus, nullptr, window, cfg);
  std::vector<std::string> words;
  for (const auto& [w, counts] : mc.contains) {
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total >= min_doc_count) words.push_back(w);
  }
  if (words.empty()) throw InvalidInput("no stem reaches the minimum document count");
  return detail::to_store(mc, words);
}

}  // namespace lexshift

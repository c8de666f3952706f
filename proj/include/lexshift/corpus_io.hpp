#pragma once

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "lexshift/corpus.hpp"
#include "lexshift/io.hpp"

namespace lexshift {

struct MalformedRecord {
  std::size_t line = 0;
  std::string reason;
};

/// Documents accepted from a corpus file plus an account of what was rejected.
struct IngestResult {
  std::vector<Document> documents;
  std::size_t rejected_out_of_window = 0;
  std::size_t rejected_bad_timestamp = 0;
  std::size_t rejected_duplicate_id = 0;
  std::vector<MalformedRecord> malformed;
};

/// Reads newline-delimited JSON records `{id, timestamp, category?, text}`
/// (optionally gzip-compressed). Blank lines are skipped. Records that are not
/// JSON objects or lack required string fields are reported as malformed;
/// unparseable timestamps, out-of-window dates and duplicate ids are counted
/// and dropped.
[[nodiscard]] inline IngestResult read_corpus(const std::string& path, MonthWindow window) {
  IngestResult result;
  std::unordered_set<std::string> seen;
  io::LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto bad = [&](std::string why) { result.malformed.push_back({reader.line_number(), std::move(why)}); };
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      bad("not a JSON object");
      continue;
    }
    auto str_field = [&](const char* key) -> const std::string* {
      auto it = rec.find(key);
      if (it == rec.end() || !it->is_string()) return nullptr;
      return it->get_ptr<const std::string*>();
    };
    const std::string* id = str_field("id");
    const std::string* ts = str_field("timestamp");
    const std::string* text = str_field("text");
    if (!id || !ts || !text) {
      bad("missing string field id, timestamp or text");
      continue;
    }
    std::optional<std::string> category;
    if (auto it = rec.find("category"); it != rec.end() && !it->is_null()) {
      if (!it->is_string()) {
        bad("category is not a string");
        continue;
      }
      category = it->get<std::string>();
    }
    auto date = parse_iso_date(*ts);
    if (!date) {
      ++result.rejected_bad_timestamp;
      continue;
    }
    if (!window.contains(date->year_month())) {
      ++result.rejected_out_of_window;
      continue;
    }
    if (!seen.insert(*id).second) {
      ++result.rejected_duplicate_id;
      continue;
    }
    result.documents.push_back(Document{*id, *date, std::move(category), *text});
  }
  return result;
}

inline constexpr std::string_view kFrequencyCsvHeader =
    "word,year,month,doc_count,contain_count,log_rel_freq";

/// Writes the store as CSV, words in lexicographic order, months ascending.
inline void write_frequency_csv(const std::string& path, const FrequencyStore& store) {
  io::TextWriter out(path);
  out << kFrequencyCsvHeader << '\n';
  for (const auto& [word, s] : store) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      YearMonth ym = s.month(i);
      out << word << ',' << ym.year << ',' << ym.month << ',' << s.doc_count[i] << ','
          << s.contain_count[i] << ',' << io::fmt(s.log_rel_freq[i], 9) << '\n';
    }
  }
  out.close();
}

/// Reads a frequency CSV. Smoothed frequencies are recomputed from the counts;
/// months of each word must be contiguous.
[[nodiscard]] inline FrequencyStore read_frequency_csv(const std::string& path) {
  io::LineReader reader(path);
  std::string line;
  if (!reader.next(line) || line != kFrequencyCsvHeader)
    throw InvalidInput(path + ": missing frequency CSV header");
  struct Acc {
    YearMonth first;
    YearMonth last;
    std::vector<std::int64_t> n, c;
  };
  std::map<std::string, Acc> acc;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto f = io::split(line, ',');
    auto where = [&] { return path + ":" + std::to_string(reader.line_number()); };
    if (f.size() != 6) throw InvalidInput(where() + ": expected 6 fields");
    YearMonth ym;
    std::int64_t n = 0, c = 0;
    try {
      ym = {std::stoi(std::string(f[1])), std::stoi(std::string(f[2]))};
      n = std::stoll(std::string(f[3]));
      c = std::stoll(std::string(f[4]));
    } catch (const std::exception&) {
      throw InvalidInput(where() + ": non-numeric field");
    }
    std::string word(f[0]);
    auto [it, fresh] = acc.try_emplace(word, Acc{ym, ym, {}, {}});
    if (!fresh && ym != it->second.last.plus(1))
      throw InvalidInput(where() + ": months of '" + word + "' are not contiguous");
    it->second.last = ym;
    it->second.n.push_back(n);
    it->second.c.push_back(c);
  }
  FrequencyStore store;
  for (auto& [word, a] : acc) store.emplace(word, make_series(word, a.first, std::move(a.n), std::move(a.c)));
  return store;
}

}  // namespace lexshift

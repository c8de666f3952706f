#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lexshift/gptscore.hpp"
#include "lexshift/io.hpp"

namespace lexshift {

struct CellLoadFailure {
  std::string cell;
  std::string reason;
};

struct ContrastiveLoad {
  std::vector<ContrastiveCell> cells;  // sorted by key
  std::vector<CellLoadFailure> failures;
  std::size_t dropped_pairs = 0;       // pairs with a blank side (failed edits)
};

namespace detail {

inline StemSet stems_of_line(const std::string& line, bool prestemmed, const PreprocessConfig& cfg) {
  if (!prestemmed) return preprocess(line, cfg);
  StemSet out;
  std::istringstream ss(line);
  std::string w;
  while (ss >> w) out.insert(w);
  return out;
}

inline bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

}  // namespace detail

/// Loads every `<dataset>__<model>__<prompt>.human.txt` / `.edited.txt` pair in
/// `dir`. Each line is one document; line i of both files is the same source
/// text. A pair with a blank line on either side is a failed edit and is
/// dropped from both. With `prestemmed`, lines are whitespace-separated stems.
[[nodiscard]] inline ContrastiveLoad load_contrastive_dir(const std::string& dir, bool prestemmed = false,
                                                          const PreprocessConfig& cfg = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InvalidInput("contrastive directory not found: " + dir);
  constexpr std::string_view human_suffix = ".human.txt";
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() > human_suffix.size() && name.ends_with(human_suffix))
      stems.push_back(name.substr(0, name.size() - human_suffix.size()));
  }
  std::sort(stems.begin(), stems.end());
  ContrastiveLoad out;
  for (const auto& stem : stems) {
    // The name must split on "__" into exactly three non-empty parts.
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = stem.find("__", start);
      fields.push_back(stem.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 2;
    }
    if (fields.size() != 3 || std::any_of(fields.begin(), fields.end(), [](auto& f) { return f.empty(); })) {
      out.failures.push_back({stem, "file name is not <dataset>__<model>__<prompt>"});
      continue;
    }
    fs::path human = fs::path(dir) / (stem + ".human.txt");
    fs::path edited = fs::path(dir) / (stem + ".edited.txt");
    try {
      auto h = io::read_lines(human.string());
      auto e = io::read_lines(edited.string());
      if (h.size() != e.size())
        throw InvalidInput("human and edited files differ in line count (" + std::to_string(h.size()) + " vs " +
                           std::to_string(e.size()) + ")");
      ContrastiveCell cell{{fields[0], fields[1], fields[2]}, {}, {}};
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (detail::blank(h[i]) || detail::blank(e[i])) {
          ++out.dropped_pairs;
          continue;
        }
        cell.human_docs.push_back(detail::stems_of_line(h[i], prestemmed, cfg));
        cell.edited_docs.push_back(detail::stems_of_line(e[i], prestemmed, cfg));
      }
      cell.validate();
      out.cells.push_back(std::move(cell));
    } catch (const Error& ex) {
      out.failures.push_back({stem, ex.what()});
    }
  }
  return out;
}

/// CSV `word,score,lo95,hi95,n_cells`, in the order given (score descending).
inline void write_score_csv(const std::string& path, std::span<const GptScore> scores) {
  io::TextWriter out(path);
  out << "word,score,lo95,hi95,n_cells\n";
  for (const auto& s : scores)
    out << s.word << ',' << io::fmt(s.score) << ',' << io::fmt(s.lo95) << ',' << io::fmt(s.hi95) << ','
        << s.n_cells << '\n';
  out.close();
}

[[nodiscard]] inline std::map<std::string, GptScore> read_score_csv(const std::string& path) {
  io::LineReader reader(path);
  std::string line;
  if (!reader.next(line) || line != "word,score,lo95,hi95,n_cells")
    throw InvalidInput(path + ": missing score CSV header");
  std::map<std::string, GptScore> out;
  while (reader.next(line)) {
    if (line.empty()) continue;
    auto f = io::split(line, ',');
    if (f.size() != 5) throw InvalidInput(path + ":" + std::to_string(reader.line_number()) + ": expected 5 fields");
    GptScore s;
    s.word = std::string(f[0]);
    try {
      s.score = std::stod(std::string(f[1]));
      s.lo95 = std::stod(std::string(f[2]));
      s.hi95 = std::stod(std::string(f[3]));
      s.n_cells = std::stoi(std::string(f[4]));
    } catch (const std::exception&) {
      throw InvalidInput(path + ":" + std::to_string(reader.line_number()) + ": non-numeric field");
    }
    out.emplace(s.word, s);
  }
  return out;
}

}  // namespace lexshift

#pragma once

#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "lexshift/common.hpp"

namespace lexshift {

using StopwordSet = std::unordered_set<std::string>;

/// The standard English stop-word list (179 entries) also shipped as
/// data/stopwords/english.txt.
inline constexpr std::array<std::string_view, 179> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan",
    "shan't", "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't",
    "wouldn", "wouldn't"};

[[nodiscard]] inline StopwordSet default_stopwords() {
  StopwordSet out;
  for (auto w : kEnglishStopwords) out.emplace(w);
  return out;
}

/// Loads a stop-word file (one word per line, blank lines and `#` comments
/// ignored). Entries are lowercased so the set is closed under lowercasing.
[[nodiscard]] inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open stop-word file: " + path);
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string w = line.substr(start);
    for (char& c : w)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.insert(std::move(w));
  }
  return out;
}

}  // namespace lexshift

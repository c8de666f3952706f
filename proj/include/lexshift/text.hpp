#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "lexshift/common.hpp"
#include "lexshift/porter.hpp"
#include "lexshift/stopwords.hpp"

namespace lexshift {

/// A document reduced to the distinct stems it contains.
using StemSet = std::set<std::string>;

struct PreprocessConfig {
  StopwordSet stopwords = default_stopwords();
  int min_token_length = 3;
  bool alphabetic_only = true;
  bool stemming_enabled = true;
};

namespace detail {

inline bool is_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

// NFC-normalizes and lowercases. Invalid UTF-8 sequences become U+FFFD.
inline std::string normalize_lower(std::string_view text) {
  if (is_ascii(text)) {
    std::string out(text);
    for (char& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString normalized = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");
  normalized.toLower(icu::Locale::getRoot());
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

}  // namespace detail

/// Splits lowercased, NFC-normalized text into maximal runs of [a-z0-9].
/// Every other character, including all non-ASCII code points, is a boundary.
[[nodiscard]] inline std::vector<std::string> tokenize(std::string_view text) {
  std::string norm = detail::normalize_lower(text);
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : norm) {
    bool word_char = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (word_char) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

/// Runs the six preprocessing steps in order (tokenize, lowercase, drop stop
/// words, drop non-alphabetic tokens, drop short tokens, stem) and returns the
/// distinct stems.
[[nodiscard]] inline StemSet preprocess(std::string_view text, const PreprocessConfig& cfg = {}) {
  StemSet out;
  for (auto& tok : tokenize(text)) {
    if (cfg.stopwords.contains(tok)) continue;
    if (cfg.alphabetic_only) {
      bool alpha = true;
      for (char c : tok)
        if (c < 'a' || c > 'z') alpha = false;
      if (!alpha) continue;
    }
    if (static_cast<int>(tok.size()) < cfg.min_token_length) continue;
    out.insert(cfg.stemming_enabled ? porter_stem(tok) : std::move(tok));
  }
  return out;
}

}  // namespace lexshift

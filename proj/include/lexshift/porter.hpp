#pragma once

// Porter (1980) suffix-stripping stemmer, following Martin Porter's reference
// C implementation. That implementation carries two well-known departures from
// the published rules ("abli" -> "able" became "bli" -> "ble", and the extra
// "logi" -> "log" rule in step 2); both are kept so that the output matches the
// reference vocabulary/output pairs distributed with it.

#include <string>
#include <string_view>

namespace lexshift {

namespace detail {

class PorterStemmer {
 public:
  explicit PorterStemmer(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string run() && {
    if (k_ <= 1) return std::move(b_);
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    b_.resize(static_cast<std::size_t>(k_ + 1));
    return std::move(b_);
  }

 private:
  std::string b_;
  int k_;
  int j_ = 0;

  [[nodiscard]] bool cons(int i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of consonant-vowel sequences in b[0..j].
  [[nodiscard]] int m() const {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  [[nodiscard]] bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  [[nodiscard]] bool double_consonant(int j) const {
    if (j < 1) return false;
    if (b_[j] != b_[j - 1]) return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, where the final consonant is not w, x or y.
  [[nodiscard]] bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    char ch = b_[i];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (s.back() != b_[k_]) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ - len + 1), s.size()) != s)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.resize(static_cast<std::size_t>(j_ + 1));
    b_.append(s);
    k_ = j_ + static_cast<int>(s.size());
  }

  void replace_if_measured(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  // Plurals and -ed / -ing.
  void step1ab() {
    if (b_[k_] == 's') {
      if (ends("sses"))
        k_ -= 2;
      else if (ends("ies"))
        set_to("i");
      else if (b_[k_ - 1] != 's')
        --k_;
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at"))
        set_to("ate");
      else if (ends("bl"))
        set_to("ble");
      else if (ends("iz"))
        set_to("ize");
      else if (double_consonant(k_)) {
        --k_;
        char ch = b_[k_];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (m() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[k_] = 'i';
  }

  // Double suffixes map to single ones when the stem has m() > 0.
  void step2() {
    struct Rule {
      std::string_view from, to;
    };
    auto apply = [this](std::initializer_list<Rule> rules) {
      for (const auto& r : rules) {
        if (ends(r.from)) {
          replace_if_measured(r.to);
          return;
        }
      }
    };
    switch (b_[k_ - 1]) {
      case 'a': apply({{"ational", "ate"}, {"tional", "tion"}}); break;
      case 'c': apply({{"enci", "ence"}, {"anci", "ance"}}); break;
      case 'e': apply({{"izer", "ize"}}); break;
      case 'l': apply({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}}); break;
      case 'o': apply({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}}); break;
      case 's': apply({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}}); break;
      case 't': apply({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}); break;
      case 'g': apply({{"logi", "log"}}); break;
      default: break;
    }
  }

  void step3() {
    struct Rule {
      std::string_view from, to;
    };
    auto apply = [this](std::initializer_list<Rule> rules) {
      for (const auto& r : rules) {
        if (ends(r.from)) {
          replace_if_measured(r.to);
          return;
        }
      }
    };
    switch (b_[k_]) {
      case 'e': apply({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}}); break;
      case 'i': apply({{"iciti", "ic"}}); break;
      case 'l': apply({{"ical", "ic"}, {"ful", ""}}); break;
      case 's': apply({{"ness", ""}}); break;
      default: break;
    }
  }

  // Strips -ant, -ence etc. in context <c>vcvc<v>.
  void step4() {
    auto any = [this](std::initializer_list<std::string_view> suffixes) {
      for (auto s : suffixes)
        if (ends(s)) return true;
      return false;
    };
    bool matched = false;
    switch (b_[k_ - 1]) {
      case 'a': matched = any({"al"}); break;
      case 'c': matched = any({"ance", "ence"}); break;
      case 'e': matched = any({"er"}); break;
      case 'i': matched = any({"ic"}); break;
      case 'l': matched = any({"able", "ible"}); break;
      case 'n': matched = any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (b_[j_] == 's' || b_[j_] == 't'))
          matched = true;
        else
          matched = ends("ou");
        break;
      case 's': matched = any({"ism"}); break;
      case 't': matched = any({"ate", "iti"}); break;
      case 'u': matched = any({"ous"}); break;
      case 'v': matched = any({"ive"}); break;
      case 'z': matched = any({"ize"}); break;
      default: break;
    }
    if (matched && m() > 1) k_ = j_;
  }

  // Final -e and -ll.
  void step5() {
    j_ = k_;
    if (b_[k_] == 'e') {
      int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (b_[k_] == 'l' && double_consonant(k_) && m() > 1) --k_;
  }
};

}  // namespace detail

/// Stems a lowercase alphabetic word. Words of one or two letters are returned
/// unchanged.
[[nodiscard]] inline std::string porter_stem(std::string_view word) {
  return detail::PorterStemmer(std::string(word)).run();
}

}  // namespace lexshift

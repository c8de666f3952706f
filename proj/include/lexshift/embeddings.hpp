#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexshift/common.hpp"
#include "lexshift/io.hpp"
#include "lexshift/porter.hpp"

namespace lexshift {

/// Read-only store of L2-normalized word vectors.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw InvalidInput("embedding dimension must be positive");
  }

  /// Adds a vector after normalizing it. Returns false (and stores nothing) for
  /// zero vectors or when the word is already present.
  bool add(const std::string& word, std::vector<double> v) {
    if (static_cast<int>(v.size()) != dimension_)
      throw InvalidInput("vector for '" + word + "' has dimension " + std::to_string(v.size()) + ", expected " +
                         std::to_string(dimension_));
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) return false;
    if (vectors_.contains(word)) return false;
    for (double& x : v) x /= norm;
    vectors_.emplace(word, std::move(v));
    return true;
  }

  [[nodiscard]] int dimension() const { return dimension_; }
  [[nodiscard]] std::size_t size() const { return vectors_.size(); }
  [[nodiscard]] bool contains(const std::string& w) const { return vectors_.contains(w); }
  [[nodiscard]] const std::vector<double>& at(const std::string& w) const {
    auto it = vectors_.find(w);
    if (it == vectors_.end()) throw InvalidInput("no embedding for '" + w + "'");
    return it->second;
  }
  [[nodiscard]] const std::unordered_map<std::string, std::vector<double>>& vectors() const { return vectors_; }

  /// Cosine similarity; vectors are unit length so this is a dot product.
  [[nodiscard]] double cosine(const std::string& a, const std::string& b) const {
    const auto& x = at(a);
    const auto& y = at(b);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  }

  std::size_t rejected_zero = 0;
  std::size_t rejected_duplicate = 0;

 private:
  int dimension_;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// Loads the word2vec text format: a `<count> <dim>` header, then one
/// `<word> <v1> ... <vdim>` line per word. With `stem_keys`, each word is
/// lowercased and Porter-stemmed; the first vector seen for a stem is kept
/// (word2vec files list frequent surface forms first).
[[nodiscard]] inline EmbeddingStore load_embeddings(const std::string& path, bool stem_keys = false) {
  io::LineReader reader(path);
  std::string line;
  if (!reader.next(line)) throw InvalidInput(path + ": empty embedding file");
  std::istringstream header(line);
  long long count = 0;
  int dim = 0;
  if (!(header >> count >> dim) || dim < 1 || count < 0) throw InvalidInput(path + ": malformed header");
  EmbeddingStore store(dim);
  while (reader.next(line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(dim));
    double x = 0.0;
    while (ss >> x) v.push_back(x);
    if (!ss.eof() || static_cast<int>(v.size()) != dim)
      throw InvalidInput(path + ":" + std::to_string(reader.line_number()) + ": expected " + std::to_string(dim) +
                         " numeric components");
    if (stem_keys) {
      bool alpha = !word.empty();
      for (char& c : word) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c < 'a' || c > 'z') alpha = false;
      }
      if (!alpha) continue;
      word = porter_stem(word);
    }
    double norm = 0.0;
    for (double c : v) norm += c * c;
    if (!(norm > 0.0)) {
      ++store.rejected_zero;
      continue;
    }
    if (!store.add(word, std::move(v))) ++store.rejected_duplicate;
  }
  return store;
}

}  // namespace lexshift

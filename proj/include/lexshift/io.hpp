#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "lexshift/common.hpp"

namespace lexshift::io {

/// Reads a text file line by line. Gzip-compressed files are decompressed
/// transparently; plain files are read as-is. Trailing CR is stripped.
class LineReader {
 public:
  explicit LineReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw InvalidInput("cannot open file: " + path);
    gzbuffer(file_, 1 << 16);
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;
  ~LineReader() {
    if (file_) gzclose(file_);
  }

  /// Returns false at end of file.
  bool next(std::string& line) {
    line.clear();
    char buf[8192];
    bool any = false;
    while (gzgets(file_, buf, sizeof buf) != nullptr) {
      any = true;
      line.append(buf);
      if (!line.empty() && line.back() == '\n') break;
    }
    if (!any) {
      int err = 0;
      const char* msg = gzerror(file_, &err);
      if (err != Z_OK && err != Z_STREAM_END) throw Error(std::string("read error: ") + msg);
      return false;
    }
    ++line_number_;
    if (!line.empty() && line.back() == '\n') line.pop_back();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  [[nodiscard]] std::size_t line_number() const { return line_number_; }

 private:
  gzFile file_;
  std::size_t line_number_ = 0;
};

[[nodiscard]] inline std::vector<std::string> read_lines(const std::string& path) {
  LineReader reader(path);
  std::vector<std::string> lines;
  std::string line;
  while (reader.next(line)) lines.push_back(line);
  return lines;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Fixed-precision rendering used for every numeric CSV/JSON field, so that
/// reruns are byte-identical.
[[nodiscard]] inline std::string fmt(double x, int precision = 10) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

/// Writes a file with LF line endings, throwing on failure.
class TextWriter {
 public:
  explicit TextWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot write file: " + path);
  }
  template <typename T>
  TextWriter& operator<<(const T& v) {
    out_ << v;
    return *this;
  }
  void close() {
    out_.close();
    if (!out_) throw Error("failed writing file: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace lexshift::io

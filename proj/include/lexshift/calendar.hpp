#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "lexshift/common.hpp"

namespace lexshift {

/// A calendar month. Months are the sampling unit of every frequency series.
struct YearMonth {
  int year = 1970;
  int month = 1;  // 1..12

  auto operator<=>(const YearMonth&) const = default;

  /// Months elapsed since January of year 0; used for arithmetic on months.
  [[nodiscard]] constexpr int serial() const { return year * 12 + (month - 1); }

  [[nodiscard]] static constexpr YearMonth from_serial(int serial) {
    return YearMonth{serial / 12, serial % 12 + 1};
  }

  [[nodiscard]] constexpr YearMonth plus(int months) const {
    return from_serial(serial() + months);
  }

  [[nodiscard]] std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }
};

/// Number of months from `a` to `b` (negative when `b` precedes `a`).
[[nodiscard]] constexpr int months_between(YearMonth a, YearMonth b) {
  return b.serial() - a.serial();
}

/// A calendar date (UTC).
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  [[nodiscard]] YearMonth year_month() const { return {year, month}; }

  [[nodiscard]] bool valid() const {
    using namespace std::chrono;
    return year_month_day{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                          std::chrono::day{static_cast<unsigned>(day)}}
        .ok();
  }

  [[nodiscard]] std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }
};

/// Parses the date part of an ISO-8601 timestamp: `YYYY-MM-DD` optionally
/// followed by `T...` or a space and a time. Returns nullopt when malformed
/// or when the date does not exist.
[[nodiscard]] inline std::optional<Date> parse_iso_date(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t n, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  Date d;
  if (!digits(0, 4, d.year) || s[4] != '-' || !digits(5, 2, d.month) || s[7] != '-' ||
      !digits(8, 2, d.day))
    return std::nullopt;
  if (s.size() > 10 && s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  if (d.month < 1 || d.month > 12 || !d.valid()) return std::nullopt;
  return d;
}

/// Parses `YYYY-MM` or a full ISO date (the day is ignored).
[[nodiscard]] inline std::optional<YearMonth> parse_year_month(std::string_view s) {
  if (s.size() >= 10) {
    if (auto d = parse_iso_date(s)) return d->year_month();
    return std::nullopt;
  }
  if (s.size() != 7 || s[4] != '-') return std::nullopt;
  int y = 0, m = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    y = y * 10 + (s[i] - '0');
  }
  for (std::size_t i = 5; i < 7; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    m = m * 10 + (s[i] - '0');
  }
  if (m < 1 || m > 12) return std::nullopt;
  return YearMonth{y, m};
}

/// Inclusive range of months [first, last].
struct MonthWindow {
  YearMonth first;
  YearMonth last;

  [[nodiscard]] int size() const { return months_between(first, last) + 1; }
  [[nodiscard]] bool contains(YearMonth ym) const { return first <= ym && ym <= last; }
  [[nodiscard]] int index_of(YearMonth ym) const { return months_between(first, ym); }
  [[nodiscard]] YearMonth at(int index) const { return first.plus(index); }

  /// Throws InvalidInput unless first < last.
  void validate() const {
    if (!(first < last))
      throw InvalidInput("malformed window: " + first.str() + " must precede " + last.str());
  }
};

}  // namespace lexshift

#pragma once

#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace biasdrift {

using Date = std::chrono::year_month_day;

namespace detail {

inline std::optional<int> parse_digits(std::string_view text) {
  if (text.empty()) return std::nullopt;
  for (char c : text)
    if (c < '0' || c > '9') return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Accepts `MM-DD-YY` (two-digit years map to 20YY) and ISO `YYYY-MM-DD`.
/// Returns nullopt for anything else, including impossible calendar dates.
inline std::optional<Date> parse_date(std::string_view text) {
  std::optional<int> y, m, d;
  if (text.size() == 8 && text[2] == '-' && text[5] == '-') {
    m = detail::parse_digits(text.substr(0, 2));
    d = detail::parse_digits(text.substr(3, 2));
    y = detail::parse_digits(text.substr(6, 2));
    if (y) *y += 2000;
  } else if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    y = detail::parse_digits(text.substr(0, 4));
    m = detail::parse_digits(text.substr(5, 2));
    d = detail::parse_digits(text.substr(8, 2));
  } else {
    return std::nullopt;
  }
  if (!y || !m || !d) return std::nullopt;
  Date date{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
            std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_iso(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

inline Date add_days(const Date& date, int days) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

}  // namespace biasdrift

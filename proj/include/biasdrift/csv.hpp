#pragma once

// Readers and writers for the two input formats.
//
//   tallies: date,male,female,cant_identify,not_human,cant_say_gender
//   images:  date,image_id,category,male_persons,female_persons
//
// Columns are matched by header name. Dates are MM-DD-YY or YYYY-MM-DD.
// A file is either accepted whole or rejected with every row diagnostic.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biasdrift/core.hpp"
#include "biasdrift/date.hpp"
#include "biasdrift/error.hpp"

namespace biasdrift {

inline constexpr std::array<std::string_view, 6> kTallyColumns = {
    "date", "male", "female", "cant_identify", "not_human", "cant_say_gender"};
inline constexpr std::array<std::string_view, 5> kImageColumns = {
    "date", "image_id", "category", "male_persons", "female_persons"};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

struct CsvRow {
  std::size_t number = 0;  // 1-based, header is row 1
  std::vector<std::string_view> fields;
};

inline std::optional<double> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value,
                                   std::chars_format::fixed);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

inline std::optional<long long> parse_integer(std::string_view text) {
  if (text.empty()) return std::nullopt;
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

/// Splits `text` into its header and data rows and resolves each required
/// column to an index.
template <std::size_t N>
struct Table {
  std::array<std::size_t, N> column{};
  std::vector<CsvRow> rows;
};

template <std::size_t N>
Table<N> read_table(std::string_view text, const std::array<std::string_view, N>& required) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty() || trim(lines.front()).empty())
    throw ParseError(std::vector<Diagnostic>{{1, "", "missing header row"}});

  std::string_view header = lines.front();
  if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
  const auto names = split_fields(header);

  Table<N> table;
  std::vector<Diagnostic> problems;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t found = names.size();
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == required[c]) found = i;
    if (found == names.size())
      problems.push_back({1, std::string(required[c]), "missing column"});
    table.column[c] = found;
  }
  if (!problems.empty()) throw ParseError(std::move(problems));

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    table.rows.push_back({i + 1, split_fields(lines[i])});
  }
  for (auto& row : table.rows) {
    if (row.fields.size() != names.size())
      problems.push_back({row.number, "",
                          "expected " + std::to_string(names.size()) + " fields, found " +
                              std::to_string(row.fields.size())});
  }
  if (!problems.empty()) throw ParseError(std::move(problems));
  return table;
}

inline std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Shortest text that reads back to the same double.
inline std::string format_shortest(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buf[400];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  return std::string(buf, ptr);
}

}  // namespace detail

inline std::vector<DailyTally> parse_tallies_csv(std::string_view text) {
  const auto table = detail::read_table(text, kTallyColumns);
  std::vector<Diagnostic> problems;
  std::vector<DailyTally> tallies;
  std::set<Date> seen;

  for (const auto& row : table.rows) {
    DailyTally tally;
    bool ok = true;
    const std::string_view date_text = row.fields[table.column[0]];
    if (auto date = parse_date(date_text)) {
      tally.date = *date;
      if (!seen.insert(*date).second) {
        problems.push_back({row.number, "date", "duplicate date " + format_iso(*date)});
        ok = false;
      }
    } else {
      problems.push_back({row.number, "date", "unparseable date `" + std::string(date_text) + "`"});
      ok = false;
    }

    double* targets[] = {&tally.male, &tally.female, &tally.cant_identify, &tally.not_human,
                         &tally.cant_say_gender};
    for (std::size_t c = 1; c < kTallyColumns.size(); ++c) {
      const std::string field(kTallyColumns[c]);
      const std::string_view raw = row.fields[table.column[c]];
      const auto value = detail::parse_decimal(raw);
      if (!value) {
        problems.push_back({row.number, field, "not a decimal number: `" + std::string(raw) + "`"});
        ok = false;
      } else if (*value < 0.0) {
        problems.push_back({row.number, field, "negative count " + std::string(raw)});
        ok = false;
      } else {
        *targets[c - 1] = *value;
      }
    }
    if (ok) tallies.push_back(tally);
  }
  if (!problems.empty()) throw ParseError(std::move(problems));
  return tallies;
}

inline std::vector<DailyTally> parse_tallies_csv(std::istream& in) {
  return parse_tallies_csv(detail::slurp(in));
}

/// Writes ISO dates in the order given. Values are printed in shortest
/// round-trip form so the output parses back to identical doubles.
inline std::string serialize_tallies_csv(std::span<const DailyTally> tallies) {
  std::string out;
  for (std::size_t c = 0; c < kTallyColumns.size(); ++c) {
    if (c) out += ',';
    out += kTallyColumns[c];
  }
  out += '\n';
  for (const auto& t : tallies) {
    out += format_iso(t.date);
    for (double v : {t.male, t.female, t.cant_identify, t.not_human, t.cant_say_gender}) {
      out += ',';
      out += detail::format_shortest(v);
    }
    out += '\n';
  }
  return out;
}

inline std::optional<ImageCategory> parse_category(std::string_view text) {
  if (text == "gendered") return ImageCategory::GenderedPersons;
  if (text == "cant_say_gender") return ImageCategory::CantSayGender;
  if (text == "cant_identify") return ImageCategory::CantIdentifyProtagonist;
  if (text == "not_human") return ImageCategory::NotHuman;
  return std::nullopt;
}

inline const char* category_name(ImageCategory category) noexcept {
  switch (category) {
    case ImageCategory::GenderedPersons: return "gendered";
    case ImageCategory::CantSayGender: return "cant_say_gender";
    case ImageCategory::CantIdentifyProtagonist: return "cant_identify";
    case ImageCategory::NotHuman: return "not_human";
  }
  return "not_human";
}

/// Gendered rows keep their raw person counts in the split; tally_images
/// applies the mass convention.
inline std::vector<ImageLabelRecord> parse_images_csv(std::string_view text) {
  const auto table = detail::read_table(text, kImageColumns);
  std::vector<Diagnostic> problems;
  std::vector<ImageLabelRecord> records;
  std::set<std::pair<Date, std::string>> seen;

  for (const auto& row : table.rows) {
    const std::string_view date_text = row.fields[table.column[0]];
    const std::string image_id(row.fields[table.column[1]]);
    const std::string_view category_text = row.fields[table.column[2]];
    const std::size_t before = problems.size();

    const auto date = parse_date(date_text);
    if (!date)
      problems.push_back({row.number, "date", "unparseable date `" + std::string(date_text) + "`"});
    if (image_id.empty()) problems.push_back({row.number, "image_id", "empty image id"});
    const auto category = parse_category(category_text);
    if (!category)
      problems.push_back(
          {row.number, "category", "unknown category `" + std::string(category_text) + "`"});

    long long counts[2] = {0, 0};
    for (std::size_t c = 3; c < 5; ++c) {
      const std::string field(kImageColumns[c]);
      const std::string_view raw = row.fields[table.column[c]];
      const auto value = detail::parse_integer(raw);
      if (!value)
        problems.push_back({row.number, field, "not an integer: `" + std::string(raw) + "`"});
      else if (*value < 0)
        problems.push_back({row.number, field, "negative person count " + std::string(raw)});
      else
        counts[c - 3] = *value;
    }
    if (problems.size() != before) continue;

    if (!seen.emplace(*date, image_id).second) {
      problems.push_back({row.number, "image_id",
                          "image `" + image_id + "` already labeled on " + format_iso(*date)});
      continue;
    }
    if (*category == ImageCategory::GenderedPersons) {
      if (counts[0] + counts[1] == 0) {
        problems.push_back({row.number, "male_persons",
                            "gendered image needs at least one male or female person"});
        continue;
      }
      records.push_back(ImageLabelRecord::gendered(
          *date, image_id,
          GenderSplit::from_counts(static_cast<double>(counts[0]), static_cast<double>(counts[1]))));
    } else {
      if (counts[0] != 0 || counts[1] != 0) {
        problems.push_back({row.number, counts[0] != 0 ? "male_persons" : "female_persons",
                            std::string("person counts must be 0 for category ") +
                                category_name(*category)});
        continue;
      }
      records.push_back(ImageLabelRecord::ungendered(*date, image_id, *category));
    }
  }
  if (!problems.empty()) throw ParseError(std::move(problems));
  return records;
}

inline std::vector<ImageLabelRecord> parse_images_csv(std::istream& in) {
  return parse_images_csv(detail::slurp(in));
}

}  // namespace biasdrift

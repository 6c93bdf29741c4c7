#pragma once

// Serialization of a TemporalBiasReport plus its daily series.
//
// JSON layout (keys always in this order):
//   schema_version, query_label, generated_at,
//   metrics{first_bias_pct, last_bias_pct, roc_pct_per_obs,
//           roc_signed_pct_per_obs, max_bias_pct, min_bias_pct, range_pct,
//           rmsb_pct, inflection_dates, rounding_mode, n_observations},
//   series[{date, bias_pct}]
//
// Percentages carry 2 fractional digits and rates 4. Gap days and missing
// rates are null. The CSV form writes `date,bias_pct` rows and then a
// `# metrics` block of `# key=value` lines.

#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biasdrift/core.hpp"
#include "biasdrift/date.hpp"
#include "biasdrift/error.hpp"
#include "biasdrift/metrics.hpp"

namespace biasdrift {

inline constexpr std::string_view kSchemaVersion = "1.0.0";
inline constexpr std::string_view kFixedTimestamp = "1970-01-01T00:00:00Z";

enum class ReportFormat { Json, Csv };

struct SeriesValue {
  Date date{};
  std::optional<double> bias_pct;

  friend bool operator==(const SeriesValue&, const SeriesValue&) = default;
};

struct ReportDocument {
  std::string schema_version{kSchemaVersion};
  std::string query_label;
  std::string generated_at{kFixedTimestamp};
  TemporalBiasReport metrics;
  std::vector<SeriesValue> series;
};

inline bool is_semver(std::string_view v) {
  int parts = 0;
  std::size_t digits = 0;
  for (char c : v) {
    if (c >= '0' && c <= '9') {
      ++digits;
    } else if (c == '.' && digits > 0) {
      ++parts;
      digits = 0;
    } else {
      return false;
    }
  }
  return parts == 2 && digits > 0;
}

inline std::string current_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  ::gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

namespace detail {

inline std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  std::string out = buf;
  // "-0.00" reads as zero; print it that way.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos)
    out.erase(0, 1);
  return out;
}

inline std::string pct(double v) { return fixed(v, 2); }
inline std::string rate(double v) { return fixed(v, 4); }

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

}  // namespace detail

inline ReportDocument make_document(const TemporalBiasReport& report, const BiasSeries& series,
                                    std::string generated_at = std::string(kFixedTimestamp)) {
  ReportDocument doc;
  doc.query_label = report.query_label;
  doc.generated_at = std::move(generated_at);
  doc.metrics = report;
  for (const auto& e : series.entries())
    doc.series.push_back({e.date, e.point ? std::optional<double>(e.point->bias_pct)
                                          : std::nullopt});
  return doc;
}

inline std::string emit_json(const ReportDocument& doc) {
  using detail::pct;
  using detail::json_string;
  using detail::rate;
  const auto& m = doc.metrics;
  const auto opt_rate = [](const std::optional<double>& v) {
    return v ? rate(*v) : std::string("null");
  };

  std::string out = "{\n";
  out += "  \"schema_version\": " + json_string(doc.schema_version) + ",\n";
  out += "  \"query_label\": " + json_string(doc.query_label) + ",\n";
  out += "  \"generated_at\": " + json_string(doc.generated_at) + ",\n";
  out += "  \"metrics\": {\n";
  out += "    \"first_bias_pct\": " + pct(m.first_bias_pct) + ",\n";
  out += "    \"last_bias_pct\": " + pct(m.last_bias_pct) + ",\n";
  out += "    \"roc_pct_per_obs\": " + opt_rate(m.roc_pct_per_obs) + ",\n";
  out += "    \"roc_signed_pct_per_obs\": " + opt_rate(m.roc_signed_pct_per_obs) + ",\n";
  out += "    \"max_bias_pct\": " + pct(m.max_bias_pct) + ",\n";
  out += "    \"min_bias_pct\": " + pct(m.min_bias_pct) + ",\n";
  out += "    \"range_pct\": " + pct(m.range_pct) + ",\n";
  out += "    \"rmsb_pct\": " + pct(m.rmsb_pct) + ",\n";
  out += "    \"inflection_dates\": [";
  for (std::size_t i = 0; i < m.inflection_dates.size(); ++i) {
    if (i) out += ", ";
    out += json_string(format_iso(m.inflection_dates[i]));
  }
  out += "],\n";
  out += "    \"rounding_mode\": " + json_string(rounding_mode_name(m.rounding_mode)) + ",\n";
  out += "    \"n_observations\": " + std::to_string(m.n_observations) + "\n";
  out += "  },\n";
  out += "  \"series\": [";
  for (std::size_t i = 0; i < doc.series.size(); ++i) {
    const auto& s = doc.series[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"date\": " + json_string(format_iso(s.date)) +
           ", \"bias_pct\": " + (s.bias_pct ? pct(*s.bias_pct) : std::string("null")) + "}";
  }
  out += doc.series.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

inline std::string emit_csv(const ReportDocument& doc) {
  using detail::pct;
  using detail::rate;
  const auto& m = doc.metrics;
  std::string out = "date,bias_pct\n";
  for (const auto& s : doc.series)
    out += format_iso(s.date) + "," + (s.bias_pct ? pct(*s.bias_pct) : std::string()) + "\n";

  std::string dates;
  for (std::size_t i = 0; i < m.inflection_dates.size(); ++i) {
    if (i) dates += ';';
    dates += format_iso(m.inflection_dates[i]);
  }
  const auto line = [&out](std::string_view key, const std::string& value) {
    out += "# ";
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  out += "# metrics\n";
  line("schema_version", doc.schema_version);
  line("query_label", doc.query_label);
  line("generated_at", doc.generated_at);
  line("first_bias_pct", pct(m.first_bias_pct));
  line("last_bias_pct", pct(m.last_bias_pct));
  line("roc_pct_per_obs", m.roc_pct_per_obs ? rate(*m.roc_pct_per_obs) : "");
  line("roc_signed_pct_per_obs", m.roc_signed_pct_per_obs ? rate(*m.roc_signed_pct_per_obs) : "");
  line("max_bias_pct", pct(m.max_bias_pct));
  line("min_bias_pct", pct(m.min_bias_pct));
  line("range_pct", pct(m.range_pct));
  line("rmsb_pct", pct(m.rmsb_pct));
  line("inflection_dates", dates);
  line("rounding_mode", rounding_mode_name(m.rounding_mode));
  line("n_observations", std::to_string(m.n_observations));
  return out;
}

inline std::string emit_document(const ReportDocument& doc, ReportFormat format) {
  return format == ReportFormat::Json ? emit_json(doc) : emit_csv(doc);
}

inline std::string emit_report(const TemporalBiasReport& report, const BiasSeries& series,
                               ReportFormat format,
                               std::string generated_at = std::string(kFixedTimestamp)) {
  return emit_document(make_document(report, series, std::move(generated_at)), format);
}

/// Reads a JSON report back. Numbers keep the precision they were written
/// with, so re-emitting is byte-stable.
inline ReportDocument parse_report_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what());
  }
  const auto date_of = [](const nlohmann::json& v) {
    const auto d = parse_date(v.get<std::string>());
    if (!d) throw ParseError("invalid date in report: " + v.dump());
    return *d;
  };
  const auto opt = [](const nlohmann::json& v) {
    return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
  };

  try {
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<std::string>();
    doc.query_label = j.at("query_label").get<std::string>();
    doc.generated_at = j.at("generated_at").get<std::string>();
    const auto& m = j.at("metrics");
    auto& r = doc.metrics;
    r.query_label = doc.query_label;
    r.first_bias_pct = m.at("first_bias_pct").get<double>();
    r.last_bias_pct = m.at("last_bias_pct").get<double>();
    r.roc_pct_per_obs = opt(m.at("roc_pct_per_obs"));
    r.roc_signed_pct_per_obs = opt(m.at("roc_signed_pct_per_obs"));
    r.max_bias_pct = m.at("max_bias_pct").get<double>();
    r.min_bias_pct = m.at("min_bias_pct").get<double>();
    r.range_pct = m.at("range_pct").get<double>();
    r.rmsb_pct = m.at("rmsb_pct").get<double>();
    for (const auto& d : m.at("inflection_dates")) r.inflection_dates.push_back(date_of(d));
    const auto mode = m.at("rounding_mode").get<std::string>();
    if (mode != "exact" && mode != "paper") throw ParseError("unknown rounding_mode " + mode);
    r.rounding_mode = mode == "exact" ? RoundingMode::Exact : RoundingMode::PaperRounded;
    r.n_observations = m.at("n_observations").get<std::size_t>();
    for (const auto& s : j.at("series")) {
      const Date d = date_of(s.at("date"));
      if (!doc.series.empty() && !(doc.series.back().date < d))
        throw ParseError("report series dates must be strictly increasing at " + format_iso(d));
      doc.series.push_back({d, opt(s.at("bias_pct"))});
    }
    if (!is_semver(doc.schema_version))
      throw ParseError("schema_version `" + doc.schema_version + "` is not MAJOR.MINOR.PATCH");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

}  // namespace biasdrift

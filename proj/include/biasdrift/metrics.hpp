#pragma once

// Temporal metrics over a BiasSeries: rate of change, signed extrema and
// range, root mean square of bias, and sign-change inflection dates.
// Gap days are skipped everywhere and n counts only defined points.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "biasdrift/core.hpp"

namespace biasdrift {

enum class RoundingMode {
  Exact,
  PaperRounded,  // daily biases rounded to whole percent before ROC and extrema
};

inline const char* rounding_mode_name(RoundingMode mode) noexcept {
  return mode == RoundingMode::Exact ? "exact" : "paper";
}

/// Half away from zero, to whole percent.
inline double round_to_percent(double bias_pct) noexcept { return std::round(bias_pct); }

namespace detail {

inline std::vector<double> require_points(const BiasSeries& series, std::size_t minimum) {
  std::vector<double> values = series.defined_values();
  if (values.size() < minimum) {
    if (minimum <= 1)
      throw DataError(DataErrorKind::EmptySeries, "empty series: no defined bias values");
    throw DataError(DataErrorKind::InsufficientSeries,
                    "insufficient series: need at least " + std::to_string(minimum) +
                        " defined bias values, have " + std::to_string(values.size()));
  }
  return values;
}

}  // namespace detail

/// (|last| - |first|) / n. Negative means the bias is shrinking in
/// magnitude, whichever group it favours.
inline double rate_of_change(const BiasSeries& series) {
  const auto values = detail::require_points(series, 2);
  const double n = static_cast<double>(values.size());
  return (std::abs(values.back()) - std::abs(values.front())) / n;
}

/// (last - first) / n over signed bias values.
inline double rate_of_change_signed(const BiasSeries& series) {
  const auto values = detail::require_points(series, 2);
  const double n = static_cast<double>(values.size());
  return (values.back() - values.front()) / n;
}

struct BiasExtrema {
  double max_bias_pct = 0.0;
  Date max_date{};
  double min_bias_pct = 0.0;
  Date min_date{};
  double range_pct = 0.0;
};

/// Signed extrema. When a value repeats, the earliest date is reported.
inline BiasExtrema bias_extrema(const BiasSeries& series) {
  const auto points = series.defined_points();
  if (points.empty())
    throw DataError(DataErrorKind::EmptySeries, "empty series: no defined bias values");
  BiasExtrema out{points.front().bias_pct, points.front().date, points.front().bias_pct,
                  points.front().date, 0.0};
  for (const auto& p : points) {
    if (p.bias_pct > out.max_bias_pct) {
      out.max_bias_pct = p.bias_pct;
      out.max_date = p.date;
    }
    if (p.bias_pct < out.min_bias_pct) {
      out.min_bias_pct = p.bias_pct;
      out.min_date = p.date;
    }
  }
  out.range_pct = out.max_bias_pct - out.min_bias_pct;
  return out;
}

inline double rmsb(const BiasSeries& series) {
  const auto values = detail::require_points(series, 1);
  double sum_sq = 0.0;
  for (double b : values) sum_sq += b * b;
  return std::sqrt(sum_sq / static_cast<double>(values.size()));
}

/// Dates whose bias sign differs from the previous defined point. Zero
/// counts as positive.
inline std::vector<Date> inflection_points(const BiasSeries& series) {
  const auto points = series.defined_points();
  if (points.size() < 2)
    throw DataError(DataErrorKind::InsufficientSeries,
                    "insufficient series: inflection points need at least 2 defined bias values");
  std::vector<Date> dates;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const bool was_negative = points[i - 1].bias_pct < 0.0;
    const bool is_negative = points[i].bias_pct < 0.0;
    if (was_negative != is_negative) dates.push_back(points[i].date);
  }
  return dates;
}

/// Copy of `series` with every defined bias rounded to whole percent.
/// Representation percentages are left untouched.
inline BiasSeries round_series(const BiasSeries& series) {
  std::vector<SeriesEntry> entries = series.entries();
  for (auto& e : entries)
    if (e.point) e.point->bias_pct = round_to_percent(e.point->bias_pct);
  return BiasSeries(std::move(entries));
}

struct TemporalBiasReport {
  std::string query_label;
  std::size_t n_observations = 0;
  double first_bias_pct = 0.0;
  double last_bias_pct = 0.0;
  // Absent when the series has fewer than two defined points.
  std::optional<double> roc_pct_per_obs;
  std::optional<double> roc_signed_pct_per_obs;
  double max_bias_pct = 0.0;
  double min_bias_pct = 0.0;
  double range_pct = 0.0;
  double rmsb_pct = 0.0;
  std::vector<Date> inflection_dates;
  RoundingMode rounding_mode = RoundingMode::Exact;
  // Why the rate of change is missing, if it is.
  std::string roc_error;
};

/// Collects every metric for one query. In PaperRounded mode the endpoints,
/// rates and extrema come from the rounded series; RMSB and inflection dates
/// always use the unrounded values.
inline TemporalBiasReport report(const BiasSeries& series, std::string label,
                                 RoundingMode mode = RoundingMode::Exact) {
  const auto exact_values = detail::require_points(series, 1);
  const BiasSeries shown = mode == RoundingMode::PaperRounded ? round_series(series) : series;
  const auto shown_values = shown.defined_values();

  TemporalBiasReport out;
  out.query_label = std::move(label);
  out.rounding_mode = mode;
  out.n_observations = exact_values.size();
  out.first_bias_pct = shown_values.front();
  out.last_bias_pct = shown_values.back();

  const BiasExtrema extrema = bias_extrema(shown);
  out.max_bias_pct = extrema.max_bias_pct;
  out.min_bias_pct = extrema.min_bias_pct;
  out.range_pct = extrema.range_pct;
  out.rmsb_pct = rmsb(series);

  if (exact_values.size() >= 2) {
    out.roc_pct_per_obs = rate_of_change(shown);
    out.roc_signed_pct_per_obs = rate_of_change_signed(shown);
    out.inflection_dates = inflection_points(series);
  } else {
    try {
      rate_of_change(shown);
    } catch (const DataError& e) {
      out.roc_error = e.what();
    }
  }
  return out;
}

}  // namespace biasdrift

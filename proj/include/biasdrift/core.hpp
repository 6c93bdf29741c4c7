#pragma once

// Domain types and per-day computations: image labels are aggregated into a
// DailyTally, and a tally is turned into representation percentages and a
// signed bias value (male representation % minus female representation %).

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biasdrift/date.hpp"
#include "biasdrift/error.hpp"

namespace biasdrift {

/// Gender mass attached to one image. For an image read from labels these
/// are person counts; `unit_mass()` rescales them so the image weighs 1.
struct GenderSplit {
  double male_score = 0.0;
  double female_score = 0.0;

  static GenderSplit from_counts(double male, double female) {
    if (!(male >= 0.0) || !(female >= 0.0))
      throw DataError(DataErrorKind::InvalidRecord, "gender scores must be non-negative");
    return GenderSplit{male, female};
  }

  double total() const noexcept { return male_score + female_score; }

  /// Splits a single unit of mass in the ratio of presence: 2 men and 1 woman
  /// become (2/3, 1/3).
  GenderSplit unit_mass() const {
    const double sum = total();
    if (!(sum > 0.0))
      throw DataError(DataErrorKind::InvalidRecord, "cannot normalize an empty gender split");
    return GenderSplit{male_score / sum, female_score / sum};
  }

  friend bool operator==(const GenderSplit&, const GenderSplit&) = default;
};

enum class ImageCategory {
  GenderedPersons,
  CantSayGender,
  CantIdentifyProtagonist,
  NotHuman,
};

/// One labeled image. A GenderSplit is carried exactly when the category is
/// GenderedPersons, and that split always has positive mass.
class ImageLabelRecord {
 public:
  static ImageLabelRecord gendered(Date date, std::string image_id, GenderSplit split) {
    if (!(split.male_score >= 0.0) || !(split.female_score >= 0.0) || !(split.total() > 0.0))
      throw DataError(DataErrorKind::InvalidRecord,
                      "gendered image `" + image_id + "` needs at least one male or female person");
    return ImageLabelRecord(date, std::move(image_id), ImageCategory::GenderedPersons, split);
  }

  static ImageLabelRecord ungendered(Date date, std::string image_id, ImageCategory category) {
    if (category == ImageCategory::GenderedPersons)
      throw DataError(DataErrorKind::InvalidRecord,
                      "image `" + image_id + "` is gendered but has no split");
    return ImageLabelRecord(date, std::move(image_id), category, std::nullopt);
  }

  const Date& date() const noexcept { return date_; }
  const std::string& image_id() const noexcept { return image_id_; }
  ImageCategory category() const noexcept { return category_; }
  const std::optional<GenderSplit>& split() const noexcept { return split_; }

 private:
  ImageLabelRecord(Date date, std::string image_id, ImageCategory category,
                   std::optional<GenderSplit> split)
      : date_(date), image_id_(std::move(image_id)), category_(category), split_(split) {}

  Date date_;
  std::string image_id_;
  ImageCategory category_;
  std::optional<GenderSplit> split_;
};

/// Per-day totals in the five labeling categories. Male and female are
/// fractional because multi-person images are split between them.
struct DailyTally {
  Date date{};
  double male = 0.0;
  double female = 0.0;
  double cant_identify = 0.0;
  double not_human = 0.0;
  double cant_say_gender = 0.0;

  double total() const noexcept {
    return male + female + cant_identify + not_human + cant_say_gender;
  }

  friend bool operator==(const DailyTally&, const DailyTally&) = default;
};

struct BiasPoint {
  Date date{};
  double male_repr_pct = 0.0;
  double female_repr_pct = 0.0;
  double bias_pct = 0.0;

  friend bool operator==(const BiasPoint&, const BiasPoint&) = default;
};

/// How a gendered image's persons turn into tally mass.
enum class MassConvention {
  UnitPerImage,  // each image weighs 1, split in the ratio of presence
  PerPerson,     // each identifiable person weighs 1
};

/// Aggregates one day's labeled images. Every record must carry `date`.
inline DailyTally tally_images(Date date, std::span<const ImageLabelRecord> records,
                               MassConvention convention = MassConvention::UnitPerImage) {
  DailyTally tally{.date = date};
  for (const auto& record : records) {
    if (record.date() != date)
      throw DataError(DataErrorKind::MixedDates,
                      "image `" + record.image_id() + "` is dated " + format_iso(record.date()) +
                          " but the tally is for " + format_iso(date));
    switch (record.category()) {
      case ImageCategory::GenderedPersons: {
        const GenderSplit split = convention == MassConvention::UnitPerImage
                                      ? record.split()->unit_mass()
                                      : *record.split();
        tally.male += split.male_score;
        tally.female += split.female_score;
        break;
      }
      case ImageCategory::CantSayGender: tally.cant_say_gender += 1.0; break;
      case ImageCategory::CantIdentifyProtagonist: tally.cant_identify += 1.0; break;
      case ImageCategory::NotHuman: tally.not_human += 1.0; break;
    }
  }
  return tally;
}

/// Groups records by date and tallies each day, in date order.
inline std::vector<DailyTally> tally_by_date(
    std::span<const ImageLabelRecord> records,
    MassConvention convention = MassConvention::UnitPerImage) {
  std::vector<Date> dates;
  for (const auto& r : records) dates.push_back(r.date());
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());

  std::vector<DailyTally> tallies;
  tallies.reserve(dates.size());
  for (const Date& day : dates) {
    std::vector<ImageLabelRecord> same_day;
    for (const auto& r : records)
      if (r.date() == day) same_day.push_back(r);
    tallies.push_back(tally_images(day, same_day, convention));
  }
  return tallies;
}

/// Only the male and female mass enters the denominator; the other three
/// categories carry no gender and are ignored here.
inline BiasPoint representation(const DailyTally& tally) {
  const double gendered = tally.male + tally.female;
  if (!(gendered > 0.0))
    throw DataError(DataErrorKind::UndefinedBias,
                    "undefined bias on " + format_iso(tally.date) +
                        ": no male or female persons observed");
  BiasPoint point{.date = tally.date};
  point.male_repr_pct = tally.male / gendered * 100.0;
  point.female_repr_pct = tally.female / gendered * 100.0;
  point.bias_pct = point.male_repr_pct - point.female_repr_pct;
  return point;
}

/// A day in a series. Days whose bias is undefined are kept as gaps.
struct SeriesEntry {
  Date date{};
  std::optional<BiasPoint> point;

  bool is_gap() const noexcept { return !point.has_value(); }
};

class BiasSeries {
 public:
  BiasSeries() = default;

  /// Entries must be strictly increasing by date.
  explicit BiasSeries(std::vector<SeriesEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
      const Date& prev = entries_[i - 1].date;
      const Date& cur = entries_[i].date;
      if (cur == prev)
        throw DataError(DataErrorKind::OutOfOrder, "duplicate date " + format_iso(cur));
      if (cur < prev)
        throw DataError(DataErrorKind::OutOfOrder, "date " + format_iso(cur) +
                                                       " is out of order after " + format_iso(prev));
    }
  }

  /// Builds consecutive days starting at `start` from raw bias values.
  static BiasSeries from_bias_values(std::span<const double> biases, Date start) {
    std::vector<SeriesEntry> entries;
    entries.reserve(biases.size());
    for (std::size_t i = 0; i < biases.size(); ++i) {
      const Date day = add_days(start, static_cast<int>(i));
      const double b = biases[i];
      entries.push_back({day, BiasPoint{day, (100.0 + b) / 2.0, (100.0 - b) / 2.0, b}});
    }
    return BiasSeries(std::move(entries));
  }

  const std::vector<SeriesEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<BiasPoint> defined_points() const {
    std::vector<BiasPoint> out;
    for (const auto& e : entries_)
      if (e.point) out.push_back(*e.point);
    return out;
  }

  std::vector<double> defined_values() const {
    std::vector<double> out;
    for (const auto& e : entries_)
      if (e.point) out.push_back(e.point->bias_pct);
    return out;
  }

 private:
  std::vector<SeriesEntry> entries_;
};

inline BiasSeries bias_series(std::span<const DailyTally> tallies) {
  std::vector<SeriesEntry> entries;
  entries.reserve(tallies.size());
  for (const auto& tally : tallies) {
    SeriesEntry entry{.date = tally.date, .point = std::nullopt};
    if (tally.male + tally.female > 0.0) entry.point = representation(tally);
    entries.push_back(std::move(entry));
  }
  return BiasSeries(std::move(entries));
}

}  // namespace biasdrift

#pragma once

// Append-only audit store: one tallies CSV per query under a root directory,
// named `<slug(query)>.csv`. Writers hold an advisory lock on `<root>/.lock`
// and replace files by write-to-temp and rename, so a failed write leaves the
// previous contents in place.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "biasdrift/core.hpp"
#include "biasdrift/csv.hpp"
#include "biasdrift/error.hpp"

namespace biasdrift {

/// Lowercase ASCII alphanumerics; every other run of characters collapses to
/// a single '-'. `#Doctor` becomes `doctor`.
inline std::string slug(std::string_view query) {
  std::string out;
  bool pending_dash = false;
  for (unsigned char c : query) {
    if (std::isalnum(c)) {
      if (pending_dash && !out.empty()) out += '-';
      pending_dash = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_dash = true;
    }
  }
  return out.empty() ? std::string("query") : out;
}

/// Replaces `path` with `contents` via a sibling temp file and rename.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw DataError(DataErrorKind::Io, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw DataError(DataErrorKind::Io, "cannot replace " + path.string() + ": " + ec.message());
  }
}

enum class AppendMode { RejectDuplicates, Overwrite };

class AuditStore {
 public:
  explicit AuditStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec || !std::filesystem::is_directory(root_))
      throw DataError(DataErrorKind::Io, "cannot open store at " + root_.string());
  }

  const std::filesystem::path& root() const noexcept { return root_; }

  std::filesystem::path file_for(std::string_view query) const {
    return root_ / (slug(query) + ".csv");
  }

  /// Tallies for `query` in date order; empty when nothing was stored.
  std::vector<DailyTally> load(std::string_view query) const {
    const auto path = file_for(query);
    if (!std::filesystem::exists(path)) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::Io, "cannot read " + path.string());
    auto tallies = parse_tallies_csv(in);
    std::sort(tallies.begin(), tallies.end(),
              [](const DailyTally& a, const DailyTally& b) { return a.date < b.date; });
    return tallies;
  }

  void append(std::string_view query, const DailyTally& tally,
              AppendMode mode = AppendMode::RejectDuplicates) {
    append_all(query, std::span<const DailyTally>(&tally, 1), mode);
  }

  /// Adds every tally or none. Without Overwrite, any date already stored
  /// (or repeated within `tallies`) is a conflict.
  void append_all(std::string_view query, std::span<const DailyTally> tallies,
                  AppendMode mode = AppendMode::RejectDuplicates) {
    const Lock lock(root_ / ".lock");
    std::map<Date, DailyTally> merged;
    for (const auto& t : load(query)) merged.emplace(t.date, t);

    std::map<Date, DailyTally> incoming;
    for (const auto& t : tallies) {
      const bool repeated = !incoming.emplace(t.date, t).second;
      if (repeated && mode == AppendMode::RejectDuplicates)
        throw DataError(DataErrorKind::Conflict,
                        "conflict: " + format_iso(t.date) + " appears twice in the input");
      if (repeated) incoming[t.date] = t;
      if (mode == AppendMode::RejectDuplicates && merged.contains(t.date))
        throw DataError(DataErrorKind::Conflict, "conflict: " + std::string(query) +
                                                     " already has a tally for " +
                                                     format_iso(t.date));
    }
    for (const auto& [date, t] : incoming) merged.insert_or_assign(date, t);

    std::vector<DailyTally> ordered;
    ordered.reserve(merged.size());
    for (const auto& [date, t] : merged) ordered.push_back(t);
    write_file_atomic(file_for(query), serialize_tallies_csv(ordered));
  }

 private:
  class Lock {
   public:
    explicit Lock(const std::filesystem::path& path)
        : fd_(::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644)) {
      if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
        if (fd_ >= 0) ::close(fd_);
        throw DataError(DataErrorKind::Io, "cannot lock " + path.string());
      }
    }
    ~Lock() {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
    Lock(const Lock&) = delete;
    Lock& operator=(const Lock&) = delete;

   private:
    int fd_;
  };

  std::filesystem::path root_;
};

}  // namespace biasdrift

#pragma once

// biasdrift <tally|metrics|report|append> --input PATH [--store PATH]
//           [--query LABEL] [--rounding exact|paper] [--format json|csv]
//           [--output PATH] [--timestamp fixed|now] [--overwrite]
//
// Exit status: 0 success, 1 input or data errors, 2 usage errors. Errors are
// one stderr line starting with E_USAGE, E_PARSE or E_DATA.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biasdrift/core.hpp"
#include "biasdrift/csv.hpp"
#include "biasdrift/emit.hpp"
#include "biasdrift/error.hpp"
#include "biasdrift/metrics.hpp"
#include "biasdrift/store.hpp"

namespace biasdrift::cli {

enum class Subcommand { Tally, Metrics, Report, Append };

struct CliConfig {
  Subcommand subcommand = Subcommand::Metrics;
  std::string input_path;
  std::optional<std::string> store_path;
  std::string query_label;
  RoundingMode rounding_mode = RoundingMode::Exact;
  ReportFormat output_format = ReportFormat::Json;
  std::optional<std::string> output_path;
  bool fixed_timestamp = false;
  bool overwrite = false;
};

/// Thrown by parse_args for --help; carries the text to print.
struct HelpRequested {
  std::string text;
};

namespace detail {

inline std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string one_line(std::string text) {
  for (char& c : text)
    if (c == '\n' || c == '\r') c = ' ';
  return text;
}

inline std::string default_label(const CliConfig& config) {
  if (!config.query_label.empty()) return config.query_label;
  if (!config.input_path.empty())
    return std::filesystem::path(config.input_path).stem().string();
  throw UsageError("--query is required when --input is not given");
}

inline std::string render(const CliConfig& config, const BiasSeries& series) {
  const TemporalBiasReport r = report(series, default_label(config), config.rounding_mode);
  return emit_report(r, series, config.output_format,
                     config.fixed_timestamp ? std::string(kFixedTimestamp) : current_timestamp());
}

inline std::string execute(const CliConfig& config) {
  switch (config.subcommand) {
    case Subcommand::Tally: {
      const auto records = parse_images_csv(read_input(config.input_path));
      return serialize_tallies_csv(tally_by_date(records));
    }
    case Subcommand::Report: {
      const auto records = parse_images_csv(read_input(config.input_path));
      const auto tallies = tally_by_date(records);
      return render(config, bias_series(tallies));
    }
    case Subcommand::Metrics: {
      std::vector<DailyTally> tallies;
      if (!config.input_path.empty()) {
        tallies = parse_tallies_csv(read_input(config.input_path));
      } else if (config.store_path) {
        tallies = AuditStore(*config.store_path).load(default_label(config));
      } else {
        throw UsageError("metrics needs --input, or --store with --query");
      }
      std::sort(tallies.begin(), tallies.end(),
                [](const DailyTally& a, const DailyTally& b) { return a.date < b.date; });
      return render(config, bias_series(tallies));
    }
    case Subcommand::Append: {
      if (config.input_path.empty()) throw UsageError("append needs --input");
      if (!config.store_path) throw UsageError("append needs --store or BIASDRIFT_STORE");
      const auto tallies = parse_tallies_csv(read_input(config.input_path));
      const std::string label = default_label(config);
      AuditStore store(*config.store_path);
      store.append_all(label, tallies,
                       config.overwrite ? AppendMode::Overwrite : AppendMode::RejectDuplicates);
      return "appended " + std::to_string(tallies.size()) + " tallies for " + label + " to " +
             store.file_for(label).string() + "\n";
    }
  }
  return {};
}

}  // namespace detail

/// Parses `args` (without the program name) into a config. Throws UsageError.
inline CliConfig parse_args(const std::vector<std::string>& args, const char* env_store) {
  CLI::App app{"Temporal bias metrics for labeled search-result audits", "biasdrift"};
  app.require_subcommand(1, 1);

  CliConfig config;
  std::string rounding = "exact";
  std::string format = "json";
  std::string timestamp = "now";
  std::string store;
  std::string output;

  const std::map<std::string, Subcommand> names = {{"tally", Subcommand::Tally},
                                                   {"metrics", Subcommand::Metrics},
                                                   {"report", Subcommand::Report},
                                                   {"append", Subcommand::Append}};
  const std::map<std::string, std::string> help = {
      {"tally", "Tally an images CSV into a tallies CSV"},
      {"metrics", "Compute the temporal bias report from a tallies CSV or the store"},
      {"report", "Run the whole pipeline from an images CSV to a report"},
      {"append", "Append a tallies CSV to the audit store"}};
  for (const auto& [name, _] : names) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--input", config.input_path, "Input CSV");
    sub->add_option("--store", store, "Audit store directory");
    sub->add_option("--query", config.query_label, "Query label, e.g. #Doctor");
    sub->add_option("--rounding", rounding, "exact or paper")
        ->check(CLI::IsMember({"exact", "paper"}));
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", output, "Write here instead of stdout");
    sub->add_option("--timestamp", timestamp, "fixed or now")
        ->check(CLI::IsMember({"fixed", "now"}));
    sub->add_flag("--overwrite", config.overwrite, "Replace existing dates when appending");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = nullptr;
    for (const auto& [name, _] : names)
      if (app.got_subcommand(name)) sub = app.get_subcommand(name);
    throw HelpRequested{sub ? sub->help() : app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (const auto& [name, cmd] : names)
    if (app.got_subcommand(name)) config.subcommand = cmd;
  if (config.subcommand != Subcommand::Metrics && config.input_path.empty())
    throw UsageError("--input is required");
  config.rounding_mode = rounding == "paper" ? RoundingMode::PaperRounded : RoundingMode::Exact;
  config.output_format = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  config.fixed_timestamp = timestamp == "fixed";
  if (!store.empty())
    config.store_path = store;
  else if (env_store && *env_store)
    config.store_path = env_store;
  if (!output.empty()) config.output_path = output;
  return config;
}

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const char* env_store = std::getenv("BIASDRIFT_STORE")) {
  try {
    const CliConfig config = parse_args(args, env_store);
    const std::string text = detail::execute(config);
    if (config.output_path)
      write_file_atomic(*config.output_path, text);
    else
      out << text;
    return 0;
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const UsageError& e) {
    err << error_code_tag(e.code()) << ": " << detail::one_line(e.what()) << '\n';
    return 2;
  } catch (const Error& e) {
    err << error_code_tag(e.code()) << ": " << detail::one_line(e.what()) << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "E_DATA: " << detail::one_line(e.what()) << '\n';
    return 1;
  }
}

}  // namespace biasdrift::cli

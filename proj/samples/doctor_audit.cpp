// Computes the #Doctor report from the bundled fixture in both rounding
// modes and prints a short summary.

#include <cstdio>
#include <fstream>

#include "biasdrift/biasdrift.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : BIASDRIFT_FIXTURE_DIR "/doctor_table1.csv";
  std::ifstream in(path);
  try {
    const auto tallies = biasdrift::parse_tallies_csv(in);
    const auto series = biasdrift::bias_series(tallies);
    for (auto mode : {biasdrift::RoundingMode::Exact, biasdrift::RoundingMode::PaperRounded}) {
      const auto r = biasdrift::report(series, "#Doctor", mode);
      std::printf("%-6s first %7.2f  last %7.2f  roc %8.4f  max %7.2f  min %7.2f  range %6.2f  rmsb %6.2f\n",
                  biasdrift::rounding_mode_name(mode), r.first_bias_pct, r.last_bias_pct,
                  r.roc_pct_per_obs.value_or(0.0), r.max_bias_pct, r.min_bias_pct, r.range_pct,
                  r.rmsb_pct);
    }
  } catch (const biasdrift::Error& e) {
    std::fprintf(stderr, "%s: %s\n", biasdrift::error_code_tag(e.code()), e.what());
    return 1;
  }
  return 0;
}

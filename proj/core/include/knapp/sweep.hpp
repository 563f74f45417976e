#pragma once

#include <limits>
#include <string>
#include <vector>

#include "knapp/config.hpp"
#include "knapp/scaling.hpp"

namespace knapp {

// One CSV row per (k, R) pair. Norm columns repeat across the R rows of a k.
struct SweepRow {
  std::string manifold;
  int n = 2;
  int k = 0;
  double lambda = 0, delta = 0;
  double norm_p1 = 0, norm_p2 = 0, norm_p4 = 0;
  double tube_R = 0, tube_l2 = 0, tube_min_abs = 0;
  double defect = 0, window_margin = 0, separation_margin = 0;
  double err_estimate = 0;
  double wall_ms = 0;
  bool cache_hit = false;
  // in-memory only (not a CSV column): off-diagonal tail bound of the Knapp
  // tube certificate; NaN for cached or sphere rows.
  double offdiag_bound = std::numeric_limits<double>::quiet_NaN();

  std::string csv_line() const;
  static SweepRow from_csv_line(const std::string& line);
};

extern const char* kCsvHeader;

struct RowFailure {
  int k = 0;
  double R = 0;
  std::string tag;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RowFailure> failures;
  std::size_t computed = 0;
  std::size_t cached = 0;
  bool certificates_ok = true;
  std::vector<std::string> certificate_breaches;
};

// Runs the sweep, appends rows to the configured CSV (failed rows become
// "# error ..." comment lines) and replays cached rows verbatim.
SweepResult run_sweep(const ExperimentConfig& cfg);

// --- reporting -------------------------------------------------------------

struct FitTarget {
  std::string name;
  std::string x;  // lambda | lambda_delta | k
  std::string y;  // column, "colA/colB", or fnorm1|fnorm2|fnorm4|ratio21|tube_ratio
  double expected = 0;
  double tolerance = 0.05;
};

struct ReportEntry {
  FitTarget target;
  ScalingFit fit;
  bool pass = false;
};

struct ReportOutcome {
  std::vector<ReportEntry> entries;
  bool all_pass = true;
  std::string summary_path;  // empty when no targets were requested
  std::string plot_path;
};

std::vector<SweepRow> read_rows_csv(const std::string& path);

// Log-log fit of a selector pair over the rows (first R-row per k).
ScalingFit fit_rows(const std::vector<SweepRow>& rows, const std::string& x,
                    const std::string& y);

// Writes <csv>.plot.dat always and <csv>.summary.json when targets are given.
ReportOutcome emit_report(const std::string& csv_path, const std::vector<FitTarget>& targets);

// Built-in exponent targets by curvature class of the rows.
std::vector<FitTarget> default_targets(const std::vector<SweepRow>& rows);

}  // namespace knapp

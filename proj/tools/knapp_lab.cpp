// knapp-lab: construct space forms and Knapp quasimodes, sweep L^p norms and
// tube concentration over a frequency range, and fit scaling exponents.
//
//   knapp-lab validate <config>       geometry and group checks only
//   knapp-lab sweep    <config>       run the sweep, write CSV (+ cache)
//   knapp-lab fit      <csv> ...      log-log exponent fit of two columns
//   knapp-lab report   <csv> ...      plot data + JSON summary vs targets

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "knapp/flat_mode.hpp"
#include "knapp/quadrature.hpp"
#include "knapp/sweep.hpp"

namespace {

int run_validate(const std::string& path) {
  using namespace knapp;
  ExperimentConfig cfg = parse_config_file(path);
  auto manifold = resolve_manifold(cfg.manifold);
  std::printf("manifold: %s\n", cfg.manifold.name().c_str());
  if (const auto* S = std::get_if<SphereQuotient>(&manifold)) {
    std::printf("  S^%d quotient, |Gamma| = %zu, free action verified\n", S->n, S->order());
    EquatorStabilizer E = equator_stabilizer(*S);
    std::printf("  equator stabilizer m = %d, non-stabilizer elements: %zu\n", E.m,
                E.non_stabilizer.size());
    SphereBasePoint bp = choose_base_point_sphere(*S, E);
    std::printf("  base point theta = %.6f, clearance delta = %.6f\n", bp.theta, bp.clearance);
    double sep = equator_separation(*S, E);
    std::printf("  circle separation = %.6f\n", sep);
  } else {
    const auto& F = std::get<FlatQuotient>(manifold);
    std::printf("  flat quotient, n = %d, N = %d, cond(B) = %.3g, free action verified\n", F.n,
                F.index(), F.cond);
    Alignment al = align_lattice(F);
    AxisChoice axis = choose_axis_line(al.quotient);
    double L = geodesic_period(al.quotient, axis);
    std::printf("  axis x0' = (");
    for (int i = 0; i < axis.x0_prime.size(); ++i)
      std::printf("%s%.6f", i ? ", " : "", axis.x0_prime[i]);
    std::printf("), clearance delta1 = %.6g, c1 = c2 = %.6g\n", axis.clearance, axis.c1);
    std::printf("  geodesic period L = %.6f\n", L);
  }
  std::printf("validate: OK\n");
  return 0;
}

int run_sweep_cmd(const std::string& path) {
  using namespace knapp;
  ExperimentConfig cfg = parse_config_file(path);
  SweepResult res = run_sweep(cfg);
  std::printf("%s\n", kCsvHeader);
  for (const SweepRow& row : res.rows)
    std::printf("%s%s\n", row.csv_line().c_str(), row.cache_hit ? "  [cached]" : "");
  for (const RowFailure& f : res.failures)
    std::fprintf(stderr, "row k=%d failed: %s\n", f.k, f.tag.c_str());
  std::printf("sweep: %zu computed, %zu cached, %zu failed -> %s\n", res.computed, res.cached,
              res.failures.size(), cfg.csv_path.c_str());
  if (!res.certificates_ok) {
    for (const std::string& b : res.certificate_breaches)
      std::fprintf(stderr, "certificate breach: %s\n", b.c_str());
    return 1;
  }
  return 0;
}

int run_fit(const std::string& csv, const std::string& x, const std::string& y, bool has_target,
            double target, double tol) {
  using namespace knapp;
  std::vector<SweepRow> rows = read_rows_csv(csv);
  ScalingFit fit = fit_rows(rows, x, y);
  std::printf("fit %s vs %s: slope = %.6f, intercept = %.6f, max residual = %.4f, points = %zu\n",
              y.c_str(), x.c_str(), fit.slope, fit.intercept, fit.max_residual, fit.count);
  if (!fit.reportable()) {
    std::fprintf(stderr, "fit not reportable (need >= 5 points, max residual < 0.2)\n");
    return 1;
  }
  if (has_target) {
    bool ok = std::abs(fit.slope - target) <= tol;
    std::printf("target %.4f +- %.4f: %s\n", target, tol, ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
  }
  return 0;
}

int run_report(const std::string& csv, bool no_targets) {
  using namespace knapp;
  std::vector<FitTarget> targets;
  if (!no_targets) targets = default_targets(read_rows_csv(csv));
  ReportOutcome outcome = emit_report(csv, targets);
  std::printf("plot data: %s\n", outcome.plot_path.c_str());
  if (!outcome.summary_path.empty()) std::printf("summary: %s\n", outcome.summary_path.c_str());
  for (const ReportEntry& e : outcome.entries)
    std::printf("  %-14s slope %+.4f vs %+.4f +- %.3f  %s\n", e.target.name.c_str(), e.fit.slope,
                e.target.expected, e.target.tolerance, e.pass ? "PASS" : "FAIL");
  return outcome.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knapp quasimodes on compact space forms"};
  app.require_subcommand(1);

  std::string config_path, csv_path;
  std::string fit_x = "lambda_delta", fit_y = "ratio21";
  double target = 0.0, tol = 0.05;
  bool no_targets = false;

  auto* validate = app.add_subcommand("validate", "geometry and group checks");
  validate->add_option("config", config_path, "experiment config")->required();

  auto* sweep = app.add_subcommand("sweep", "run the sweep and write CSV");
  sweep->add_option("config", config_path, "experiment config")->required();

  auto* fit = app.add_subcommand("fit", "log-log exponent fit over a sweep CSV");
  fit->add_option("csv", csv_path, "sweep CSV")->required();
  fit->add_option("--x", fit_x, "abscissa: lambda | lambda_delta | k | column");
  fit->add_option("--y", fit_y, "ordinate: column, colA/colB, ratio21, fnorm1|2|4, tube_ratio");
  auto* topt = fit->add_option("--target", target, "expected exponent");
  fit->add_option("--tol", tol, "tolerance around the target");

  auto* report = app.add_subcommand("report", "emit plot data and JSON summary");
  report->add_option("csv", csv_path, "sweep CSV")->required();
  report->add_flag("--no-targets", no_targets, "plot data only, no summary");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate(config_path);
    if (sweep->parsed()) return run_sweep_cmd(config_path);
    if (fit->parsed()) return run_fit(csv_path, fit_x, fit_y, topt->count() > 0, target, tol);
    if (report->parsed()) return run_report(csv_path, no_targets);
  } catch (const knapp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

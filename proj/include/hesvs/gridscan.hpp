#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hesvs/params.hpp"

// Parameter sweeps, phase-space grids, and the analytic-vs-oracle validator.
namespace hesvs::gridscan {

// Column-oriented result table.  Zero-probability (or undefined) points are
// nulls, never errors.  Metadata records full parameter provenance.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

enum class SweepVariable { r, theta };
enum class SweepObservable { p_event, mean_n, mandel_q };

struct SweepSpec {
  SweepVariable variable = SweepVariable::r;
  double lo = 0.0;
  double hi = 1.0;
  int points = 2;            // >= 2, endpoints included
  ModelParams fixed;         // the non-swept fields
  std::vector<int> m_list;   // heralded counts to tabulate
};

Table sweep(const SweepSpec& spec, SweepObservable observable);

enum class GridObservable { wigner, husimi, qcd };

// For qcd the grid axes are (x, phi); otherwise (x, p).
struct GridSpec {
  GridObservable observable = GridObservable::wigner;
  double x_lo = -4.0, x_hi = 4.0;
  double y_lo = -4.0, y_hi = 4.0;
  int nx = 81, ny = 81;
};

// Dense row-major field table (x fastest); points evaluated in parallel,
// assembled in deterministic order.
Table grid(const GridSpec& spec, const ModelParams& p);

// Mandel Q over a (theta, r) rectangle for external contouring.
Table q_region_map(const std::vector<double>& thetas, const std::vector<double>& rs, int m);

struct CheckResult {
  std::string name;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  double tolerance = 0.0;  // on the governing metric for this check
  bool pass = true;
  std::string note;
};

// A closed-form variant that deviates from the oracle beyond tolerance,
// with the measured deviation.
struct Finding {
  std::string name;
  double magnitude = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<Finding> findings;
  bool pass = false;
};

struct ValidationOptions {
  std::vector<double> thetas;  // defaults: pi/7, pi/5, 2pi/7, 3pi/7
  std::vector<double> rs;      // defaults: 0.3, 0.5, 1.0
  std::vector<int> ms;         // defaults: 0..4
  double tolerance_scale = 1.0;
  // Self-test hook: scales the analytic PND inside the comparison, so a
  // nonzero value must trip the pnd-oracle check.
  double fault_injection = 0.0;
  bool quick = false;       // trims the point counts for unit tests
  int oracle_n_max = 0;     // Schmidt-cutoff override for the oracle (0 = auto)
};

ValidationReport validate(const ValidationOptions& options = {});

std::string report_text(const ValidationReport& report);
std::string report_json(const ValidationReport& report);

}  // namespace hesvs::gridscan

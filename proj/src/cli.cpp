#include "hesvs/cli.hpp"

#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "hesvs/analytic.hpp"
#include "hesvs/gridscan.hpp"
#include "hesvs/io.hpp"
#include "hesvs/params.hpp"

namespace hesvs::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitZeroProbability = 2;
constexpr int kExitValidationFailed = 3;

const double kPi = std::numbers::pi;

// --theta takes radians; --theta-frac takes p/q meaning theta = pi p / q
// (the figure parameters are all rational multiples of pi).
struct ThetaFlag {
  std::optional<double> radians;
  std::optional<std::string> fraction;
  double default_value = 0.0;

  void attach(CLI::App* cmd, double default_radians) {
    default_value = default_radians;
    auto* a = cmd->add_option_function<double>(
        "--theta", [this](double v) { radians = v; }, "beam-splitter angle in radians");
    auto* b = cmd->add_option_function<std::string>(
        "--theta-frac", [this](const std::string& v) { fraction = v; },
        "angle as a rational multiple of pi, e.g. 1/7 for pi/7");
    a->excludes(b);
    b->excludes(a);
  }

  double resolve() const {
    if (fraction) {
      const auto slash = fraction->find('/');
      if (slash == std::string::npos)
        throw std::invalid_argument("--theta-frac: expected p/q, e.g. 1/7, got " + *fraction);
      std::size_t p_end = 0, q_end = 0;
      const std::string ps = fraction->substr(0, slash);
      const std::string qs = fraction->substr(slash + 1);
      const long p = std::stol(ps, &p_end);
      const long q = std::stol(qs, &q_end);
      if (p_end != ps.size() || q_end != qs.size() || q == 0)
        throw std::invalid_argument("--theta-frac: expected integer p/q, got " + *fraction);
      return kPi * static_cast<double>(p) / static_cast<double>(q);
    }
    if (radians) return *radians;
    return default_value;
  }
};

struct OutputFlags {
  std::string path;
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--output", path, "write to this file (atomically) instead of stdout");
    cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  }

  void emit(const gridscan::Table& table) const {
    const std::string text = format == "json" ? io::to_json(table) : io::to_csv(table);
    if (path.empty())
      std::cout << text;
    else
      io::write_file_atomic(path, text);
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("hesvs");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
  CLI::App app{
      "Conditional-state simulator: a two-mode squeezed vacuum mixed on a beam splitter,\n"
      "heralded by an m-photon count in one output channel. Computes the event probability,\n"
      "photon statistics, homodyne quadrature distribution and phase-space quasiprobability\n"
      "functions, each cross-validated against an exact Fock-basis oracle (`validate`).\n"
      "HESVS_THREADS overrides the worker count."};
  app.require_subcommand(1);

  // --- prob ---
  auto* prob_cmd = app.add_subcommand("prob", "event probability p(m), tabulated over m");
  ThetaFlag prob_theta;
  prob_theta.attach(prob_cmd, kPi / 7);
  double prob_r = 0.5;
  int prob_m = -1, prob_m_max = 4;
  prob_cmd->add_option("--r", prob_r, "squeezing of the two-mode input");
  prob_cmd->add_option("--m", prob_m, "single heralded count (otherwise a table up to --m-max)");
  prob_cmd->add_option("--m-max", prob_m_max, "largest m in the table");
  OutputFlags prob_out;
  prob_out.attach(prob_cmd);

  // --- pnd ---
  auto* pnd_cmd = app.add_subcommand("pnd", "photon number distribution P(n|m)");
  ThetaFlag pnd_theta;
  pnd_theta.attach(pnd_cmd, 2 * kPi / 7);
  double pnd_r = 0.5;
  int pnd_m = 1, pnd_n = -1, pnd_n_max = 20;
  pnd_cmd->add_option("--r", pnd_r, "squeezing of the two-mode input");
  pnd_cmd->add_option("--m", pnd_m, "heralded count");
  pnd_cmd->add_option("--n", pnd_n, "single photon number (otherwise a table up to --n-max)");
  pnd_cmd->add_option("--n-max", pnd_n_max, "largest n in the table");
  OutputFlags pnd_out;
  pnd_out.attach(pnd_cmd);

  // --- moments ---
  auto* mom_cmd = app.add_subcommand("moments", "mean photon number and Mandel Q");
  ThetaFlag mom_theta;
  mom_theta.attach(mom_cmd, kPi / 5);
  double mom_r = 0.5;
  int mom_m = 1;
  mom_cmd->add_option("--r", mom_r, "squeezing of the two-mode input");
  mom_cmd->add_option("--m", mom_m, "heralded count");
  OutputFlags mom_out;
  mom_out.attach(mom_cmd);

  // --- quad ---
  auto* quad_cmd = app.add_subcommand("quad", "quadrature distribution P(x, phi|m) grid");
  ThetaFlag quad_theta;
  quad_theta.attach(quad_cmd, kPi / 7);
  double quad_r = 0.5;
  int quad_m = 1;
  gridscan::GridSpec quad_spec;
  quad_spec.observable = gridscan::GridObservable::qcd;
  quad_spec.x_lo = -6.0;
  quad_spec.x_hi = 6.0;
  quad_spec.y_lo = 0.0;
  quad_spec.y_hi = kPi;
  quad_spec.nx = 201;
  quad_spec.ny = 121;
  quad_cmd->add_option("--r", quad_r, "squeezing of the two-mode input");
  quad_cmd->add_option("--m", quad_m, "heralded count");
  quad_cmd->add_option("--x-lo", quad_spec.x_lo);
  quad_cmd->add_option("--x-hi", quad_spec.x_hi);
  quad_cmd->add_option("--phi-lo", quad_spec.y_lo);
  quad_cmd->add_option("--phi-hi", quad_spec.y_hi);
  quad_cmd->add_option("--nx", quad_spec.nx);
  quad_cmd->add_option("--ny", quad_spec.ny);
  OutputFlags quad_out;
  quad_out.attach(quad_cmd);

  // --- wigner / husimi ---
  struct PhaseSpaceCmd {
    CLI::App* cmd = nullptr;
    ThetaFlag theta;
    double r = 0.5;
    int m = 1;
    gridscan::GridSpec spec;
    OutputFlags out;
  };
  auto make_phase_space = [&](const char* name, const char* help,
                              gridscan::GridObservable obs) {
    auto ps = std::make_unique<PhaseSpaceCmd>();
    ps->cmd = app.add_subcommand(name, help);
    ps->theta.attach(ps->cmd, kPi / 7);
    ps->spec.observable = obs;
    ps->cmd->add_option("--r", ps->r, "squeezing of the two-mode input");
    ps->cmd->add_option("--m", ps->m, "heralded count");
    ps->cmd->add_option("--x-lo", ps->spec.x_lo);
    ps->cmd->add_option("--x-hi", ps->spec.x_hi);
    ps->cmd->add_option("--p-lo", ps->spec.y_lo);
    ps->cmd->add_option("--p-hi", ps->spec.y_hi);
    ps->cmd->add_option("--nx", ps->spec.nx);
    ps->cmd->add_option("--ny", ps->spec.ny);
    ps->out.attach(ps->cmd);
    return ps;
  };
  auto wig = make_phase_space(
      "wigner", "Wigner function W(x, p|m) grid; alpha = (x + i p)/sqrt(2)",
      gridscan::GridObservable::wigner);
  auto hus = make_phase_space("husimi", "Husimi function Q(x, p|m) grid",
                              gridscan::GridObservable::husimi);

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "observable vs r or theta for several m");
  ThetaFlag sweep_theta;
  sweep_theta.attach(sweep_cmd, kPi / 7);
  gridscan::SweepSpec sweep_spec;
  sweep_spec.lo = 0.01;
  sweep_spec.hi = 3.0;
  sweep_spec.points = 300;
  sweep_spec.m_list = {1, 2, 3, 4};
  std::string sweep_variable = "r";
  std::string sweep_observable = "p_event";
  double sweep_r = 0.5;
  std::vector<int> sweep_m_list;
  sweep_cmd->add_option("--variable", sweep_variable, "swept parameter")
      ->check(CLI::IsMember({"r", "theta"}));
  sweep_cmd->add_option("--observable", sweep_observable, "what to tabulate")
      ->check(CLI::IsMember({"p_event", "mean_n", "mandel_q"}));
  sweep_cmd->add_option("--lo", sweep_spec.lo, "sweep start");
  sweep_cmd->add_option("--hi", sweep_spec.hi, "sweep end");
  sweep_cmd->add_option("--points", sweep_spec.points, "number of sweep points");
  sweep_cmd->add_option("--r", sweep_r, "fixed r (for theta sweeps)");
  sweep_cmd->add_option("--m-list", sweep_m_list, "heralded counts, e.g. --m-list 1 2 3 4");
  OutputFlags sweep_out;
  sweep_out.attach(sweep_cmd);

  // --- qmap ---
  auto* qmap_cmd = app.add_subcommand("qmap", "Mandel Q over the (theta, r) plane");
  int qmap_m = 1;
  int qmap_theta_points = 64, qmap_r_points = 75;
  double qmap_r_lo = 0.02, qmap_r_hi = 1.5;
  double qmap_theta_lo = 0.0, qmap_theta_hi = kPi / 2;
  qmap_cmd->add_option("--m", qmap_m, "heralded count");
  qmap_cmd->add_option("--theta-points", qmap_theta_points);
  qmap_cmd->add_option("--r-points", qmap_r_points);
  qmap_cmd->add_option("--theta-lo", qmap_theta_lo);
  qmap_cmd->add_option("--theta-hi", qmap_theta_hi);
  qmap_cmd->add_option("--r-lo", qmap_r_lo);
  qmap_cmd->add_option("--r-hi", qmap_r_hi);
  OutputFlags qmap_out;
  qmap_out.attach(qmap_cmd);

  // --- validate ---
  auto* validate_cmd =
      app.add_subcommand("validate", "cross-check every closed form against the Fock oracle");
  double validate_tol_scale = 1.0;
  bool validate_quick = false;
  int validate_oracle_n_max = 0;
  std::string validate_format = "text";
  std::string validate_output;
  validate_cmd->add_option("--tolerance-scale", validate_tol_scale,
                           "multiplies every check tolerance");
  validate_cmd->add_flag("--quick", validate_quick, "smaller point counts (smoke mode)");
  validate_cmd->add_option("--oracle-n-max", validate_oracle_n_max,
                           "override the oracle's Schmidt-sum cutoff");
  validate_cmd->add_option("--format", validate_format)->check(CLI::IsMember({"text", "json"}));
  validate_cmd->add_option("--output", validate_output, "write the report to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*prob_cmd) {
      const double theta = prob_theta.resolve();
      gridscan::Table t;
      t.metadata = {{"kind", "prob"},
                    {"theta", io::format_shortest(theta)},
                    {"r", io::format_shortest(prob_r)}};
      t.columns = {"m", "p_event"};
      const int lo = prob_m >= 0 ? prob_m : 0;
      const int hi = prob_m >= 0 ? prob_m : prob_m_max;
      for (int m = lo; m <= hi; ++m) {
        const ModelParams p{theta, prob_r, m};
        double value = 0.0;  // a vanishing event has probability exactly zero
        try {
          value = analytic::event_probability(derive(p), prob_r, m);
        } catch (const zero_probability_error&) {
        }
        t.rows.push_back({static_cast<double>(m), value});
      }
      prob_out.emit(t);
      return kExitOk;
    }
    if (*pnd_cmd) {
      const auto ctx = analytic::make_context({pnd_theta.resolve(), pnd_r, pnd_m});
      gridscan::Table t;
      t.metadata = {{"kind", "pnd"},
                    {"theta", io::format_shortest(ctx.params.theta)},
                    {"r", io::format_shortest(pnd_r)},
                    {"m", std::to_string(pnd_m)}};
      t.columns = {"n", "probability"};
      const int lo = pnd_n >= 0 ? pnd_n : 0;
      const int hi = pnd_n >= 0 ? pnd_n : pnd_n_max;
      for (int n = lo; n <= hi; ++n)
        t.rows.push_back({static_cast<double>(n), analytic::pnd(ctx, n)});
      pnd_out.emit(t);
      return kExitOk;
    }
    if (*mom_cmd) {
      const auto ctx = analytic::make_context({mom_theta.resolve(), mom_r, mom_m});
      gridscan::Table t;
      t.metadata = {{"kind", "moments"},
                    {"theta", io::format_shortest(ctx.params.theta)},
                    {"r", io::format_shortest(mom_r)},
                    {"m", std::to_string(mom_m)}};
      t.columns = {"mean_n", "mandel_q"};
      t.rows.push_back({analytic::mean_photon(ctx), analytic::mandel_q(ctx)});
      mom_out.emit(t);
      return kExitOk;
    }
    if (*quad_cmd) {
      quad_out.emit(gridscan::grid(quad_spec, {quad_theta.resolve(), quad_r, quad_m}));
      return kExitOk;
    }
    if (*wig->cmd) {
      wig->out.emit(gridscan::grid(wig->spec, {wig->theta.resolve(), wig->r, wig->m}));
      return kExitOk;
    }
    if (*hus->cmd) {
      hus->out.emit(gridscan::grid(hus->spec, {hus->theta.resolve(), hus->r, hus->m}));
      return kExitOk;
    }
    if (*sweep_cmd) {
      sweep_spec.variable =
          sweep_variable == "r" ? gridscan::SweepVariable::r : gridscan::SweepVariable::theta;
      sweep_spec.fixed.theta = sweep_theta.resolve();
      sweep_spec.fixed.r = sweep_r;
      if (!sweep_m_list.empty()) sweep_spec.m_list = sweep_m_list;
      const auto obs = sweep_observable == "p_event" ? gridscan::SweepObservable::p_event
                       : sweep_observable == "mean_n" ? gridscan::SweepObservable::mean_n
                                                      : gridscan::SweepObservable::mandel_q;
      sweep_out.emit(gridscan::sweep(sweep_spec, obs));
      return kExitOk;
    }
    if (*qmap_cmd) {
      if (qmap_theta_points < 2 || qmap_r_points < 2)
        throw std::invalid_argument("qmap: need at least 2 points per axis");
      std::vector<double> thetas(static_cast<std::size_t>(qmap_theta_points));
      for (int i = 0; i < qmap_theta_points; ++i)
        thetas[static_cast<std::size_t>(i)] =
            qmap_theta_lo + (qmap_theta_hi - qmap_theta_lo) * i / (qmap_theta_points - 1.0);
      std::vector<double> rs(static_cast<std::size_t>(qmap_r_points));
      for (int i = 0; i < qmap_r_points; ++i)
        rs[static_cast<std::size_t>(i)] =
            qmap_r_lo + (qmap_r_hi - qmap_r_lo) * i / (qmap_r_points - 1.0);
      qmap_out.emit(gridscan::q_region_map(thetas, rs, qmap_m));
      return kExitOk;
    }
    if (*validate_cmd) {
      gridscan::ValidationOptions opts;
      opts.tolerance_scale = validate_tol_scale;
      opts.quick = validate_quick;
      opts.oracle_n_max = validate_oracle_n_max;
      const auto report = gridscan::validate(opts);
      const std::string text = validate_format == "json" ? gridscan::report_json(report)
                                                         : gridscan::report_text(report);
      if (validate_output.empty())
        std::cout << text;
      else
        io::write_file_atomic(validate_output, text);
      return report.pass ? kExitOk : kExitValidationFailed;
    }
  } catch (const zero_probability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitZeroProbability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hesvs::cli

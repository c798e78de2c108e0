#ifndef ENTROFILT_HARNESS_HPP_
#define ENTROFILT_HARNESS_HPP_

// Run orchestration: configuration, case runs with error norms, convergence
// studies and CSV output.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "entrofilt/cases.hpp"
#include "entrofilt/csv_io.hpp"
#include "entrofilt/entropy_filter.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/norms.hpp"
#include "entrofilt/solver.hpp"

namespace entrofilt {

struct RunConfig {
  std::string case_name = "sod";
  int order = 3;
  std::vector<int> mesh;  // empty: case default; one value in 2D: N x N
  double cfl = 0.5;
  std::string riemann = "hllc";
  std::string filter = "entropy";
  double rho_min = 1e-8;
  double p_min = 1e-8;
  double eps_sigma = 1e-4;
  std::string entropy = "physical";
  std::optional<double> t_end;  // case end time when unset
  std::string out_dir;
  int flush_every = 100;
  bool timing = true;  // false: omit wall time so reruns compare byte-equal
  bool verify_feasibility = false;

  GasModel gas() const {
    GasModel g;
    g.rho_min = rho_min;
    g.p_min = p_min;
    g.eps_sigma = eps_sigma;
    g.entropy = parse_entropy_functional(entropy);
    return g;
  }

  void validate() const {
    const int dim = case_dimension(case_name);
    if (order < 1) throw ConfigError("order must be >= 1");
    if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
    if (!mesh.empty() && static_cast<int>(mesh.size()) != dim &&
        !(dim == 2 && mesh.size() == 1)) {
      throw ConfigError("case '" + case_name + "' is " + std::to_string(dim) +
                        "D; mesh needs " + std::to_string(dim) + " sizes");
    }
    for (int n : mesh) {
      if (n < 1) throw ConfigError("mesh sizes must be positive");
    }
    parse_riemann_solver(riemann);
    parse_filter_mode(filter);
    gas().validate();
    if (t_end && *t_end < 0.0) throw ConfigError("t_end must be >= 0");
    if (flush_every < 1) throw ConfigError("flush_every must be >= 1");
  }
};

struct RunReport {
  std::string case_name;
  int order = 0;
  std::vector<int> mesh;
  std::string filter;
  std::string riemann;
  std::string entropy;
  double cfl = 0.0;
  long n_elements = 0;
  long n_points = 0;
  long steps = 0;
  double final_time = 0.0;
  std::vector<StepStatistics> step_stats;
  long activations = 0;
  long element_stages = 0;
  double max_zeta = 0.0;
  double min_density = std::numeric_limits<double>::infinity();
  bool has_errors = false;
  double eps_l1 = std::numeric_limits<double>::quiet_NaN();
  double eps_l2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> conservation_drift;  // relative, per conserved variable
  std::optional<double> wall_time;
  // Present when feasibility verification ran.
  std::optional<double> verified_min_rho;
  std::optional<double> verified_min_p;
  std::optional<double> verified_min_entropy_margin;

  double activation_fraction() const {
    return element_stages ? static_cast<double>(activations) / element_stages
                          : 0.0;
  }
};

inline const char* kReportHeader =
    "step,time,dt,activation_fraction,max_zeta,activations,element_stages,"
    "density_binding,pressure_binding,entropy_binding,min_rho";

inline std::string report_row(const StepStatistics& s) {
  std::string row = std::to_string(s.step) + ',' + format_number(s.time) +
                    ',' + format_number(s.dt) + ',' +
                    format_number(s.activation_fraction()) + ',' +
                    format_number(s.max_zeta) + ',' +
                    std::to_string(s.activations) + ',' +
                    std::to_string(s.element_stages);
  for (int c = 1; c <= 3; ++c) row += ',' + std::to_string(s.binding_counts[c]);
  row += ',' + format_number(s.min_rho);
  return row;
}

/// Per-step diagnostics, one row per step in a fixed column order.
inline void write_report(const RunReport& report,
                         const std::filesystem::path& path) {
  auto os = open_for_write(path);
  os << kReportHeader << '\n';
  for (const auto& s : report.step_stats) os << report_row(s) << '\n';
  check_written(os, path);
}

/// Run summary as key,value rows in a fixed order.
inline void write_summary(const RunReport& r,
                          const std::filesystem::path& path) {
  auto os = open_for_write(path);
  std::string mesh;
  for (size_t i = 0; i < r.mesh.size(); ++i) {
    mesh += (i ? "x" : "") + std::to_string(r.mesh[i]);
  }
  os << "key,value\n";
  os << "case," << r.case_name << '\n';
  os << "order," << r.order << '\n';
  os << "mesh," << mesh << '\n';
  os << "filter," << r.filter << '\n';
  os << "riemann," << r.riemann << '\n';
  os << "entropy," << r.entropy << '\n';
  os << "cfl," << format_number(r.cfl) << '\n';
  os << "elements," << r.n_elements << '\n';
  os << "points," << r.n_points << '\n';
  os << "steps," << r.steps << '\n';
  os << "final_time," << format_number(r.final_time) << '\n';
  os << "activation_fraction," << format_number(r.activation_fraction()) << '\n';
  os << "max_zeta," << format_number(r.max_zeta) << '\n';
  os << "min_density," << format_number(r.min_density) << '\n';
  if (r.has_errors) {
    os << "eps_l1," << format_number(r.eps_l1) << '\n';
    os << "eps_l2," << format_number(r.eps_l2) << '\n';
  }
  for (size_t v = 0; v < r.conservation_drift.size(); ++v) {
    os << "drift_" << v << ',' << format_number(r.conservation_drift[v]) << '\n';
  }
  if (r.wall_time) os << "wall_time," << format_number(*r.wall_time) << '\n';
  check_written(os, path);
}

/// Reference for cases without a closed-form solution, cached per end time.
inline const CellReference& reference_solution(const std::string& case_name,
                                               double t_end) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, double>, CellReference> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(case_name, t_end);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (case_name != "shu-osher") {
    throw ConfigError("case '" + case_name + "' has no reference run");
  }
  const auto spec = shu_osher_case();
  auto ref = godunov_reference(
      spec.domain.lo[0], spec.domain.hi[0], kShuOsherReferenceCells,
      [&](double x) { return spec.initial({x}, 0.0); }, t_end, GasModel{});
  return cache.emplace(key, std::move(ref)).first->second;
}

template <int Dim>
struct RunOutcome {
  RunReport report;
  std::unique_ptr<FrSolver<Dim>> solver;
  SolutionField<Dim> field;
};

namespace detail {

template <int Dim>
std::array<int, Dim> mesh_counts(const RunConfig& cfg,
                                 const CaseSpec<Dim>& spec) {
  if (cfg.mesh.empty()) return spec.default_mesh;
  std::array<int, Dim> n{};
  for (int d = 0; d < Dim; ++d) {
    n[d] = cfg.mesh.size() == 1 ? cfg.mesh[0] : cfg.mesh[d];
  }
  return n;
}

template <int Dim>
ConservativeState<Dim> absolute_integral(const FrSolver<Dim>& solver,
                                         const SolutionField<Dim>& field) {
  // Momentum components share the integral of |rho v| as their scale; a
  // component whose total is zero would otherwise be normalised by noise.
  SolutionField<Dim> abs_field = field;
  for (auto& u : abs_field.u) {
    double m2 = 0.0;
    for (int d = 0; d < Dim; ++d) m2 += u[1 + d] * u[1 + d];
    u[0] = std::abs(u[0]);
    for (int d = 0; d < Dim; ++d) u[1 + d] = std::sqrt(m2);
    u[Dim + 1] = std::abs(u[Dim + 1]);
  }
  return solver.integrate(abs_field);
}

}  // namespace detail

/// Density errors of `field` at time t against the case oracle. For 2D
/// analytic oracles eps_l2 is the quadrature L2 norm; otherwise both norms
/// are point means over the solution points.
template <int Dim>
std::optional<PointwiseNorms> case_errors(const CaseSpec<Dim>& spec,
                                          const FrSolver<Dim>& solver,
                                          const SolutionField<Dim>& field) {
  if (spec.oracle == OracleKind::kNone) return std::nullopt;
  const auto coords = solver.coordinates();
  std::vector<double> rho(field.u.size()), exact(field.u.size());
  for (size_t k = 0; k < field.u.size(); ++k) rho[k] = field.u[k].rho();
  if (spec.oracle == OracleKind::kReferenceRun) {
    if constexpr (Dim == 1) {
      const auto& ref = reference_solution(spec.name, field.time);
      for (size_t k = 0; k < rho.size(); ++k) exact[k] = ref.at(coords[k][0]).rho;
    } else {
      throw ConfigError("reference runs exist for 1D cases only");
    }
  } else {
    for (size_t k = 0; k < rho.size(); ++k) {
      exact[k] = spec.exact(coords[k], field.time).rho;
    }
  }
  auto norms = error_norms_pointwise(rho, exact);
  if (Dim == 2 && spec.oracle == OracleKind::kAnalytic) {
    norms.l2 = error_norm_l2_integral<Dim>(
        rho, solver.mesh(), solver.basis(),
        [&](const Point<Dim>& x) { return spec.exact(x, field.time).rho; });
  }
  return norms;
}

/// Runs one case to its end time, writing solution/report/summary CSVs when
/// cfg.out_dir is set. Report rows are flushed every cfg.flush_every steps.
template <int Dim>
RunOutcome<Dim> run_case(const RunConfig& cfg, const CaseSpec<Dim>& spec,
                         std::ostream* log = nullptr) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  SolverOptions opt;
  opt.cfl = cfg.cfl;
  opt.riemann = parse_riemann_solver(cfg.riemann);
  opt.filter.mode = parse_filter_mode(cfg.filter);
  opt.verify_feasibility = cfg.verify_feasibility;
  if (opt.filter.mode == FilterMode::kOff && spec.discontinuous && log) {
    *log << "WARNING: filter disabled on discontinuous case '" << spec.name
         << "'; expect oscillations or a positivity failure\n";
  }
  const auto counts = detail::mesh_counts(cfg, spec);
  auto mesh = build_mesh<Dim>(spec.domain, counts, spec.periodic);

  RunOutcome<Dim> out;
  out.solver = std::make_unique<FrSolver<Dim>>(std::move(mesh), cfg.order,
                                               cfg.gas(), spec.boundaries, opt);
  auto& solver = *out.solver;
  out.field = solver.initialize(spec.initial);
  const auto initial_total = solver.integrate(out.field);
  const auto initial_abs = detail::absolute_integral(solver, out.field);

  std::optional<std::ofstream> report_stream;
  std::filesystem::path report_path;
  if (!cfg.out_dir.empty()) {
    report_path = std::filesystem::path(cfg.out_dir) / "report.csv";
    report_stream.emplace(open_for_write(report_path));
    *report_stream << kReportHeader << '\n';
  }

  ConservativeState<Dim> transfer;
  const double t_end = cfg.t_end.value_or(spec.t_end);
  const auto stats = solver.advance_to_time(
      out.field, t_end, [&](const SolutionField<Dim>&, const StepStatistics& s) {
        transfer += solver.last_boundary_transfer();
        if (report_stream) {
          *report_stream << report_row(s) << '\n';
          if (s.step % cfg.flush_every == 0) report_stream->flush();
        }
      });
  if (report_stream) check_written(*report_stream, report_path);

  auto& r = out.report;
  r.case_name = spec.name;
  r.order = cfg.order;
  r.mesh.assign(counts.begin(), counts.end());
  r.filter = cfg.filter;
  r.riemann = cfg.riemann;
  r.entropy = cfg.entropy;
  r.cfl = cfg.cfl;
  r.n_elements = solver.mesh().n_elements();
  r.n_points = static_cast<long>(out.field.u.size());
  r.steps = static_cast<long>(stats.steps.size());
  r.final_time = out.field.time;
  r.step_stats = stats.steps;
  r.activations = stats.activations;
  r.element_stages = stats.element_stages;
  r.max_zeta = stats.max_zeta;
  for (const auto& u : out.field.u) r.min_density = std::min(r.min_density, u.rho());
  for (const auto& s : stats.steps) r.min_density = std::min(r.min_density, s.min_rho);

  if (const auto norms = case_errors(spec, solver, out.field)) {
    r.has_errors = true;
    r.eps_l1 = norms->l1;
    r.eps_l2 = norms->l2;
  }
  const auto final_total = solver.integrate(out.field);
  const auto final_abs = detail::absolute_integral(solver, out.field);
  for (int v = 0; v < ConservativeState<Dim>::kVars; ++v) {
    const double scale = std::max({std::abs(initial_total[v]), initial_abs[v],
                                   final_abs[v]});
    const double diff = final_total[v] - initial_total[v] - transfer[v];
    r.conservation_drift.push_back(scale > 0.0 ? std::abs(diff) / scale
                                               : std::abs(diff));
  }
  if (cfg.verify_feasibility && opt.filter.mode != FilterMode::kOff) {
    r.verified_min_rho = stats.min_rho;
    r.verified_min_p = stats.min_p;
    r.verified_min_entropy_margin = stats.min_entropy_margin;
  }
  if (cfg.timing) {
    r.wall_time = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  if (!cfg.out_dir.empty()) {
    const std::filesystem::path dir(cfg.out_dir);
    write_solution_csv<Dim>(solver.coordinates(), out.field.u, solver.gas(),
                            dir / "solution.csv");
    write_summary(r, dir / "summary.csv");
  }
  return out;
}

/// Dimension-dispatching run for a named case.
inline RunReport run_named_case(const RunConfig& cfg,
                                std::ostream* log = nullptr) {
  if (case_dimension(cfg.case_name) == 1) {
    return run_case<1>(cfg, case_1d(cfg.case_name), log).report;
  }
  return run_case<2>(cfg, case_2d(cfg.case_name), log).report;
}

struct ConvergenceRow {
  int n = 0;
  double eps_l1 = 0.0;
  double eps_l2 = 0.0;
  double rate_running = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceTable {
  std::string case_name;
  int order = 0;
  std::vector<ConvergenceRow> rows;

  double rate_l1() const { return rate(&ConvergenceRow::eps_l1); }
  double rate_l2() const { return rate(&ConvergenceRow::eps_l2); }

 private:
  double rate(double ConvergenceRow::*member) const {
    std::vector<double> n, e;
    for (const auto& r : rows) {
      n.push_back(r.n);
      e.push_back(r.*member);
    }
    return fit_rate(n, e);
  }
};

/// Whether a case's convergence rate is reported on eps_l2 (analytic 2D
/// oracle) rather than eps_l1.
inline bool rate_uses_l2(const std::string& case_name) {
  return case_name == "vortex";
}

/// Runs the case on each mesh size (N, or N x N in 2D) and fits rates.
inline ConvergenceTable convergence_study(const RunConfig& base,
                                          const std::vector<int>& meshes,
                                          std::ostream* log = nullptr) {
  if (meshes.size() < 2) {
    throw ConfigError("convergence study needs at least two mesh sizes");
  }
  ConvergenceTable table;
  table.case_name = base.case_name;
  table.order = base.order;
  std::vector<double> ns, errs;
  for (int n : meshes) {
    RunConfig cfg = base;
    cfg.mesh = {n};
    if (!base.out_dir.empty()) {
      cfg.out_dir = (std::filesystem::path(base.out_dir) /
                     ("N" + std::to_string(n)))
                        .string();
    }
    RunReport rep;
    try {
      rep = run_named_case(cfg, log);
    } catch (const Error&) {
      // Rethrown unchanged so the caller can still tell usage errors from
      // constraint aborts.
      if (log) *log << "convergence study aborted at N=" << n << '\n';
      throw;
    }
    if (!rep.has_errors) {
      throw ConfigError("case '" + base.case_name +
                        "' has no oracle for error norms");
    }
    ConvergenceRow row{n, rep.eps_l1, rep.eps_l2};
    ns.push_back(n);
    errs.push_back(rate_uses_l2(base.case_name) ? rep.eps_l2 : rep.eps_l1);
    if (ns.size() >= 2) row.rate_running = fit_rate(ns, errs);
    table.rows.push_back(row);
    if (log) {
      *log << "N=" << n << " eps_l1=" << format_number(row.eps_l1)
           << " eps_l2=" << format_number(row.eps_l2) << '\n';
    }
  }
  return table;
}

inline void write_convergence_csv(const ConvergenceTable& t,
                                  const std::filesystem::path& path) {
  auto os = open_for_write(path);
  os << "N,eps_l1,eps_l2,rate_running\n";
  for (const auto& r : t.rows) {
    os << r.n << ',' << format_number(r.eps_l1) << ','
       << format_number(r.eps_l2) << ',' << format_number(r.rate_running)
       << '\n';
  }
  check_written(os, path);
}

}  // namespace entrofilt

#endif  // ENTROFILT_HARNESS_HPP_

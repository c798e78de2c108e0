// entrofilt command line: run a case, run a convergence study, or selftest.
//
//   entrofilt run --case sod --order 3 --mesh 80 --out out/sod
//   entrofilt converge --case vortex --order 3 --meshes 33,40,50
//   entrofilt --config sweep.ini run
//
// Config files use INI sections named after the subcommand ([run] or
// [converge]) with key = value lines; command line flags take precedence.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrofilt/entrofilt.hpp"

namespace {

using namespace entrofilt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConstraint = 2;

void add_common_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--case", cfg.case_name, "sod|shu-osher|vortex|dmr|kh|jet")
      ->required();
  cmd.add_option("--order", cfg.order, "Polynomial order p")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--cfl", cfg.cfl, "CFL number")->capture_default_str();
  cmd.add_option("--riemann", cfg.riemann, "hllc|rusanov")
      ->check(CLI::IsMember({"hllc", "rusanov"}))
      ->capture_default_str();
  cmd.add_option("--filter", cfg.filter, "entropy|linear|off")
      ->check(CLI::IsMember({"entropy", "linear", "off"}))
      ->capture_default_str();
  cmd.add_option("--rho-min", cfg.rho_min, "Density floor")->capture_default_str();
  cmd.add_option("--p-min", cfg.p_min, "Pressure floor")->capture_default_str();
  cmd.add_option("--eps-sigma", cfg.eps_sigma, "Entropy bound relaxation")
      ->capture_default_str();
  cmd.add_option("--entropy", cfg.entropy,
                 "Constrained entropy: physical (rho log(P rho^-gamma)) or "
                 "specific (log(P rho^-gamma))")
      ->check(CLI::IsMember({"physical", "specific"}))
      ->capture_default_str();
  cmd.add_option("--t-end", cfg.t_end, "Override the case end time");
  cmd.add_option("--out", cfg.out_dir, "Output directory");
  cmd.add_option("--flush-every", cfg.flush_every,
                 "Report flush cadence in steps")
      ->capture_default_str();
  cmd.add_flag("--no-timing", "Omit wall time from the summary");
  cmd.add_flag("--verify", cfg.verify_feasibility,
               "Check every node against the filter constraints after each "
               "stage");
}

std::vector<int> parse_mesh(const std::string& text) {
  std::vector<int> sizes;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t next = text.find_first_of(",x", pos);
    const std::string tok = text.substr(pos, next - pos);
    try {
      size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad mesh size '" + tok + "' in '" + text + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return sizes;
}

void print_report(const RunReport& r) {
  std::cout << "case " << r.case_name << " p=" << r.order << " elements="
            << r.n_elements << " steps=" << r.steps
            << " t=" << format_number(r.final_time) << '\n';
  std::cout << "filter activation fraction "
            << format_number(r.activation_fraction()) << ", max zeta "
            << format_number(r.max_zeta) << ", min density "
            << format_number(r.min_density) << '\n';
  if (r.has_errors) {
    std::cout << "eps_l1 " << format_number(r.eps_l1) << "  eps_l2 "
              << format_number(r.eps_l2) << '\n';
  }
  std::cout << "conservation drift";
  for (double d : r.conservation_drift) std::cout << ' ' << format_number(d);
  std::cout << '\n';
  if (r.wall_time) std::cout << "wall time " << *r.wall_time << " s\n";
}

int run_selftest_command() {
  bool ok = true;
  for (const auto& r : run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (value "
              << r.value << ", tolerance " << r.tolerance << ")\n";
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitConstraint;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order flux reconstruction Euler solver with an "
               "entropy-constrained modal filter"};
  app.set_config("--config", "", "INI file with [run]/[converge] sections");
  app.require_subcommand(1);

  RunConfig run_cfg;
  std::string run_mesh;
  auto* run = app.add_subcommand("run", "Run one case to its end time");
  add_common_options(*run, run_cfg);
  run->add_option("--mesh", run_mesh, "Elements per direction: N, Nx,Ny or NxN");

  RunConfig conv_cfg;
  std::string conv_meshes;
  auto* converge =
      app.add_subcommand("converge", "Convergence study over mesh sizes");
  add_common_options(*converge, conv_cfg);
  converge->add_option("--meshes", conv_meshes, "Comma-separated N list")
      ->required();

  app.add_subcommand("selftest", "Quick property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("selftest")) return run_selftest_command();

    if (app.got_subcommand("run")) {
      if (!run_mesh.empty()) run_cfg.mesh = parse_mesh(run_mesh);
      run_cfg.timing = run->count("--no-timing") == 0;
      const auto report = run_named_case(run_cfg, &std::cerr);
      print_report(report);
      return kExitOk;
    }

    conv_cfg.timing = converge->count("--no-timing") == 0;
    const auto meshes = parse_mesh(conv_meshes);
    const auto table = convergence_study(conv_cfg, meshes, &std::cerr);
    const auto path = std::filesystem::path(
                          conv_cfg.out_dir.empty() ? "." : conv_cfg.out_dir) /
                      "convergence.csv";
    write_convergence_csv(table, path);
    std::cout << "N,eps_l1,eps_l2,rate_running\n";
    for (const auto& r : table.rows) {
      std::cout << r.n << ',' << format_number(r.eps_l1) << ','
                << format_number(r.eps_l2) << ','
                << format_number(r.rate_running) << '\n';
    }
    std::cout << "rate " << format_number(rate_uses_l2(table.case_name)
                                              ? table.rate_l2()
                                              : table.rate_l1())
              << "  (written to " << path.string() << ")\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Mean violations, infeasible filters, non-finite residuals and failed
    // feasibility checks all end the run here.
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitConstraint;
  }
}

#ifndef ENTROFILT_CASES_HPP_
#define ENTROFILT_CASES_HPP_

// Euler benchmark problems: Sod, Shu-Osher, isentropic vortex, double Mach
// reflection, Kelvin-Helmholtz and the Mach 800 jet, with their oracles.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "entrofilt/boundary.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/exact_riemann.hpp"
#include "entrofilt/mesh.hpp"

namespace entrofilt {

enum class OracleKind { kExactRiemann, kAnalytic, kReferenceRun, kNone };

inline const char* to_string(OracleKind k) {
  switch (k) {
    case OracleKind::kExactRiemann: return "exact-riemann";
    case OracleKind::kAnalytic: return "analytic";
    case OracleKind::kReferenceRun: return "reference-run";
    case OracleKind::kNone: return "none";
  }
  return "?";
}

template <int Dim>
struct CaseSpec {
  std::string name;
  Box<Dim> domain;
  std::array<int, Dim> default_mesh{};
  std::array<bool, Dim> periodic{};
  StateFunction<Dim> initial;
  BoundaryMap<Dim> boundaries;
  double t_end = 0.0;
  OracleKind oracle = OracleKind::kNone;
  // Closed-form solution q(x, t) for kExactRiemann / kAnalytic.
  StateFunction<Dim> exact;
  std::vector<int> recommended_orders;
  bool discontinuous = false;
};

inline const std::vector<std::string>& case_names() {
  static const std::vector<std::string> kNames = {"sod", "shu-osher", "vortex",
                                                  "dmr", "kh",        "jet"};
  return kNames;
}

/// Spatial dimension of a named case; ConfigError for unknown names.
inline int case_dimension(const std::string& name) {
  if (name == "sod" || name == "shu-osher") return 1;
  if (name == "vortex" || name == "dmr" || name == "kh" || name == "jet") {
    return 2;
  }
  throw ConfigError("unknown case '" + name +
                    "' (expected sod|shu-osher|vortex|dmr|kh|jet)");
}

namespace detail {

inline PrimitiveState<1> prim1(double rho, double v, double p) {
  return {rho, {v}, p};
}
inline PrimitiveState<2> prim2(double rho, double vx, double vy, double p) {
  return {rho, {vx, vy}, p};
}

template <int Dim>
BoundaryMap<Dim> uniform_boundaries(const BoundaryCondition<Dim>& bc) {
  BoundaryMap<Dim> m;
  for (int f = 0; f < 2 * Dim; ++f) m[side_tag(f)] = {{{}, bc}};
  return m;
}

}  // namespace detail

inline CaseSpec<1> sod_case() {
  const auto ql = detail::prim1(1.0, 0.0, 1.0);
  const auto qr = detail::prim1(0.125, 0.0, 0.1);
  CaseSpec<1> c;
  c.name = "sod";
  c.domain = {{0.0}, {1.0}};
  c.default_mesh = {40};
  c.periodic = {false};
  c.initial = [ql, qr](const Point<1>& x, double) {
    return x[0] <= 0.5 ? ql : qr;
  };
  c.boundaries =
      detail::uniform_boundaries(BoundaryCondition<1>::transmissive());
  c.t_end = 0.2;
  c.oracle = OracleKind::kExactRiemann;
  c.exact = [ql, qr](const Point<1>& x, double t) {
    if (t <= 0.0) return x[0] <= 0.5 ? ql : qr;
    return exact_riemann(ql, qr, (x[0] - 0.5) / t);
  };
  c.recommended_orders = {3, 5};
  c.discontinuous = true;
  return c;
}

inline CaseSpec<1> shu_osher_case() {
  const auto ql = detail::prim1(3.857143, 2.629369, 10.333333);
  CaseSpec<1> c;
  c.name = "shu-osher";
  c.domain = {{-5.0}, {5.0}};
  c.default_mesh = {200};
  c.periodic = {false};
  c.initial = [ql](const Point<1>& x, double) {
    if (x[0] <= -4.0) return ql;
    return detail::prim1(1.0 + 0.2 * std::sin(5.0 * x[0]), 0.0, 1.0);
  };
  c.boundaries =
      detail::uniform_boundaries(BoundaryCondition<1>::transmissive());
  c.t_end = 1.8;
  c.oracle = OracleKind::kReferenceRun;
  c.recommended_orders = {3};
  c.discontinuous = true;
  return c;
}

/// Cells of the in-repo Shu-Osher reference (first-order Godunov).
inline constexpr int kShuOsherReferenceCells = 20000;

inline CellReference shu_osher_reference(
    int cells = kShuOsherReferenceCells, const GasModel& gas = {}) {
  const auto spec = shu_osher_case();
  return godunov_reference(
      spec.domain.lo[0], spec.domain.hi[0], cells,
      [&](double x) { return spec.initial({x}, 0.0); }, spec.t_end, gas);
}

struct VortexParameters {
  double strength = 13.5;
  double radius = 1.5;
  double vx = 0.0;
  double vy = 1.0;
  double mach = 0.4;
  Point<2> center{0.0, 0.0};
  double half_width = 10.0;
  double gamma = 1.4;
  // rho = P^(1/gamma) literally, instead of rho = (gamma M^2 P)^(1/gamma).
  // The literal form is not in radial equilibrium, so the advected initial
  // condition is then not an exact solution.
  bool literal_density = false;
};

/// Isentropic vortex advected with (vx, vy) on the periodic square. The
/// free stream has P = 1/(gamma M^2) and, unless literal_density is set,
/// unit density.
inline PrimitiveState<2> vortex_exact(const Point<2>& x, double t,
                                      const VortexParameters& v = {}) {
  const double period = 2.0 * v.half_width;
  double dx = x[0] - v.center[0] - v.vx * t;
  double dy = x[1] - v.center[1] - v.vy * t;
  dx -= period * std::round(dx / period);
  dy -= period * std::round(dy / period);
  const double r2 = dx * dx + dy * dy;
  const double phi = std::exp((1.0 - r2) / (2.0 * v.radius * v.radius));
  const double amp = v.strength / (2.0 * std::numbers::pi * v.radius);
  const double g = v.gamma;
  const double m2 = v.mach * v.mach;
  const double p =
      1.0 / (g * m2) *
      std::pow(1.0 - v.strength * v.strength * m2 * (g - 1.0) /
                         (8.0 * std::numbers::pi * std::numbers::pi) * phi * phi,
               g / (g - 1.0));
  const double rho = v.literal_density ? std::pow(p, 1.0 / g)
                                       : std::pow(g * m2 * p, 1.0 / g);
  return {rho, {v.vx + amp * dy * phi, v.vy - amp * dx * phi}, p};
}

inline CaseSpec<2> vortex_case(const VortexParameters& v = {}) {
  CaseSpec<2> c;
  c.name = "vortex";
  c.domain = {{-v.half_width, -v.half_width}, {v.half_width, v.half_width}};
  c.default_mesh = {40, 40};
  c.periodic = {true, true};
  c.initial = [v](const Point<2>& x, double) { return vortex_exact(x, 0.0, v); };
  c.boundaries = detail::uniform_boundaries(BoundaryCondition<2>::periodic());
  // One pass through the domain: width / |V|.
  c.t_end = 2.0 * v.half_width / std::hypot(v.vx, v.vy);
  c.oracle = OracleKind::kAnalytic;
  c.exact = [v](const Point<2>& x, double t) { return vortex_exact(x, t, v); };
  c.recommended_orders = {2, 3, 4, 5, 6, 7};
  return c;
}

inline const PrimitiveState<2> kDmrPostShock =
    detail::prim2(8.0, 7.14471, -4.125, 116.5);
inline const PrimitiveState<2> kDmrPreShock = detail::prim2(1.4, 0.0, 0.0, 1.0);

/// Position of the Mach 10 shock at height y and time t.
inline double dmr_shock_x(double y, double t) {
  const double deg30 = std::numbers::pi / 6.0;
  return 1.0 / 6.0 + std::tan(deg30) * y + 10.0 / std::cos(deg30) * t;
}

inline CaseSpec<2> dmr_case() {
  CaseSpec<2> c;
  c.name = "dmr";
  c.domain = {{0.0, 0.0}, {4.0, 1.0}};
  c.default_mesh = {240, 60};
  c.periodic = {false, false};
  c.initial = [](const Point<2>& x, double) {
    return x[0] < dmr_shock_x(x[1], 0.0) ? kDmrPostShock : kDmrPreShock;
  };
  const auto post = BoundaryCondition<2>::fixed(kDmrPostShock);
  c.boundaries["left"] = {{{}, post}};
  c.boundaries["right"] = {{{}, BoundaryCondition<2>::fixed(kDmrPreShock)}};
  c.boundaries["bottom"] = {
      {[](const Point<2>& x) { return x[0] < 1.0 / 6.0; }, post},
      {{}, BoundaryCondition<2>::slip_wall()}};
  c.boundaries["top"] = {{{}, BoundaryCondition<2>::exact(
                                  [](const Point<2>& x, double t) {
                                    return x[0] <= dmr_shock_x(x[1], t)
                                               ? kDmrPostShock
                                               : kDmrPreShock;
                                  })}};
  c.t_end = 0.2;
  c.oracle = OracleKind::kNone;
  c.recommended_orders = {3};
  c.discontinuous = true;
  return c;
}

inline CaseSpec<2> kh_case() {
  const auto ql = detail::prim2(2.0, 0.5, 0.0, 2.5);
  const auto qr = detail::prim2(1.0, -0.5, 0.0, 2.5);
  CaseSpec<2> c;
  c.name = "kh";
  c.domain = {{-0.5, -0.5}, {0.5, 0.5}};
  c.default_mesh = {64, 64};
  c.periodic = {true, true};
  c.initial = [ql, qr](const Point<2>& x, double) {
    return std::abs(x[1]) <= 0.25 ? ql : qr;
  };
  c.boundaries = detail::uniform_boundaries(BoundaryCondition<2>::periodic());
  c.t_end = 2.0;
  c.oracle = OracleKind::kNone;
  c.recommended_orders = {4};
  c.discontinuous = true;
  return c;
}

inline CaseSpec<2> jet_case(double gamma = 1.4) {
  const auto ambient = detail::prim2(0.1 * gamma, 0.0, 0.0, 1.0);
  const auto inflow = detail::prim2(gamma, 0.0, 800.0, 1.0);
  CaseSpec<2> c;
  c.name = "jet";
  c.domain = {{0.0, 0.0}, {0.5, 1.5}};
  c.default_mesh = {100, 300};
  c.periodic = {false, false};
  c.initial = [ambient](const Point<2>&, double) { return ambient; };
  const auto free = BoundaryCondition<2>::transmissive();
  c.boundaries["left"] = {{{}, BoundaryCondition<2>::slip_wall()}};
  c.boundaries["right"] = {{{}, free}};
  c.boundaries["top"] = {{{}, free}};
  c.boundaries["bottom"] = {
      {[](const Point<2>& x) { return x[0] <= 0.05; },
       BoundaryCondition<2>::fixed(inflow)},
      {{}, free}};
  c.t_end = 0.002;
  c.oracle = OracleKind::kNone;
  c.recommended_orders = {3};
  c.discontinuous = true;
  return c;
}

inline CaseSpec<1> case_1d(const std::string& name) {
  if (name == "sod") return sod_case();
  if (name == "shu-osher") return shu_osher_case();
  throw ConfigError("'" + name + "' is not a 1D case");
}

inline CaseSpec<2> case_2d(const std::string& name) {
  if (name == "vortex") return vortex_case();
  if (name == "dmr") return dmr_case();
  if (name == "kh") return kh_case();
  if (name == "jet") return jet_case();
  throw ConfigError("'" + name + "' is not a 2D case");
}

}  // namespace entrofilt

#endif  // ENTROFILT_CASES_HPP_

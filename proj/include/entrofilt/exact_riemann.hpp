#ifndef ENTROFILT_EXACT_RIEMANN_HPP_
#define ENTROFILT_EXACT_RIEMANN_HPP_

// Exact solution of the 1D Riemann problem for an ideal gas: Newton iteration
// on the pressure function for the star state, then sampling of the
// self-similar wave fan.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"

namespace entrofilt {

struct StarState {
  double p = 0.0;
  double u = 0.0;
  int iterations = 0;
};

namespace detail {

struct PressureFunction {
  double f;
  double df;
};

inline PressureFunction riemann_pressure_function(double p, double rho_k,
                                                  double p_k, double c_k,
                                                  double gamma) {
  if (p > p_k) {
    const double a = 2.0 / ((gamma + 1.0) * rho_k);
    const double b = (gamma - 1.0) / (gamma + 1.0) * p_k;
    const double s = std::sqrt(a / (p + b));
    return {(p - p_k) * s, s * (1.0 - 0.5 * (p - p_k) / (b + p))};
  }
  const double r = p / p_k;
  const double e = (gamma - 1.0) / (2.0 * gamma);
  return {2.0 * c_k / (gamma - 1.0) * (std::pow(r, e) - 1.0),
          std::pow(r, -(gamma + 1.0) / (2.0 * gamma)) / (rho_k * c_k)};
}

}  // namespace detail

/// Star-region pressure and velocity. Throws ConvergenceError when Newton
/// does not reach a relative change of `tol` within `max_iterations`.
inline StarState riemann_star_state(const PrimitiveState<1>& l,
                                    const PrimitiveState<1>& r,
                                    double gamma = 1.4, double tol = 1e-12,
                                    int max_iterations = 100) {
  if (!(l.rho > 0.0 && r.rho > 0.0 && l.p > 0.0 && r.p > 0.0)) {
    throw ConfigError("exact_riemann: states must be admissible");
  }
  const double cl = std::sqrt(gamma * l.p / l.rho);
  const double cr = std::sqrt(gamma * r.p / r.rho);
  const double du = r.vel[0] - l.vel[0];
  if (2.0 * (cl + cr) / (gamma - 1.0) <= du) {
    throw ConfigError("exact_riemann: initial data generate vacuum");
  }
  double p = std::max(
      1e-14, 0.5 * (l.p + r.p) - 0.125 * du * (l.rho + r.rho) * (cl + cr));
  for (int it = 1; it <= max_iterations; ++it) {
    const auto fl = detail::riemann_pressure_function(p, l.rho, l.p, cl, gamma);
    const auto fr = detail::riemann_pressure_function(p, r.rho, r.p, cr, gamma);
    double p_new = p - (fl.f + fr.f + du) / (fl.df + fr.df);
    if (p_new < 0.0) p_new = 1e-14;
    const double change = 2.0 * std::abs(p_new - p) / (p_new + p);
    p = p_new;
    if (change < tol) {
      const auto gl = detail::riemann_pressure_function(p, l.rho, l.p, cl, gamma);
      const auto gr = detail::riemann_pressure_function(p, r.rho, r.p, cr, gamma);
      return {p, 0.5 * (l.vel[0] + r.vel[0]) + 0.5 * (gr.f - gl.f), it};
    }
  }
  throw ConvergenceError("exact_riemann: Newton iteration did not converge");
}

/// Solution of the Riemann problem (l | r) at similarity coordinate x/t.
inline PrimitiveState<1> exact_riemann(const PrimitiveState<1>& l,
                                       const PrimitiveState<1>& r, double s,
                                       double gamma = 1.4) {
  const StarState star = riemann_star_state(l, r, gamma);
  const double g1 = (gamma - 1.0) / (gamma + 1.0);
  const double ul = l.vel[0], ur = r.vel[0];
  const double cl = std::sqrt(gamma * l.p / l.rho);
  const double cr = std::sqrt(gamma * r.p / r.rho);
  PrimitiveState<1> out;

  if (s <= star.u) {
    if (star.p > l.p) {
      const double pr = star.p / l.p;
      const double shock =
          ul - cl * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr +
                              (gamma - 1.0) / (2.0 * gamma));
      if (s <= shock) return l;
      out.rho = l.rho * (pr + g1) / (pr * g1 + 1.0);
      out.vel[0] = star.u;
      out.p = star.p;
      return out;
    }
    const double head = ul - cl;
    if (s <= head) return l;
    const double c_star = cl * std::pow(star.p / l.p, (gamma - 1.0) / (2.0 * gamma));
    const double tail = star.u - c_star;
    if (s > tail) {
      out.rho = l.rho * std::pow(star.p / l.p, 1.0 / gamma);
      out.vel[0] = star.u;
      out.p = star.p;
      return out;
    }
    const double c = 2.0 / (gamma + 1.0) * (cl + 0.5 * (gamma - 1.0) * (ul - s));
    out.rho = l.rho * std::pow(c / cl, 2.0 / (gamma - 1.0));
    out.vel[0] = 2.0 / (gamma + 1.0) * (cl + 0.5 * (gamma - 1.0) * ul + s);
    out.p = l.p * std::pow(c / cl, 2.0 * gamma / (gamma - 1.0));
    return out;
  }

  if (star.p > r.p) {
    const double pr = star.p / r.p;
    const double shock =
        ur + cr * std::sqrt((gamma + 1.0) / (2.0 * gamma) * pr +
                            (gamma - 1.0) / (2.0 * gamma));
    if (s >= shock) return r;
    out.rho = r.rho * (pr + g1) / (pr * g1 + 1.0);
    out.vel[0] = star.u;
    out.p = star.p;
    return out;
  }
  const double head = ur + cr;
  if (s >= head) return r;
  const double c_star = cr * std::pow(star.p / r.p, (gamma - 1.0) / (2.0 * gamma));
  const double tail = star.u + c_star;
  if (s <= tail) {
    out.rho = r.rho * std::pow(star.p / r.p, 1.0 / gamma);
    out.vel[0] = star.u;
    out.p = star.p;
    return out;
  }
  const double c = 2.0 / (gamma + 1.0) * (cr - 0.5 * (gamma - 1.0) * (ur - s));
  out.rho = r.rho * std::pow(c / cr, 2.0 / (gamma - 1.0));
  out.vel[0] = 2.0 / (gamma + 1.0) * (-cr + 0.5 * (gamma - 1.0) * ur + s);
  out.p = r.p * std::pow(c / cr, 2.0 * gamma / (gamma - 1.0));
  return out;
}

/// Godunov flux: physical flux of the exact solution at x/t = 0.
inline FluxVector<1> godunov_flux(const ConservativeState<1>& ul,
                                  const ConservativeState<1>& ur,
                                  const GasModel& gas) {
  const auto wl = cons_to_prim(ul, gas);
  const auto wr = cons_to_prim(ur, gas);
  const auto w0 = exact_riemann(wl, wr, 0.0, gas.gamma);
  const auto u0 = prim_to_cons(w0, gas);
  return euler_flux(u0, w0.p, 0);
}

/// Piecewise-constant reference solution on a uniform grid of cells.
struct CellReference {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<PrimitiveState<1>> cells;

  PrimitiveState<1> at(double x) const {
    auto i = static_cast<long>(std::floor((x - x0) / dx));
    i = std::clamp<long>(i, 0, static_cast<long>(cells.size()) - 1);
    return cells[static_cast<size_t>(i)];
  }
};

/// First-order Godunov finite-volume run with exact Riemann fluxes and
/// transmissive ends; used as the reference for problems without a closed
/// form solution.
template <typename InitialCondition>
CellReference godunov_reference(double x_lo, double x_hi, int cells,
                                const InitialCondition& ic, double t_end,
                                const GasModel& gas, double cfl = 0.9) {
  CellReference ref;
  ref.x0 = x_lo;
  ref.dx = (x_hi - x_lo) / cells;
  std::vector<ConservativeState<1>> u(cells), next(cells);
  for (int i = 0; i < cells; ++i) {
    u[i] = prim_to_cons(ic(x_lo + (i + 0.5) * ref.dx), gas);
  }
  std::vector<FluxVector<1>> flux(cells + 1);
  double t = 0.0;
  while (t < t_end) {
    double lam = 0.0;
    for (const auto& s : u) lam = std::max(lam, max_wavespeed(s, gas));
    double dt = cfl * ref.dx / lam;
    if (t + dt >= t_end) dt = t_end - t;
    for (int k = 0; k <= cells; ++k) {
      const auto& l = u[std::max(k - 1, 0)];
      const auto& r = u[std::min(k, cells - 1)];
      flux[k] = godunov_flux(l, r, gas);
    }
    for (int i = 0; i < cells; ++i) {
      next[i] = u[i] - (dt / ref.dx) * (flux[i + 1] - flux[i]);
    }
    std::swap(u, next);
    t += dt;
  }
  ref.cells.resize(cells);
  for (int i = 0; i < cells; ++i) ref.cells[i] = cons_to_prim(u[i], gas);
  return ref;
}

}  // namespace entrofilt

#endif  // ENTROFILT_EXACT_RIEMANN_HPP_

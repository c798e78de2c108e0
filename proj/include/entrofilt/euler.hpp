#ifndef ENTROFILT_EULER_HPP_
#define ENTROFILT_EULER_HPP_

// Compressible Euler system for an ideal gas: state conversions, physical
// flux, numerical entropy and the Rusanov / HLLC interface fluxes.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "entrofilt/errors.hpp"
#include "entrofilt/mesh.hpp"

namespace entrofilt {

/// Entropy functional constrained by the filter. kPhysical is
/// rho log(P rho^-gamma); kSpecific drops the density factor and constrains
/// the specific entropy log(P rho^-gamma).
enum class EntropyFunctional { kPhysical, kSpecific };

inline EntropyFunctional parse_entropy_functional(const std::string& name) {
  if (name == "physical") return EntropyFunctional::kPhysical;
  if (name == "specific") return EntropyFunctional::kSpecific;
  throw ConfigError("unknown entropy functional '" + name +
                    "' (expected physical|specific)");
}

inline const char* to_string(EntropyFunctional f) {
  return f == EntropyFunctional::kSpecific ? "specific" : "physical";
}

struct GasModel {
  double gamma = 1.4;
  double rho_min = 1e-8;
  double p_min = 1e-8;
  double eps_sigma = 1e-4;
  EntropyFunctional entropy = EntropyFunctional::kPhysical;

  void validate() const {
    if (!(gamma > 1.0)) throw ConfigError("GasModel: gamma must exceed 1");
    if (!(rho_min > 0.0) || !(p_min > 0.0)) {
      throw ConfigError("GasModel: floors must be positive");
    }
    if (!(eps_sigma >= 0.0)) {
      throw ConfigError("GasModel: eps_sigma must be non-negative");
    }
  }
};

/// Conserved variables (rho, rho v, E), stored contiguously so that modal
/// transforms and Runge-Kutta combinations can treat them as a vector.
template <int Dim>
struct ConservativeState {
  static constexpr int kVars = Dim + 2;
  std::array<double, kVars> q{};

  double& operator[](int i) { return q[i]; }
  double operator[](int i) const { return q[i]; }

  double rho() const { return q[0]; }
  double mom(int d) const { return q[1 + d]; }
  double energy() const { return q[Dim + 1]; }

  ConservativeState& operator+=(const ConservativeState& o) {
    for (int i = 0; i < kVars; ++i) q[i] += o.q[i];
    return *this;
  }
  ConservativeState& operator-=(const ConservativeState& o) {
    for (int i = 0; i < kVars; ++i) q[i] -= o.q[i];
    return *this;
  }
  ConservativeState& operator*=(double s) {
    for (int i = 0; i < kVars; ++i) q[i] *= s;
    return *this;
  }
  friend ConservativeState operator+(ConservativeState a,
                                     const ConservativeState& b) {
    return a += b;
  }
  friend ConservativeState operator-(ConservativeState a,
                                     const ConservativeState& b) {
    return a -= b;
  }
  friend ConservativeState operator*(double s, ConservativeState a) {
    return a *= s;
  }
  friend bool operator==(const ConservativeState&,
                         const ConservativeState&) = default;
};

template <int Dim>
struct PrimitiveState {
  double rho = 0.0;
  std::array<double, Dim> vel{};
  double p = 0.0;

  friend bool operator==(const PrimitiveState&,
                         const PrimitiveState&) = default;
};

template <int Dim>
using FluxVector = ConservativeState<Dim>;

namespace detail {

template <int Dim>
double kinetic_energy(const ConservativeState<Dim>& u) {
  double m2 = 0.0;
  for (int d = 0; d < Dim; ++d) m2 += u.mom(d) * u.mom(d);
  return 0.5 * m2 / u.rho();
}

template <int Dim>
std::string describe(const ConservativeState<Dim>& u) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < ConservativeState<Dim>::kVars; ++i) {
    os << (i ? ", " : "") << u[i];
  }
  os << ")";
  return os.str();
}

}  // namespace detail

template <int Dim>
double pressure(const ConservativeState<Dim>& u, const GasModel& gas) {
  if (u.rho() == 0.0) {
    throw DegenerateStateError("pressure: zero density");
  }
  return (gas.gamma - 1.0) * (u.energy() - detail::kinetic_energy(u));
}

template <int Dim>
ConservativeState<Dim> prim_to_cons(const PrimitiveState<Dim>& w,
                                    const GasModel& gas) {
  ConservativeState<Dim> u;
  u[0] = w.rho;
  double v2 = 0.0;
  for (int d = 0; d < Dim; ++d) {
    u[1 + d] = w.rho * w.vel[d];
    v2 += w.vel[d] * w.vel[d];
  }
  u[Dim + 1] = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * v2;
  return u;
}

template <int Dim>
PrimitiveState<Dim> cons_to_prim(const ConservativeState<Dim>& u,
                                 const GasModel& gas) {
  if (u.rho() == 0.0) {
    throw DegenerateStateError("cons_to_prim: zero density");
  }
  PrimitiveState<Dim> w;
  w.rho = u.rho();
  for (int d = 0; d < Dim; ++d) w.vel[d] = u.mom(d) / u.rho();
  w.p = pressure(u, gas);
  return w;
}

/// Physical flux along coordinate direction `dir`, given the pressure.
template <int Dim>
FluxVector<Dim> euler_flux(const ConservativeState<Dim>& u, double p,
                           int dir) {
  const double vn = u.mom(dir) / u.rho();
  FluxVector<Dim> f;
  f[0] = u.mom(dir);
  for (int d = 0; d < Dim; ++d) f[1 + d] = u.mom(d) * vn;
  f[1 + dir] += p;
  f[Dim + 1] = (u.energy() + p) * vn;
  return f;
}

/// All Dim flux columns of the Euler system.
template <int Dim>
std::array<FluxVector<Dim>, Dim> euler_flux(const ConservativeState<Dim>& u,
                                            const GasModel& gas) {
  const double p = pressure(u, gas);
  std::array<FluxVector<Dim>, Dim> out;
  for (int d = 0; d < Dim; ++d) out[d] = euler_flux(u, p, d);
  return out;
}

/// F(u).n for a unit vector n.
template <int Dim>
FluxVector<Dim> normal_flux(const ConservativeState<Dim>& u,
                            const Point<Dim>& n, const GasModel& gas) {
  const double p = pressure(u, gas);
  double vn = 0.0;
  for (int d = 0; d < Dim; ++d) vn += u.mom(d) * n[d];
  vn /= u.rho();
  FluxVector<Dim> f;
  f[0] = u.rho() * vn;
  for (int d = 0; d < Dim; ++d) f[1 + d] = u.mom(d) * vn + p * n[d];
  f[Dim + 1] = (u.energy() + p) * vn;
  return f;
}

/// Numerical entropy sigma = rho log(P rho^-gamma); -infinity for states
/// with non-positive density or pressure.
inline double entropy_from(double rho, double p, double gamma) {
  if (!(rho > 0.0) || !(p > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  return rho * (std::log(p) - gamma * std::log(rho));
}

inline double entropy_from(double rho, double p, const GasModel& gas) {
  if (gas.entropy == EntropyFunctional::kSpecific) {
    if (!(rho > 0.0) || !(p > 0.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::log(p) - gas.gamma * std::log(rho);
  }
  return entropy_from(rho, p, gas.gamma);
}

template <int Dim>
double entropy(const ConservativeState<Dim>& u, const GasModel& gas) {
  if (!(u.rho() > 0.0)) return -std::numeric_limits<double>::infinity();
  return entropy_from(u.rho(), pressure(u, gas), gas);
}

template <int Dim>
double sound_speed(const ConservativeState<Dim>& u, const GasModel& gas) {
  const double p = pressure(u, gas);
  if (!(u.rho() > 0.0) || !(p > 0.0)) {
    throw NumericalError("sound_speed: inadmissible state " +
                         detail::describe(u));
  }
  return std::sqrt(gas.gamma * p / u.rho());
}

/// |v| + c.
template <int Dim>
double max_wavespeed(const ConservativeState<Dim>& u, const GasModel& gas) {
  const double c = sound_speed(u, gas);
  double v2 = 0.0;
  for (int d = 0; d < Dim; ++d) v2 += u.mom(d) * u.mom(d);
  return std::sqrt(v2) / u.rho() + c;
}

/// Lifts density and pressure to the floors. Vacuum or non-finite states
/// are rejected.
template <int Dim>
ConservativeState<Dim> floor_state(const ConservativeState<Dim>& u,
                                   const GasModel& gas) {
  for (int i = 0; i < ConservativeState<Dim>::kVars; ++i) {
    if (!std::isfinite(u[i])) {
      throw NumericalError("Riemann solver: non-finite state " +
                           detail::describe(u));
    }
  }
  if (!(u.rho() > 0.0)) {
    throw NumericalError("Riemann solver: vacuum state " +
                         detail::describe(u));
  }
  ConservativeState<Dim> out = u;
  if (out.rho() < gas.rho_min) {
    const double s = gas.rho_min / out.rho();
    out *= s;
  }
  const double p = pressure(out, gas);
  if (p < gas.p_min) {
    out[Dim + 1] += (gas.p_min - p) / (gas.gamma - 1.0);
  }
  return out;
}

enum class RiemannSolver { kRusanov, kHllc };

inline RiemannSolver parse_riemann_solver(const std::string& name) {
  if (name == "rusanov") return RiemannSolver::kRusanov;
  if (name == "hllc") return RiemannSolver::kHllc;
  throw ConfigError("unknown Riemann solver '" + name +
                    "' (expected hllc|rusanov)");
}

inline const char* to_string(RiemannSolver r) {
  return r == RiemannSolver::kRusanov ? "rusanov" : "hllc";
}

namespace detail {

template <int Dim>
struct FaceState {
  ConservativeState<Dim> u;
  double p;
  double vn;
  double c;
  FluxVector<Dim> fn;
};

template <int Dim>
FaceState<Dim> face_state(const ConservativeState<Dim>& raw,
                          const Point<Dim>& n, const GasModel& gas) {
  FaceState<Dim> s;
  s.u = floor_state(raw, gas);
  s.p = pressure(s.u, gas);
  double mn = 0.0;
  for (int d = 0; d < Dim; ++d) mn += s.u.mom(d) * n[d];
  s.vn = mn / s.u.rho();
  s.c = std::sqrt(gas.gamma * s.p / s.u.rho());
  s.fn[0] = mn;
  for (int d = 0; d < Dim; ++d) s.fn[1 + d] = s.u.mom(d) * s.vn + s.p * n[d];
  s.fn[Dim + 1] = (s.u.energy() + s.p) * s.vn;
  return s;
}

}  // namespace detail

/// Local Lax-Friedrichs flux.
template <int Dim>
FluxVector<Dim> rusanov_flux(const ConservativeState<Dim>& ul,
                             const ConservativeState<Dim>& ur,
                             const Point<Dim>& n, const GasModel& gas) {
  const auto l = detail::face_state<Dim>(ul, n, gas);
  const auto r = detail::face_state<Dim>(ur, n, gas);
  const double lam = std::max(std::abs(l.vn) + l.c, std::abs(r.vn) + r.c);
  FluxVector<Dim> f;
  for (int i = 0; i < ConservativeState<Dim>::kVars; ++i) {
    f[i] = 0.5 * (l.fn[i] + r.fn[i]) - 0.5 * lam * (r.u[i] - l.u[i]);
  }
  return f;
}

/// HLLC flux with Davis wavespeed bounds.
template <int Dim>
FluxVector<Dim> hllc_flux(const ConservativeState<Dim>& ul,
                          const ConservativeState<Dim>& ur,
                          const Point<Dim>& n, const GasModel& gas) {
  const auto l = detail::face_state<Dim>(ul, n, gas);
  const auto r = detail::face_state<Dim>(ur, n, gas);
  const double sl = std::min(l.vn - l.c, r.vn - r.c);
  const double sr = std::max(l.vn + l.c, r.vn + r.c);
  if (sl >= 0.0) return l.fn;
  if (sr <= 0.0) return r.fn;

  const double ml = l.u.rho() * (sl - l.vn);
  const double mr = r.u.rho() * (sr - r.vn);
  const double s_star = (r.p - l.p + ml * l.vn - mr * r.vn) / (ml - mr);

  auto star_flux = [&](const detail::FaceState<Dim>& k, double sk) {
    const double m = k.u.rho() * (sk - k.vn);
    const double factor = m / (sk - s_star);
    ConservativeState<Dim> u_star;
    u_star[0] = factor;
    for (int d = 0; d < Dim; ++d) {
      const double v = k.u.mom(d) / k.u.rho();
      u_star[1 + d] = factor * (v + (s_star - k.vn) * n[d]);
    }
    u_star[Dim + 1] =
        factor * (k.u.energy() / k.u.rho() +
                  (s_star - k.vn) * (s_star + k.p / m));
    FluxVector<Dim> f = k.fn;
    for (int i = 0; i < ConservativeState<Dim>::kVars; ++i) {
      f[i] += sk * (u_star[i] - k.u[i]);
    }
    return f;
  };
  if (s_star >= 0.0) return star_flux(l, sl);
  return star_flux(r, sr);
}

template <int Dim>
FluxVector<Dim> riemann_flux(RiemannSolver kind,
                             const ConservativeState<Dim>& ul,
                             const ConservativeState<Dim>& ur,
                             const Point<Dim>& n, const GasModel& gas) {
  return kind == RiemannSolver::kRusanov ? rusanov_flux<Dim>(ul, ur, n, gas)
                                         : hllc_flux<Dim>(ul, ur, n, gas);
}

}  // namespace entrofilt

#endif  // ENTROFILT_EULER_HPP_

#ifndef ENTROFILT_ENTROPY_FILTER_HPP_
#define ENTROFILT_ENTROPY_FILTER_HPP_

// Adaptive modal filtering that enforces density/pressure floors and a local
// discrete minimum entropy principle.
//
// Each element's Legendre modes are damped by exp(-zeta * p_i^2) with the
// smallest zeta (found by bisection) for which every filtered solution node
// satisfies
//   rho >= rho_min,  P >= P_min,  sigma >= sigma_min - eps_sigma,
// where sigma_min is the minimum nodal entropy over the element and its face
// neighbours at the previous stage. The mean mode is never touched, so the
// filter is conservative; zeta = zeta_max reduces the element to its mean,
// which is admissible whenever the underlying scheme keeps means admissible.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrofilt/basis.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/mesh.hpp"
#include "entrofilt/parallel.hpp"

namespace entrofilt {

enum class ConstraintClass { kNone, kDensity, kPressure, kEntropy };

inline const char* to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::kNone: return "none";
    case ConstraintClass::kDensity: return "density";
    case ConstraintClass::kPressure: return "pressure";
    case ConstraintClass::kEntropy: return "entropy";
  }
  return "?";
}

/// kEntropy: exponential filter. kLinear: single factor on all non-mean
/// modes (linear scaling limiter). kOff: no filtering.
enum class FilterMode { kEntropy, kLinear, kOff };

inline FilterMode parse_filter_mode(const std::string& name) {
  if (name == "entropy") return FilterMode::kEntropy;
  if (name == "linear") return FilterMode::kLinear;
  if (name == "off") return FilterMode::kOff;
  throw ConfigError("unknown filter mode '" + name +
                    "' (expected entropy|linear|off)");
}

inline const char* to_string(FilterMode m) {
  switch (m) {
    case FilterMode::kEntropy: return "entropy";
    case FilterMode::kLinear: return "linear";
    case FilterMode::kOff: return "off";
  }
  return "?";
}

/// e^-46 < 1e-20: every p_i > 0 mode is numerically gone.
inline constexpr double kZetaMax = 46.0;
inline constexpr int kBisectionIterations = 20;

struct FilterOptions {
  FilterMode mode = FilterMode::kEntropy;
  int iterations = kBisectionIterations;
  double zeta_max = kZetaMax;
};

/// Per-element result. For the linear limiter `zeta` holds 1 - theta, the
/// fraction of the non-mean modes removed.
struct FilterOutcome {
  double zeta = 0.0;
  int iterations = 0;
  bool activated = false;
  ConstraintClass binding = ConstraintClass::kNone;
};

struct ConstraintCheck {
  bool ok = true;
  ConstraintClass binding = ConstraintClass::kNone;
  explicit operator bool() const { return ok; }
};

/// Entropy of a probe state with the floors applied: below either floor the
/// value is -infinity, never NaN.
template <int Dim>
double floored_entropy(const ConservativeState<Dim>& u, const GasModel& gas) {
  if (!(u.rho() >= gas.rho_min)) return -std::numeric_limits<double>::infinity();
  const double p = pressure(u, gas);
  if (!(p >= gas.p_min)) return -std::numeric_limits<double>::infinity();
  return entropy_from(u.rho(), p, gas);
}

template <int Dim>
ConstraintCheck check_state(const ConservativeState<Dim>& u,
                            double sigma_min, const GasModel& gas) {
  if (!(u.rho() >= gas.rho_min)) return {false, ConstraintClass::kDensity};
  const double p = pressure(u, gas);
  if (!(p >= gas.p_min)) return {false, ConstraintClass::kPressure};
  if (!(entropy_from(u.rho(), p, gas) >= sigma_min - gas.eps_sigma)) {
    return {false, ConstraintClass::kEntropy};
  }
  return {};
}

/// True iff every node satisfies the floors and the entropy bound; otherwise
/// the class of the first violation found.
template <int Dim>
ConstraintCheck constraints_satisfied(
    std::span<const ConservativeState<Dim>> states, double sigma_min,
    const GasModel& gas) {
  for (const auto& u : states) {
    const auto c = check_state(u, sigma_min, gas);
    if (!c.ok) return c;
  }
  return {};
}

/// sigma*_k: minimum nodal entropy, -infinity if any node is inadmissible.
template <int Dim>
double element_min_entropy(std::span<const ConservativeState<Dim>> states,
                           const GasModel& gas) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& u : states) s = std::min(s, entropy(u, gas));
  return s;
}

/// Quadrature-weighted element mean.
template <int Dim>
ConservativeState<Dim> element_mean(
    std::span<const ConservativeState<Dim>> states,
    const ReferenceBasis<Dim>& basis) {
  ConservativeState<Dim> m;
  double wsum = 0.0;
  for (int i = 0; i < basis.n_nodes; ++i) {
    const double w = basis.quad_weights[i];
    for (int v = 0; v < ConservativeState<Dim>::kVars; ++v) {
      m[v] += w * states[i][v];
    }
    wsum += w;
  }
  m *= 1.0 / wsum;
  return m;
}

/// sigma_min^k = min over A(k) of sigma*, with boundary faces contributing
/// the entropy of their boundary state. `boundary_sigma[e][f]` is read only
/// for boundary faces.
template <int Dim>
std::vector<double> compute_sigma_min(
    const MeshTopology<Dim>& mesh, std::span<const double> sigma_star,
    std::span<const std::array<double, 2 * Dim>> boundary_sigma) {
  std::vector<double> out(mesh.n_elements());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    double s = sigma_star[e];
    for (int f = 0; f < 2 * Dim; ++f) {
      const int nb = mesh.neighbor(e, f);
      if (nb == MeshTopology<Dim>::kBoundary) {
        if (!boundary_sigma.empty()) s = std::min(s, boundary_sigma[e][f]);
      } else {
        s = std::min(s, sigma_star[nb]);
      }
    }
    out[e] = s;
  }
  return out;
}

/// Scales mode i by exp(-zeta * p_i^2).
template <typename Derived>
void apply_exponential_filter(Eigen::DenseBase<Derived>& modes,
                                     std::span<const int> mode_orders,
                                     double zeta) {
  if (!(zeta >= 0.0)) {
    throw ConfigError("apply_exponential_filter: zeta must be non-negative");
  }
  for (int i = 0; i < modes.rows(); ++i) {
    const double p = mode_orders[i];
    modes.row(i) *= std::exp(-zeta * p * p);
  }
}

/// Scales every p_i > 0 mode by theta in [0, 1].
template <typename Derived>
void apply_linear_limiter(Eigen::DenseBase<Derived>& modes,
                                 std::span<const int> mode_orders,
                                 double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("apply_linear_limiter: theta must lie in [0, 1]");
  }
  for (int i = 0; i < modes.rows(); ++i) {
    if (mode_orders[i] > 0) modes.row(i) *= theta;
  }
}

namespace detail {

template <int Dim>
using StateMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, ConservativeState<Dim>::kVars,
                  Eigen::RowMajor>;

template <int Dim>
Eigen::Map<StateMatrix<Dim>> as_matrix(std::span<ConservativeState<Dim>> s) {
  static_assert(sizeof(ConservativeState<Dim>) ==
                sizeof(double) * ConservativeState<Dim>::kVars);
  return {reinterpret_cast<double*>(s.data()),
          static_cast<Eigen::Index>(s.size()), ConservativeState<Dim>::kVars};
}

template <int Dim>
Eigen::Map<const StateMatrix<Dim>> as_matrix(
    std::span<const ConservativeState<Dim>> s) {
  return {reinterpret_cast<const double*>(s.data()),
          static_cast<Eigen::Index>(s.size()), ConservativeState<Dim>::kVars};
}

}  // namespace detail

/// Filters one element in place with the minimal strength that makes every
/// node admissible. Feasible elements are left bit-identical. Throws
/// MeanViolationError when the element mean itself is inadmissible.
template <int Dim>
FilterOutcome filter_element(std::span<ConservativeState<Dim>> states,
                             const ReferenceBasis<Dim>& basis,
                             double sigma_min, const GasModel& gas,
                             const FilterOptions& opt = {}) {
  using CS = ConservativeState<Dim>;
  if (opt.mode == FilterMode::kOff) return {};
  const std::span<const CS> cstates(states.data(), states.size());
  const auto initial = constraints_satisfied<Dim>(cstates, sigma_min, gas);
  if (initial.ok) return {};

  const auto mean = element_mean<Dim>(cstates, basis);
  if (const auto c = check_state(mean, sigma_min, gas); !c.ok) {
    throw MeanViolationError(
        std::string("filter: element mean violates the ") + to_string(c.binding) +
        " constraint (mean " + detail::describe(mean) +
        ", sigma_min " + std::to_string(sigma_min) + ")");
  }

  const int n = basis.n_nodes;
  thread_local detail::StateMatrix<Dim> modes, scaled, trial, best;
  modes.noalias() = basis.modal_fwd * detail::as_matrix<Dim>(cstates);
  scaled.resize(n, CS::kVars);
  trial.resize(n, CS::kVars);

  const bool linear = opt.mode == FilterMode::kLinear;
  const double strength_max = linear ? 1.0 : opt.zeta_max;

  auto feasible_at = [&](double strength) {
    scaled = modes;
    if (linear) {
      apply_linear_limiter(scaled, basis.mode_orders, 1.0 - strength);
    } else {
      apply_exponential_filter(scaled, basis.mode_orders, strength);
    }
    trial.noalias() = basis.modal_inv * scaled;
    for (int i = 0; i < n; ++i) {
      CS u;
      for (int v = 0; v < CS::kVars; ++v) u[v] = trial(i, v);
      if (!check_state(u, sigma_min, gas).ok) return false;
    }
    return true;
  };

  if (!feasible_at(strength_max)) {
    throw InfeasibleFilterError(
        "filter: fully filtered element is inadmissible (mean " +
        detail::describe(mean) + ")");
  }
  best = trial;

  double lo = 0.0, hi = strength_max;
  for (int it = 0; it < opt.iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_at(mid)) {
      hi = mid;
      best = trial;
    } else {
      lo = mid;
    }
  }
  detail::as_matrix<Dim>(states) = best;

  FilterOutcome out;
  out.zeta = hi;
  out.iterations = opt.iterations;
  out.activated = true;
  out.binding = initial.binding;
  return out;
}

/// Per-element sigma* of a nodal field laid out element-major.
template <int Dim>
std::vector<double> element_min_entropies(
    std::span<const ConservativeState<Dim>> field, int nodes_per_element,
    const GasModel& gas) {
  const int ne = static_cast<int>(field.size()) / nodes_per_element;
  std::vector<double> out(ne);
  for (int e = 0; e < ne; ++e) {
    out[e] = element_min_entropy<Dim>(
        field.subspan(static_cast<size_t>(e) * nodes_per_element,
                      nodes_per_element),
        gas);
  }
  return out;
}

/// Filters every element given precomputed sigma_min. Element errors are
/// rethrown with the element index. `order` optionally fixes the visiting
/// order; the result does not depend on it.
template <int Dim>
std::vector<FilterOutcome> filter_field(
    std::span<ConservativeState<Dim>> field, std::span<const double> sigma_min,
    const ReferenceBasis<Dim>& basis, const GasModel& gas,
    const FilterOptions& opt = {}, std::span<const int> order = {}) {
  const int n = basis.n_nodes;
  const int ne = static_cast<int>(field.size()) / n;
  std::vector<FilterOutcome> outcomes(ne);
  if (opt.mode == FilterMode::kOff) return outcomes;
  parallel_for(ne, [&](int k) {
    const int e = order.empty() ? k : order[k];
    try {
      outcomes[e] = filter_element<Dim>(
          field.subspan(static_cast<size_t>(e) * n, n), basis, sigma_min[e],
          gas, opt);
    } catch (const MeanViolationError& err) {
      throw MeanViolationError(
          std::string(err.what()) + " in element " + std::to_string(e), e);
    } catch (const InfeasibleFilterError& err) {
      throw InfeasibleFilterError(
          std::string(err.what()) + " in element " + std::to_string(e), e);
    }
  });
  return outcomes;
}

/// Full filter pass: sigma* from the previous-stage field, sigma_min over
/// face neighbours and boundary states, then element-local filtering.
template <int Dim>
std::vector<FilterOutcome> filter_field(
    std::span<ConservativeState<Dim>> field,
    std::span<const ConservativeState<Dim>> previous,
    std::span<const std::array<double, 2 * Dim>> boundary_sigma,
    const MeshTopology<Dim>& mesh, const ReferenceBasis<Dim>& basis,
    const GasModel& gas, const FilterOptions& opt = {}) {
  if (opt.mode == FilterMode::kOff) {
    return std::vector<FilterOutcome>(mesh.n_elements());
  }
  const auto sigma_star =
      element_min_entropies<Dim>(previous, basis.n_nodes, gas);
  const auto sigma_min =
      compute_sigma_min<Dim>(mesh, sigma_star, boundary_sigma);
  return filter_field<Dim>(field, sigma_min, basis, gas, opt);
}

}  // namespace entrofilt

#endif  // ENTROFILT_ENTROPY_FILTER_HPP_

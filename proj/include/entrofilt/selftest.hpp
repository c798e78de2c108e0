#ifndef ENTROFILT_SELFTEST_HPP_
#define ENTROFILT_SELFTEST_HPP_

// Fast property checks runnable from the CLI without the test suite.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "entrofilt/basis.hpp"
#include "entrofilt/entropy_filter.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/exact_riemann.hpp"
#include "entrofilt/mesh.hpp"
#include "entrofilt/solver.hpp"

namespace entrofilt {

struct SelfTestResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

namespace detail {

inline SelfTestResult check_at_most(std::string name, double value, double tol) {
  return {std::move(name), std::isfinite(value) && value <= tol, value, tol};
}

template <int Dim>
double gll_weight_sum_error(int p) {
  const auto b = build_reference_basis<Dim>(p);
  double s = 0.0;
  for (double w : b.quad_weights) s += w;
  return std::abs(s - std::pow(2.0, Dim));
}

template <int Dim>
double modal_round_trip_error(int p, std::mt19937_64& rng) {
  const auto b = build_reference_basis<Dim>(p);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(b.n_nodes);
  for (int i = 0; i < b.n_nodes; ++i) v[i] = uni(rng);
  return (b.modal_inv * (b.modal_fwd * v) - v).cwiseAbs().maxCoeff();
}

// Random element around a positive mean with some nodes pushed to negative
// density, filtered against sigma_min taken from the unfiltered mean.
inline std::vector<ConservativeState<1>> violating_element(
    const ReferenceBasis<1>& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<ConservativeState<1>> s(b.n_nodes);
  for (int i = 0; i < b.n_nodes; ++i) {
    const double x = b.nodes1d[i];
    s[i] = prim_to_cons(PrimitiveState<1>{1.0 + 0.4 * uni(rng), {uni(rng)},
                                          1.0 + 0.4 * uni(rng)},
                        GasModel{});
    if (i == b.n_nodes - 1) s[i][0] = -0.5 * std::abs(x);
  }
  return s;
}

}  // namespace detail

/// Runs every check; all must pass for `selftest` to exit 0.
inline std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;
  std::mt19937_64 rng(20240611);

  double gll = 0.0, modal = 0.0;
  for (int p = 1; p <= 8; ++p) {
    gll = std::max({gll, detail::gll_weight_sum_error<1>(p),
                    detail::gll_weight_sum_error<2>(p)});
    modal = std::max({modal, detail::modal_round_trip_error<1>(p, rng),
                      detail::modal_round_trip_error<2>(p, rng)});
  }
  out.push_back(detail::check_at_most("gll weights sum to 2^dim", gll, 1e-13));
  out.push_back(detail::check_at_most("modal round trip", modal, 1e-12));

  {
    // D applied to x^p is p x^(p-1) at the nodes.
    double err = 0.0;
    for (int p = 1; p <= 8; ++p) {
      const auto b = build_reference_basis<1>(p);
      Eigen::VectorXd f(b.n_nodes), df(b.n_nodes);
      for (int i = 0; i < b.n_nodes; ++i) {
        f[i] = std::pow(b.nodes1d[i], p);
        df[i] = p * std::pow(b.nodes1d[i], p - 1);
      }
      err = std::max(err, (b.diff1d * f - df).cwiseAbs().maxCoeff());
    }
    out.push_back(detail::check_at_most("differentiation exactness", err, 1e-10));
  }

  {
    const auto star = riemann_star_state({1.0, {0.0}, 1.0}, {0.125, {0.0}, 0.1});
    out.push_back(detail::check_at_most("sod star pressure",
                                        std::abs(star.p - 0.30313), 1e-4));
  }

  {
    const GasModel gas;
    const auto b = build_reference_basis<1>(4);
    double mean_err = 0.0, feas = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      auto s = detail::violating_element(b, rng);
      const auto before = element_mean<1>(s, b);
      if (!check_state(before, -1e300, gas).ok) continue;
      const double smin = entropy(before, gas);
      filter_element<1>(s, b, smin - 1.0, gas);
      const auto after = element_mean<1>(s, b);
      for (int v = 0; v < 3; ++v) {
        mean_err = std::max(mean_err, std::abs(after[v] - before[v]));
      }
      if (!constraints_satisfied<1>(s, smin - 1.0, gas).ok) feas += 1.0;
    }
    out.push_back(detail::check_at_most("filter conserves element mean",
                                        mean_err, 1e-12));
    out.push_back(detail::check_at_most("filtered elements feasible", feas, 0.0));
  }

  {
    // Free stream on a periodic 2D mesh stays uniform.
    const PrimitiveState<2> w{1.2, {0.3, -0.2}, 0.9};
    BoundaryMap<2> none;
    FrSolver<2> solver(build_mesh<2>({{0.0, 0.0}, {1.0, 1.0}}, {4, 4},
                                     {true, true}),
                       3, GasModel{}, none);
    auto field = solver.initialize([&](const Point<2>&, double) { return w; });
    const auto u0 = prim_to_cons(w, GasModel{});
    solver.advance_to_time(field, 0.1);
    double err = 0.0;
    for (const auto& u : field.u) {
      for (int v = 0; v < 4; ++v) err = std::max(err, std::abs(u[v] - u0[v]));
    }
    out.push_back(detail::check_at_most("free stream preservation", err, 1e-12));
  }
  return out;
}

}  // namespace entrofilt

#endif  // ENTROFILT_SELFTEST_HPP_

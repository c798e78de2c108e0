#ifndef ENTROFILT_NORMS_HPP_
#define ENTROFILT_NORMS_HPP_

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "entrofilt/basis.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/mesh.hpp"

namespace entrofilt {

struct PointwiseNorms {
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Point-mean L1 and root-mean-square density errors over all M solution
/// points: (1/M) sum |e| and sqrt((1/M) sum e^2).
inline PointwiseNorms error_norms_pointwise(std::span<const double> value,
                                            std::span<const double> exact) {
  if (value.size() != exact.size() || value.empty()) {
    throw ConfigError("error_norms_pointwise: need one oracle value per point");
  }
  double s1 = 0.0, s2 = 0.0;
  for (size_t i = 0; i < value.size(); ++i) {
    const double e = value[i] - exact[i];
    s1 += std::abs(e);
    s2 += e * e;
  }
  const double m = static_cast<double>(value.size());
  return {s1 / m, std::sqrt(s2 / m)};
}

/// sqrt(|Omega|^-1 integral (rho - rho_exact)^2) with (2p)^Dim Gauss-Legendre
/// points per element. `nodal` holds rho at the solution points,
/// element-major; `exact(x)` evaluates the oracle.
template <int Dim, typename Oracle>
double error_norm_l2_integral(std::span<const double> nodal,
                              const MeshTopology<Dim>& mesh,
                              const ReferenceBasis<Dim>& basis,
                              const Oracle& exact) {
  if (basis.order < 1) {
    throw ConfigError("error_norm_l2_integral: order must be >= 1");
  }
  const int nq1 = 2 * basis.order;
  const auto gl = build_gauss_legendre(nq1);
  // interp(q, a): l_a at Gauss point q (1D).
  std::vector<std::vector<double>> interp(nq1);
  for (int q = 0; q < nq1; ++q) {
    interp[q] = lagrange_values(basis.nodes1d, gl.nodes[q]);
  }
  const int n1 = basis.n1d;
  const int nq = Dim == 1 ? nq1 : nq1 * nq1;
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double* rho = nodal.data() + static_cast<size_t>(e) * basis.n_nodes;
    double acc = 0.0;
    for (int q = 0; q < nq; ++q) {
      const int qx = q % nq1, qy = q / nq1;
      double value = 0.0, w = gl.weights[qx];
      std::array<double, Dim> xi{};
      xi[0] = gl.nodes[qx];
      if constexpr (Dim == 1) {
        for (int a = 0; a < n1; ++a) value += interp[qx][a] * rho[a];
      } else {
        w *= gl.weights[qy];
        xi[1] = gl.nodes[qy];
        for (int b = 0; b < n1; ++b) {
          double row = 0.0;
          for (int a = 0; a < n1; ++a) row += interp[qx][a] * rho[a + n1 * b];
          value += interp[qy][b] * row;
        }
      }
      const double err = value - exact(mesh.map_to_physical(e, xi));
      acc += w * err * err;
    }
    total += mesh.jacobian() * acc;
  }
  return std::sqrt(total / mesh.box().volume());
}

/// Convergence rate: minus the least-squares slope of log(error) against
/// log(N).
inline double fit_rate(std::span<const double> n, std::span<const double> err) {
  if (n.size() != err.size() || n.size() < 2) {
    throw ConfigError("fit_rate: need at least two (N, error) pairs");
  }
  const double m = static_cast<double>(n.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < n.size(); ++i) {
    sx += std::log(n[i]);
    sy += std::log(err[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return -sxy / sxx;
}

}  // namespace entrofilt

#endif  // ENTROFILT_NORMS_HPP_

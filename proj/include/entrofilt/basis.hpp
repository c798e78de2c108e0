#ifndef ENTROFILT_BASIS_HPP_
#define ENTROFILT_BASIS_HPP_

// Reference-element operators for tensor-product nodal flux reconstruction
// on [-1,1]^Dim: Gauss-Lobatto-Legendre nodes, Lagrange differentiation,
// orthonormal Legendre modal transforms and DG-recovering correction
// function gradients.
//
// Node ordering in 2D is lexicographic with x fastest: i = ix + (p+1)*iy.
// Faces are numbered 0: -x, 1: +x, 2: -y, 3: +y.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "entrofilt/errors.hpp"

namespace entrofilt {

/// Legendre polynomial P_n(x) and its derivative by three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0, p = x;
  double d_prev = 0.0, d = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2 * k + 1) * x * p - k * p_prev) / (k + 1);
    const double d_next = d_prev + (2 * k + 1) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

inline double legendre(int n, double x) {
  return legendre_with_derivative(n, x).first;
}

/// Legendre polynomial normalized to unit L2 norm on [-1,1].
inline double orthonormal_legendre(int n, double x) {
  return std::sqrt(n + 0.5) * legendre(n, x);
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Lobatto-Legendre rule with p+1 points: the endpoints and the roots
/// of P_p'. Newton iteration from Chebyshev-Gauss-Lobatto points.
inline QuadratureRule build_gll(int p) {
  if (p < 1) {
    throw ConfigError("build_gll: order must be >= 1, got " +
                      std::to_string(p));
  }
  const int n = p + 1;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = -std::cos(std::numbers::pi * i / p);
  }
  // x <- x - (x P_p - P_{p-1}) / ((p+1) P_p) keeps the endpoints fixed and
  // drives the interior points to the roots of (1-x^2) P_p'.
  for (int i = 1; i < n - 1; ++i) {
    for (int it = 0; it < 100; ++it) {
      const double pp = legendre(p, x[i]);
      const double pm = legendre(p - 1, x[i]);
      const double dx = (x[i] * pp - pm) / (n * pp);
      x[i] -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
  }
  x.front() = -1.0;
  x.back() = 1.0;
  for (int i = 0; i < n / 2; ++i) {
    const double s = 0.5 * (x[n - 1 - i] - x[i]);
    x[i] = -s;
    x[n - 1 - i] = s;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;

  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double pp = legendre(p, x[i]);
    w[i] = 2.0 / (p * (p + 1) * pp * pp);
  }
  return {std::move(x), std::move(w)};
}

/// Gauss-Legendre rule with n points (exact for degree 2n-1).
inline QuadratureRule build_gauss_legendre(int n) {
  if (n < 1) {
    throw ConfigError("build_gauss_legendre: need at least one point");
  }
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double xi = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [pn, dn] = legendre_with_derivative(n, xi);
      const double dx = pn / dn;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [pn, dn] = legendre_with_derivative(n, xi);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dn * dn);
  }
  return {std::move(x), std::move(w)};
}

/// Values of the Lagrange polynomials through `nodes` at `x`.
inline std::vector<double> lagrange_values(const std::vector<double>& nodes,
                                           double x) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> out(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) out[j] *= (x - nodes[k]) / (nodes[j] - nodes[k]);
    }
  }
  return out;
}

/// D(i,j) = l_j'(x_i) from barycentric weights.
inline Eigen::MatrixXd lagrange_diff_matrix(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> bw(n, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k != j) bw[j] *= nodes[j] - nodes[k];
    }
    bw[j] = 1.0 / bw[j];
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = (bw[j] / bw[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;
  }
  return d;
}

/// DG correction functions of degree p+1: g_L is the right Radau polynomial
/// (1 at -1, 0 at +1), g_R(x) = g_L(-x).
inline double correction_left(int p, double x) {
  const int k = p + 1;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * sign * (legendre(k, x) - legendre(k - 1, x));
}

inline double correction_right(int p, double x) {
  const int k = p + 1;
  return 0.5 * (legendre(k, x) + legendre(k - 1, x));
}

inline double correction_left_derivative(int p, double x) {
  const int k = p + 1;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return 0.5 * sign *
         (legendre_with_derivative(k, x).second -
          legendre_with_derivative(k - 1, x).second);
}

inline double correction_right_derivative(int p, double x) {
  const int k = p + 1;
  return 0.5 * (legendre_with_derivative(k, x).second +
                legendre_with_derivative(k - 1, x).second);
}

/// 1D correction gradients at the GLL nodes, signed so that n.g_j = 1 on the
/// face the correction belongs to: left = -g_L', right = +g_R'.
struct CorrectionGradients {
  std::vector<double> left;
  std::vector<double> right;
};

inline CorrectionGradients build_correction_gradients(int p) {
  const auto gll = build_gll(p);
  CorrectionGradients out;
  for (double x : gll.nodes) {
    out.left.push_back(-correction_left_derivative(p, x));
    out.right.push_back(correction_right_derivative(p, x));
  }
  return out;
}

struct ModalTransform {
  Eigen::MatrixXd fwd;  // nodal -> modal
  Eigen::MatrixXd inv;  // modal -> nodal
  std::vector<int> mode_orders;
};

/// Orthonormal (tensor-product) Legendre modal transform at the GLL nodes.
/// mode_orders holds the maximal per-direction degree of each mode.
inline ModalTransform build_modal_transform(int p, int dim) {
  if (dim != 1 && dim != 2) {
    throw ConfigError("build_modal_transform: dim must be 1 or 2");
  }
  const auto gll = build_gll(p);
  const int n1 = p + 1;
  const int n = dim == 1 ? n1 : n1 * n1;
  Eigen::MatrixXd vander(n, n);
  std::vector<int> orders(n);
  for (int i = 0; i < n; ++i) {
    const int ix = i % n1, iy = i / n1;
    for (int m = 0; m < n; ++m) {
      const int mx = m % n1, my = m / n1;
      double v = orthonormal_legendre(mx, gll.nodes[ix]);
      if (dim == 2) v *= orthonormal_legendre(my, gll.nodes[iy]);
      vander(i, m) = v;
      orders[m] = dim == 2 ? std::max(mx, my) : mx;
    }
  }
  ModalTransform out;
  out.inv = vander;
  out.fwd = vander.partialPivLu().inverse();
  out.mode_orders = std::move(orders);
  return out;
}

/// Every per-order operator of the reference element [-1,1]^Dim.
template <int Dim>
struct ReferenceBasis {
  static_assert(Dim == 1 || Dim == 2, "only 1D and 2D elements");
  static constexpr int kFaces = 2 * Dim;

  int order = 0;
  int n1d = 0;      // points per direction
  int n_nodes = 0;  // (p+1)^Dim
  int n_face_nodes = 0;

  std::vector<double> nodes1d;
  std::vector<double> weights1d;
  std::vector<std::array<double, Dim>> nodes;
  std::vector<double> quad_weights;

  Eigen::MatrixXd diff1d;
  std::array<Eigen::MatrixXd, Dim> diff_matrix;

  Eigen::MatrixXd modal_fwd;
  Eigen::MatrixXd modal_inv;
  std::vector<int> mode_orders;

  CorrectionGradients corr1d;
  // corr_grad[f](i, j): divergence of the face-f correction function of face
  // node j, evaluated at solution node i.
  std::array<Eigen::MatrixXd, kFaces> corr_grad;
  std::array<std::vector<int>, kFaces> face_index_sets;
  // Reference quadrature weights of the face nodes (1 in 1D).
  std::vector<double> face_weights;

  static constexpr int face_direction(int face) { return face / 2; }
  static constexpr double face_sign(int face) {
    return face % 2 == 0 ? -1.0 : 1.0;
  }
};

template <int Dim>
ReferenceBasis<Dim> build_reference_basis(int p) {
  const auto gll = build_gll(p);
  ReferenceBasis<Dim> b;
  b.order = p;
  b.n1d = p + 1;
  b.n_nodes = Dim == 1 ? b.n1d : b.n1d * b.n1d;
  b.n_face_nodes = Dim == 1 ? 1 : b.n1d;
  b.nodes1d = gll.nodes;
  b.weights1d = gll.weights;
  b.diff1d = lagrange_diff_matrix(gll.nodes);

  const int n1 = b.n1d;
  b.nodes.resize(b.n_nodes);
  b.quad_weights.resize(b.n_nodes);
  for (int i = 0; i < b.n_nodes; ++i) {
    const int ix = i % n1, iy = i / n1;
    b.nodes[i][0] = gll.nodes[ix];
    b.quad_weights[i] = gll.weights[ix];
    if constexpr (Dim == 2) {
      b.nodes[i][1] = gll.nodes[iy];
      b.quad_weights[i] *= gll.weights[iy];
    }
  }

  if constexpr (Dim == 1) {
    b.diff_matrix[0] = b.diff1d;
  } else {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n1, n1);
    b.diff_matrix[0] = Eigen::MatrixXd::Zero(b.n_nodes, b.n_nodes);
    b.diff_matrix[1] = Eigen::MatrixXd::Zero(b.n_nodes, b.n_nodes);
    for (int i = 0; i < b.n_nodes; ++i) {
      for (int j = 0; j < b.n_nodes; ++j) {
        const int ix = i % n1, iy = i / n1, jx = j % n1, jy = j / n1;
        b.diff_matrix[0](i, j) = b.diff1d(ix, jx) * id(iy, jy);
        b.diff_matrix[1](i, j) = b.diff1d(iy, jy) * id(ix, jx);
      }
    }
  }

  auto modal = build_modal_transform(p, Dim);
  b.modal_fwd = std::move(modal.fwd);
  b.modal_inv = std::move(modal.inv);
  b.mode_orders = std::move(modal.mode_orders);

  b.corr1d = build_correction_gradients(p);
  for (int f = 0; f < ReferenceBasis<Dim>::kFaces; ++f) {
    const int dir = ReferenceBasis<Dim>::face_direction(f);
    const bool high = f % 2 == 1;
    const auto& g = high ? b.corr1d.right : b.corr1d.left;
    auto& idx = b.face_index_sets[f];
    auto& cg = b.corr_grad[f];
    cg = Eigen::MatrixXd::Zero(b.n_nodes, b.n_face_nodes);
    for (int j = 0; j < b.n_face_nodes; ++j) {
      // Face node j sits on the line {transverse index == j}.
      const int line_end = high ? n1 - 1 : 0;
      const int node = dir == 0 ? line_end + n1 * j : j + n1 * line_end;
      idx.push_back(node);
      for (int k = 0; k < n1; ++k) {
        const int i = dir == 0 ? k + n1 * j : j + n1 * k;
        cg(i, j) = g[k];
      }
    }
  }
  b.face_weights = Dim == 1 ? std::vector<double>{1.0} : gll.weights;
  return b;
}

}  // namespace entrofilt

#endif  // ENTROFILT_BASIS_HPP_

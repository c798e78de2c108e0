#ifndef ENTROFILT_MESH_HPP_
#define ENTROFILT_MESH_HPP_

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "entrofilt/errors.hpp"

namespace entrofilt {

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
struct Box {
  Point<Dim> lo;
  Point<Dim> hi;

  double volume() const {
    double v = 1.0;
    for (int d = 0; d < Dim; ++d) v *= hi[d] - lo[d];
    return v;
  }
};

/// Side names used as boundary tags: face f of the domain box.
inline const char* side_tag(int face) {
  static constexpr const char* kNames[] = {"left", "right", "bottom", "top"};
  return kNames[face];
}

/// Uniform Cartesian partition of a box. Element e = ix + nx*iy; faces are
/// numbered like the reference element (0: -x, 1: +x, 2: -y, 3: +y).
template <int Dim>
class MeshTopology {
 public:
  static constexpr int kFaces = 2 * Dim;
  static constexpr int kBoundary = -1;

  MeshTopology(const Box<Dim>& box, const std::array<int, Dim>& counts,
               const std::array<bool, Dim>& periodic)
      : box_(box), counts_(counts), periodic_(periodic) {
    n_elements_ = 1;
    for (int d = 0; d < Dim; ++d) {
      if (counts[d] < 1) {
        throw ConfigError("build_mesh: element counts must be positive");
      }
      if (!(box.hi[d] > box.lo[d])) {
        throw ConfigError("build_mesh: degenerate domain box");
      }
      h_[d] = (box.hi[d] - box.lo[d]) / counts[d];
      n_elements_ *= counts[d];
    }
    jacobian_ = 1.0;
    for (int d = 0; d < Dim; ++d) jacobian_ *= 0.5 * h_[d];

    neighbors_.resize(n_elements_);
    for (int e = 0; e < n_elements_; ++e) {
      const auto ijk = index(e);
      for (int f = 0; f < kFaces; ++f) {
        const int d = f / 2;
        const int step = f % 2 == 0 ? -1 : 1;
        auto nb = ijk;
        nb[d] += step;
        if (nb[d] < 0 || nb[d] >= counts[d]) {
          if (!periodic[d]) {
            neighbors_[e][f] = kBoundary;
            continue;
          }
          nb[d] = (nb[d] + counts[d]) % counts[d];
        }
        neighbors_[e][f] = element(nb);
      }
    }
  }

  int n_elements() const { return n_elements_; }
  const std::array<int, Dim>& counts() const { return counts_; }
  const Box<Dim>& box() const { return box_; }
  const std::array<double, Dim>& element_size() const { return h_; }
  bool periodic(int d) const { return periodic_[d]; }
  /// |element| / |reference element|.
  double jacobian() const { return jacobian_; }
  double element_volume() const { return jacobian_ * (1 << Dim); }
  double min_element_size() const {
    double h = h_[0];
    for (int d = 1; d < Dim; ++d) h = std::min(h, h_[d]);
    return h;
  }

  std::array<int, Dim> index(int e) const {
    std::array<int, Dim> ijk{};
    ijk[0] = e % counts_[0];
    if constexpr (Dim == 2) ijk[1] = e / counts_[0];
    return ijk;
  }

  int element(const std::array<int, Dim>& ijk) const {
    if constexpr (Dim == 1) {
      return ijk[0];
    } else {
      return ijk[0] + counts_[0] * ijk[1];
    }
  }

  /// Face-adjacent element, or kBoundary.
  int neighbor(int e, int face) const { return neighbors_[e][face]; }
  bool is_boundary(int e, int face) const {
    return neighbors_[e][face] == kBoundary;
  }
  std::string boundary_tag(int e, int face) const {
    if (!is_boundary(e, face)) return {};
    return side_tag(face);
  }

  /// A(k): the element itself followed by its face neighbors (each listed
  /// once even when periodic wrapping makes a neighbor repeat).
  std::vector<int> adjacency_with_self(int e) const {
    std::vector<int> out{e};
    for (int f = 0; f < kFaces; ++f) {
      const int nb = neighbors_[e][f];
      if (nb == kBoundary) continue;
      bool seen = false;
      for (int x : out) seen = seen || x == nb;
      if (!seen) out.push_back(nb);
    }
    return out;
  }

  /// Lower corner of element e.
  Point<Dim> element_origin(int e) const {
    const auto ijk = index(e);
    Point<Dim> x{};
    for (int d = 0; d < Dim; ++d) x[d] = box_.lo[d] + ijk[d] * h_[d];
    return x;
  }

  /// Physical coordinates of reference point xi in element e.
  Point<Dim> map_to_physical(int e, const std::array<double, Dim>& xi) const {
    auto x = element_origin(e);
    for (int d = 0; d < Dim; ++d) x[d] += 0.5 * (xi[d] + 1.0) * h_[d];
    return x;
  }

 private:
  Box<Dim> box_;
  std::array<int, Dim> counts_;
  std::array<bool, Dim> periodic_;
  std::array<double, Dim> h_{};
  double jacobian_ = 1.0;
  int n_elements_ = 0;
  std::vector<std::array<int, kFaces>> neighbors_;
};

template <int Dim>
MeshTopology<Dim> build_mesh(const Box<Dim>& box,
                             const std::array<int, Dim>& counts,
                             const std::array<bool, Dim>& periodic) {
  return MeshTopology<Dim>(box, counts, periodic);
}

}  // namespace entrofilt

#endif  // ENTROFILT_MESH_HPP_

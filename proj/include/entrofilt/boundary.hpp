#ifndef ENTROFILT_BOUNDARY_HPP_
#define ENTROFILT_BOUNDARY_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/mesh.hpp"

namespace entrofilt {

enum class BcKind {
  kPeriodic,
  kFixedState,    // supersonic inflow / prescribed state
  kTransmissive,  // free: ghost copies the interior
  kSlipWall,      // reflect the normal velocity
  kExact,         // time-dependent prescribed (exact) solution
};

inline const char* to_string(BcKind k) {
  switch (k) {
    case BcKind::kPeriodic: return "periodic";
    case BcKind::kFixedState: return "fixed-state";
    case BcKind::kTransmissive: return "transmissive";
    case BcKind::kSlipWall: return "slip-wall";
    case BcKind::kExact: return "exact";
  }
  return "?";
}

template <int Dim>
using StateFunction =
    std::function<PrimitiveState<Dim>(const Point<Dim>&, double)>;

template <int Dim>
struct BoundaryCondition {
  BcKind kind = BcKind::kTransmissive;
  StateFunction<Dim> state;  // kFixedState and kExact only

  static BoundaryCondition periodic() { return {BcKind::kPeriodic, {}}; }
  static BoundaryCondition transmissive() {
    return {BcKind::kTransmissive, {}};
  }
  static BoundaryCondition slip_wall() { return {BcKind::kSlipWall, {}}; }
  static BoundaryCondition fixed(const PrimitiveState<Dim>& q) {
    return {BcKind::kFixedState,
            [q](const Point<Dim>&, double) { return q; }};
  }
  static BoundaryCondition exact(StateFunction<Dim> f) {
    return {BcKind::kExact, std::move(f)};
  }
};

/// Part of a tagged boundary: applies where `applies(x)` holds (always when
/// empty). The first matching segment of a tag wins.
template <int Dim>
struct BoundarySegment {
  std::function<bool(const Point<Dim>&)> applies;
  BoundaryCondition<Dim> bc;
};

template <int Dim>
using BoundaryMap = std::map<std::string, std::vector<BoundarySegment<Dim>>>;

template <int Dim>
const BoundaryCondition<Dim>& resolve_boundary(const BoundaryMap<Dim>& map,
                                               const std::string& tag,
                                               const Point<Dim>& x) {
  const auto it = map.find(tag);
  if (it == map.end()) {
    throw ConfigError("no boundary condition for tag '" + tag + "'");
  }
  for (const auto& seg : it->second) {
    if (!seg.applies || seg.applies(x)) return seg.bc;
  }
  throw ConfigError("boundary tag '" + tag +
                    "' has no segment covering a face node");
}

/// Exterior (ghost) state fed to the Riemann solver. `n` is the outward unit
/// normal, `x` the face node, `t` the stage time.
template <int Dim>
ConservativeState<Dim> apply_boundary_conditions(
    const ConservativeState<Dim>& interior, const BoundaryCondition<Dim>& bc,
    const Point<Dim>& x, const Point<Dim>& n, double t, const GasModel& gas) {
  switch (bc.kind) {
    case BcKind::kTransmissive:
      return interior;
    case BcKind::kSlipWall: {
      auto g = interior;
      double mn = 0.0;
      for (int d = 0; d < Dim; ++d) mn += interior.mom(d) * n[d];
      for (int d = 0; d < Dim; ++d) g[1 + d] -= 2.0 * mn * n[d];
      return g;
    }
    case BcKind::kFixedState:
    case BcKind::kExact:
      return prim_to_cons(bc.state(x, t), gas);
    case BcKind::kPeriodic:
      break;
  }
  throw ConfigError(
      "periodic boundary condition reached a non-periodic mesh face");
}

}  // namespace entrofilt

#endif  // ENTROFILT_BOUNDARY_HPP_

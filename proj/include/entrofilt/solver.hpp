#ifndef ENTROFILT_SOLVER_HPP_
#define ENTROFILT_SOLVER_HPP_

// Flux reconstruction (DG correction functions, GLL solution points) for the
// Euler equations on uniform Cartesian meshes, advanced with SSP-RK3 and the
// adaptive entropy filter applied after every stage.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "entrofilt/basis.hpp"
#include "entrofilt/boundary.hpp"
#include "entrofilt/entropy_filter.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/mesh.hpp"
#include "entrofilt/parallel.hpp"

namespace entrofilt {

/// Nodal conserved variables, element-major then node-major.
template <int Dim>
struct SolutionField {
  std::vector<ConservativeState<Dim>> u;
  int nodes_per_element = 0;
  double time = 0.0;

  int n_elements() const {
    return static_cast<int>(u.size()) / nodes_per_element;
  }
  std::span<ConservativeState<Dim>> element(int e) {
    return {u.data() + static_cast<size_t>(e) * nodes_per_element,
            static_cast<size_t>(nodes_per_element)};
  }
  std::span<const ConservativeState<Dim>> element(int e) const {
    return {u.data() + static_cast<size_t>(e) * nodes_per_element,
            static_cast<size_t>(nodes_per_element)};
  }
};

struct SolverOptions {
  double cfl = 0.5;
  RiemannSolver riemann = RiemannSolver::kHllc;
  FilterOptions filter;
  // Re-check every node against the filter constraints after each stage and
  // record the smallest margins; throws on a violation.
  bool verify_feasibility = false;
  int workers = worker_count();
};

struct StepStatistics {
  long step = 0;
  double time = 0.0;  // after the step
  double dt = 0.0;
  long activations = 0;
  long element_stages = 0;
  double max_zeta = 0.0;
  std::array<long, 4> binding_counts{};  // indexed by ConstraintClass
  double min_rho = std::numeric_limits<double>::infinity();  // after the step

  double activation_fraction() const {
    return element_stages ? static_cast<double>(activations) / element_stages
                          : 0.0;
  }
};

struct RunStatistics {
  std::vector<StepStatistics> steps;
  long activations = 0;
  long element_stages = 0;
  double max_zeta = 0.0;
  // Smallest values seen by the feasibility verification.
  double min_rho = std::numeric_limits<double>::infinity();
  double min_p = std::numeric_limits<double>::infinity();
  double min_entropy_margin = std::numeric_limits<double>::infinity();
  long verified_stages = 0;
};

/// Stage weights of the boundary fluxes in the SSP-RK3 update: the step
/// changes u by dt (1/6 L(u0) + 1/6 L(u1) + 2/3 L(u2)).
inline constexpr std::array<double, 3> kSspRk3Weights = {1.0 / 6.0, 1.0 / 6.0,
                                                         2.0 / 3.0};

template <typename T>
struct SspRk3Workspace {
  std::vector<T> u0, input, rhs;
};

/// Shu-Osher SSP-RK3 on a vector of states:
///   u1 = u0 + dt L(u0)
///   u2 = 3/4 u0 + 1/4 (u1 + dt L(u1))
///   u3 = 1/3 u0 + 2/3 (u2 + dt L(u2))
/// `rhs(u, t, out, stage)` evaluates L; `after_stage(u, stage, t)` runs
/// after each update with ws.input holding that stage's input.
template <typename T, typename Rhs, typename AfterStage>
void ssp_rk3(std::vector<T>& u, double t, double dt, SspRk3Workspace<T>& ws,
             Rhs&& rhs, AfterStage&& after_stage) {
  static constexpr double kOld[3] = {0.0, 0.75, 1.0 / 3.0};
  static constexpr double kNew[3] = {1.0, 0.25, 2.0 / 3.0};
  const double eval_time[3] = {t, t + dt, t + 0.5 * dt};
  const double stage_time[3] = {t + dt, t + 0.5 * dt, t + dt};
  ws.u0 = u;
  for (int stage = 0; stage < 3; ++stage) {
    rhs(static_cast<const std::vector<T>&>(u), eval_time[stage], ws.rhs, stage);
    ws.input = u;
    for (size_t k = 0; k < u.size(); ++k) {
      u[k] = kOld[stage] * ws.u0[k] + kNew[stage] * (ws.input[k] + dt * ws.rhs[k]);
    }
    after_stage(u, stage, stage_time[stage]);
  }
}

template <int Dim>
class FrSolver {
 public:
  using State = ConservativeState<Dim>;
  using StepCallback =
      std::function<void(const SolutionField<Dim>&, const StepStatistics&)>;
  static constexpr int kFaces = 2 * Dim;

  FrSolver(const FrSolver&) = delete;
  FrSolver& operator=(const FrSolver&) = delete;
  FrSolver(FrSolver&&) = default;
  FrSolver& operator=(FrSolver&&) = default;

  FrSolver(MeshTopology<Dim> mesh, int order, GasModel gas,
           BoundaryMap<Dim> boundaries, SolverOptions options = {})
      : mesh_(std::move(mesh)),
        basis_(build_reference_basis<Dim>(order)),
        gas_(gas),
        boundaries_(std::move(boundaries)),
        opt_(options) {
    gas_.validate();
    if (!(opt_.cfl > 0.0)) throw ConfigError("cfl must be positive");
    const int ne = mesh_.n_elements();
    const int n = basis_.n_nodes;
    coords_.resize(static_cast<size_t>(ne) * n);
    for (int e = 0; e < ne; ++e) {
      for (int i = 0; i < n; ++i) {
        coords_[static_cast<size_t>(e) * n + i] =
            mesh_.map_to_physical(e, basis_.nodes[i]);
      }
    }
    for (int e = 0; e < ne; ++e) {
      for (int f = 0; f < kFaces; ++f) {
        if (!mesh_.is_boundary(e, f)) continue;
        BoundaryFace bf{e, f, {}};
        const std::string tag = mesh_.boundary_tag(e, f);
        for (int j = 0; j < basis_.n_face_nodes; ++j) {
          const int node = basis_.face_index_sets[f][j];
          bf.conditions.push_back(
              &resolve_boundary<Dim>(boundaries_, tag, coord(e, node)));
        }
        boundary_faces_.push_back(std::move(bf));
      }
    }
    face_flux_.resize(static_cast<size_t>(ne) * kFaces * basis_.n_face_nodes);
    boundary_sigma_.assign(ne, {});
    boundary_flux_.assign(ne, State{});
  }

  const MeshTopology<Dim>& mesh() const { return mesh_; }
  const ReferenceBasis<Dim>& basis() const { return basis_; }
  const GasModel& gas() const { return gas_; }
  const SolverOptions& options() const { return opt_; }
  SolverOptions& options() { return opt_; }
  int nodes_per_element() const { return basis_.n_nodes; }

  const Point<Dim>& coord(int e, int node) const {
    return coords_[static_cast<size_t>(e) * basis_.n_nodes + node];
  }
  std::span<const Point<Dim>> coordinates() const { return coords_; }

  /// Pointwise sampling of an initial condition at the solution points.
  SolutionField<Dim> initialize(const StateFunction<Dim>& ic,
                                double t0 = 0.0) const {
    SolutionField<Dim> field;
    field.nodes_per_element = basis_.n_nodes;
    field.time = t0;
    field.u.resize(coords_.size());
    for (size_t k = 0; k < coords_.size(); ++k) {
      field.u[k] = prim_to_cons(ic(coords_[k], t0), gas_);
    }
    return field;
  }

  /// du/dt at every solution point. Also records, for the state passed in,
  /// the boundary-state entropies (consumed by the next filter pass) and the
  /// net outward boundary flux.
  void compute_rhs(const SolutionField<Dim>& field, double t,
                   std::vector<State>& rhs) {
    compute_rhs(std::span<const State>(field.u), t, rhs);
  }

  void compute_rhs(std::span<const State> u, double t,
                   std::vector<State>& rhs) {
    const int ne = mesh_.n_elements();
    rhs.resize(u.size());
    compute_face_fluxes(u, t);
    parallel_for(
        ne, [&](int e) { element_rhs(u, e, rhs); }, opt_.workers);
  }

  /// Net outward flux through the domain boundary recorded by the last
  /// compute_rhs call.
  State boundary_flux_total() const {
    State total;
    for (const auto& b : boundary_flux_) total += b;
    return total;
  }

  /// Common normal flux (outward for element e) at node j of face f, as
  /// computed by the last compute_rhs call.
  const State& face_flux(int e, int f, int j) const {
    return face_flux_[face_slot(e, f, j)];
  }

  /// Boundary-state entropies recorded by the last compute_rhs call.
  std::span<const std::array<double, kFaces>> boundary_sigma() const {
    return boundary_sigma_;
  }

  /// cfl * h_min / ((2p+1) lambda), lambda the largest wavespeed over all
  /// solution nodes and over prescribed boundary states (an inflow can be far
  /// faster than anything inside the domain).
  double stable_dt(const SolutionField<Dim>& field) const {
    const int n = basis_.n_nodes;
    double lam = 0.0;
    for (int e = 0; e < field.n_elements(); ++e) {
      for (int i = 0; i < n; ++i) {
        lam = std::max(lam, max_wavespeed(field.u[static_cast<size_t>(e) * n + i],
                                          gas_));
      }
    }
    for (const auto& bf : boundary_faces_) {
      for (int j = 0; j < basis_.n_face_nodes; ++j) {
        const auto& bc = *bf.conditions[j];
        if (bc.kind != BcKind::kFixedState && bc.kind != BcKind::kExact) continue;
        const int node = basis_.face_index_sets[bf.face][j];
        lam = std::max(lam, max_wavespeed(
                                prim_to_cons(bc.state(coord(bf.element, node),
                                                      field.time),
                                             gas_),
                                gas_));
      }
    }
    const double dt =
        opt_.cfl * mesh_.min_element_size() / ((2 * basis_.order + 1) * lam);
    if (!(dt > 0.0) || !std::isfinite(dt)) {
      throw NumericalError("stable_dt: non-positive time step");
    }
    return dt;
  }

  /// Three-stage SSP Runge-Kutta step; the filter runs after every stage
  /// with sigma_min taken from the stage's input solution.
  StepStatistics ssp_rk3_step(SolutionField<Dim>& field, double dt) {
    StepStatistics stats;
    stats.dt = dt;
    const double t = field.time;
    State transfer;
    ssp_rk3(
        field.u, t, dt, work_,
        [&](const std::vector<State>& u, double ts, std::vector<State>& out,
            int stage) {
          compute_rhs(std::span<const State>(u), ts, out);
          transfer += kSspRk3Weights[stage] * boundary_flux_total();
        },
        [&](std::vector<State>& u, int stage, double ts) {
          run_filter(u, work_.input, stage + 1, ts, stats);
        });
    field.time = t + dt;
    stats.time = field.time;
    for (const auto& u : field.u) stats.min_rho = std::min(stats.min_rho, u.rho());
    last_boundary_transfer_ = (-dt) * transfer;
    return stats;
  }

  /// Change of the domain integrals due to boundary fluxes over the last
  /// step (zero for fully periodic meshes).
  const State& last_boundary_transfer() const {
    return last_boundary_transfer_;
  }

  /// Steps until t_end, clipping the final step to land on it exactly.
  RunStatistics advance_to_time(SolutionField<Dim>& field, double t_end,
                                const StepCallback& on_step = {}) {
    if (t_end < field.time) {
      throw ConfigError("advance_to_time: t_end precedes the current time");
    }
    stats_ = RunStatistics{};
    long step = 0;
    while (field.time < t_end) {
      double dt = stable_dt(field);
      bool last = false;
      if (field.time + dt >= t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
        dt = t_end - field.time;
        last = true;
      }
      auto s = ssp_rk3_step(field, dt);
      if (last) field.time = t_end;
      s.step = ++step;
      s.time = field.time;
      stats_.activations += s.activations;
      stats_.element_stages += s.element_stages;
      stats_.max_zeta = std::max(stats_.max_zeta, s.max_zeta);
      stats_.steps.push_back(s);
      if (on_step) on_step(field, s);
    }
    return stats_;
  }

  /// Feasibility margins accumulated since the last advance_to_time started.
  const RunStatistics& statistics() const { return stats_; }

  /// Domain integral of every conserved variable.
  State integrate(const SolutionField<Dim>& field) const {
    State total;
    const int n = basis_.n_nodes;
    for (int e = 0; e < field.n_elements(); ++e) {
      State el;
      for (int i = 0; i < n; ++i) {
        el += basis_.quad_weights[i] * field.u[static_cast<size_t>(e) * n + i];
      }
      total += el;
    }
    return mesh_.jacobian() * total;
  }

 private:
  struct BoundaryFace {
    int element;
    int face;
    std::vector<const BoundaryCondition<Dim>*> conditions;
  };

  size_t face_slot(int e, int f, int j) const {
    return (static_cast<size_t>(e) * kFaces + f) * basis_.n_face_nodes + j;
  }

  static Point<Dim> axis_normal(int face) {
    Point<Dim> nrm{};
    nrm[face / 2] = ReferenceBasis<Dim>::face_sign(face);
    return nrm;
  }

  void compute_face_fluxes(std::span<const State> u, double t) {
    const int n = basis_.n_nodes;
    const int nf = basis_.n_face_nodes;
    const int ne = mesh_.n_elements();
    // Interior faces: each element owns its +x / +y faces.
    parallel_for(
        ne,
        [&](int e) {
          for (int f = 1; f < kFaces; f += 2) {
            const int nb = mesh_.neighbor(e, f);
            if (nb == MeshTopology<Dim>::kBoundary) continue;
            const auto nrm = axis_normal(f);
            for (int j = 0; j < nf; ++j) {
              const auto& ul =
                  u[static_cast<size_t>(e) * n + basis_.face_index_sets[f][j]];
              const auto& ur = u[static_cast<size_t>(nb) * n +
                                       basis_.face_index_sets[f - 1][j]];
              const auto fl = riemann_flux<Dim>(opt_.riemann, ul, ur, nrm, gas_);
              face_flux_[face_slot(e, f, j)] = fl;
              face_flux_[face_slot(nb, f - 1, j)] = (-1.0) * fl;
            }
          }
        },
        opt_.workers);

    for (auto& s : boundary_sigma_) {
      s.fill(std::numeric_limits<double>::infinity());
    }
    std::fill(boundary_flux_.begin(), boundary_flux_.end(), State{});
    const auto& h = mesh_.element_size();
    for (const auto& bf : boundary_faces_) {
      const auto nrm = axis_normal(bf.face);
      const int dir = bf.face / 2;
      const double measure = Dim == 1 ? 1.0 : 0.5 * h[1 - dir];
      double smin = std::numeric_limits<double>::infinity();
      State net;
      for (int j = 0; j < nf; ++j) {
        const int node = basis_.face_index_sets[bf.face][j];
        const auto& ui = u[static_cast<size_t>(bf.element) * n + node];
        const auto ghost = apply_boundary_conditions<Dim>(
            ui, *bf.conditions[j], coord(bf.element, node), nrm, t, gas_);
        smin = std::min(smin, floored_entropy(ghost, gas_));
        const auto fl = riemann_flux<Dim>(opt_.riemann, ui, ghost, nrm, gas_);
        face_flux_[face_slot(bf.element, bf.face, j)] = fl;
        net += (measure * basis_.face_weights[j]) * fl;
      }
      boundary_sigma_[bf.element][bf.face] = smin;
      boundary_flux_[bf.element] += net;
    }
  }

  void element_rhs(std::span<const State> u, int e,
                   std::vector<State>& rhs) const {
    const int n = basis_.n_nodes;
    const int n1 = basis_.n1d;
    const int nf = basis_.n_face_nodes;
    const auto& h = mesh_.element_size();
    const State* ue = u.data() + static_cast<size_t>(e) * n;
    State* re = rhs.data() + static_cast<size_t>(e) * n;

    thread_local std::vector<State> flux;
    flux.resize(static_cast<size_t>(Dim) * n);
    for (int i = 0; i < n; ++i) {
      const double p = pressure(ue[i], gas_);
      for (int d = 0; d < Dim; ++d) flux[d * n + i] = euler_flux(ue[i], p, d);
      re[i] = State{};
    }

    const int lines = Dim == 1 ? 1 : n1;
    for (int d = 0; d < Dim; ++d) {
      const double scale = 2.0 / h[d];
      const State* fd = flux.data() + static_cast<size_t>(d) * n;
      for (int j = 0; j < lines; ++j) {
        auto node = [&](int a) { return d == 0 ? a + n1 * j : j + n1 * a; };
        for (int a = 0; a < n1; ++a) {
          State div;
          for (int k = 0; k < n1; ++k) {
            const double dak = basis_.diff1d(a, k);
            const State& fk = fd[node(k)];
            for (int v = 0; v < State::kVars; ++v) div[v] += dak * fk[v];
          }
          State& r = re[node(a)];
          for (int v = 0; v < State::kVars; ++v) r[v] -= scale * div[v];
        }
      }
    }

    for (int f = 0; f < kFaces; ++f) {
      const int d = f / 2;
      const double sign = ReferenceBasis<Dim>::face_sign(f);
      const double scale = 2.0 / h[d];
      const auto& corr = f % 2 == 0 ? basis_.corr1d.left : basis_.corr1d.right;
      const State* fd = flux.data() + static_cast<size_t>(d) * n;
      for (int j = 0; j < nf; ++j) {
        const int q = basis_.face_index_sets[f][j];
        State jump = face_flux_[face_slot(e, f, j)];
        for (int v = 0; v < State::kVars; ++v) jump[v] -= sign * fd[q][v];
        for (int a = 0; a < n1; ++a) {
          const int i = d == 0 ? a + n1 * j : j + n1 * a;
          const double c = scale * corr[a];
          for (int v = 0; v < State::kVars; ++v) re[i][v] -= c * jump[v];
        }
      }
    }

    for (int i = 0; i < n; ++i) {
      for (int v = 0; v < State::kVars; ++v) {
        if (!std::isfinite(re[i][v])) {
          throw NumericalError("compute_rhs: non-finite residual in element " +
                               std::to_string(e) + ", node " +
                               std::to_string(i) + ", state " +
                               detail::describe(ue[i]));
        }
      }
    }
  }

  void run_filter(std::vector<State>& u, const std::vector<State>& input,
                  int stage, double stage_time, StepStatistics& stats) {
    const int ne = mesh_.n_elements();
    stats.element_stages += ne;
    if (opt_.filter.mode == FilterMode::kOff) return;
    const auto sigma_star =
        element_min_entropies<Dim>(input, basis_.n_nodes, gas_);
    const auto sigma_min = compute_sigma_min<Dim>(
        mesh_, sigma_star,
        std::span<const std::array<double, kFaces>>(boundary_sigma_));
    std::vector<FilterOutcome> outcomes;
    try {
      outcomes = filter_field<Dim>(u, sigma_min, basis_, gas_,
                                   opt_.filter);
    } catch (const MeanViolationError& err) {
      throw MeanViolationError(std::string(err.what()) + " at t=" +
                                   std::to_string(stage_time) + ", stage " +
                                   std::to_string(stage),
                               err.element());
    }
    for (const auto& o : outcomes) {
      if (!o.activated) continue;
      ++stats.activations;
      stats.max_zeta = std::max(stats.max_zeta, o.zeta);
      ++stats.binding_counts[static_cast<int>(o.binding)];
    }
    if (opt_.verify_feasibility) verify(u, sigma_min, stage_time);
  }

  void verify(std::span<const State> field,
              const std::vector<double>& sigma_min, double stage_time) {
    const int n = basis_.n_nodes;
    for (int e = 0; e < mesh_.n_elements(); ++e) {
      for (int i = 0; i < n; ++i) {
        const auto& u = field[static_cast<size_t>(e) * n + i];
        const double p = pressure(u, gas_);
        const double margin =
            entropy_from(u.rho(), p, gas_) - (sigma_min[e] - gas_.eps_sigma);
        stats_.min_rho = std::min(stats_.min_rho, u.rho());
        stats_.min_p = std::min(stats_.min_p, p);
        stats_.min_entropy_margin = std::min(stats_.min_entropy_margin, margin);
        if (!(u.rho() >= gas_.rho_min) || !(p >= gas_.p_min) ||
            !(margin >= 0.0)) {
          throw Error("feasibility invariant violated at t=" +
                      std::to_string(stage_time) + " in element " +
                      std::to_string(e) + ", node " + std::to_string(i));
        }
      }
    }
    ++stats_.verified_stages;
  }

  MeshTopology<Dim> mesh_;
  ReferenceBasis<Dim> basis_;
  GasModel gas_;
  BoundaryMap<Dim> boundaries_;
  SolverOptions opt_;

  std::vector<Point<Dim>> coords_;
  std::vector<BoundaryFace> boundary_faces_;
  std::vector<State> face_flux_;
  std::vector<std::array<double, kFaces>> boundary_sigma_;
  std::vector<State> boundary_flux_;

  SspRk3Workspace<State> work_;
  State last_boundary_transfer_;
  RunStatistics stats_;
};

}  // namespace entrofilt

#endif  // ENTROFILT_SOLVER_HPP_

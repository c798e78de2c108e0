#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "entrofilt/basis.hpp"
#include "entrofilt/cases.hpp"
#include "entrofilt/exact_riemann.hpp"

namespace entrofilt {
namespace {

const PrimitiveState<1> kSodL{1.0, {0.0}, 1.0};
const PrimitiveState<1> kSodR{0.125, {0.0}, 0.1};

void expect_prim_near(const PrimitiveState<1>& a, const PrimitiveState<1>& b,
                      double tol) {
  EXPECT_NEAR(a.rho, b.rho, tol);
  EXPECT_NEAR(a.vel[0], b.vel[0], tol);
  EXPECT_NEAR(a.p, b.p, tol);
}

TEST(ExactRiemann, TrivialProblem) {
  const PrimitiveState<1> q{0.7, {0.3}, 2.0};
  for (double s : {-3.0, -0.1, 0.0, 0.4, 5.0}) {
    expect_prim_near(exact_riemann(q, q, s), q, 1e-12);
  }
}

TEST(ExactRiemann, SodStarPressure) {
  const auto star = riemann_star_state(kSodL, kSodR);
  EXPECT_NEAR(star.p, 0.30313, 1e-4);
  EXPECT_NEAR(star.u, 0.92745, 1e-4);
  const auto at0 = exact_riemann(kSodL, kSodR, 0.0);
  EXPECT_GT(at0.rho, 0.125);
  EXPECT_LT(at0.rho, 1.0);
}

TEST(ExactRiemann, RankineHugoniotPairIsAPureShock) {
  // Mach 2 shock running right into (1, 0, 1).
  const double g = 1.4, ms = 2.0;
  const PrimitiveState<1> pre{1.0, {0.0}, 1.0};
  const double c = std::sqrt(g);
  const double speed = ms * c;
  const double rho_ratio = (g + 1) * ms * ms / ((g - 1) * ms * ms + 2);
  const double p_ratio = 1.0 + 2.0 * g / (g + 1) * (ms * ms - 1.0);
  const PrimitiveState<1> post{rho_ratio, {speed * (1.0 - 1.0 / rho_ratio)},
                               p_ratio};
  const auto star = riemann_star_state(post, pre);
  EXPECT_NEAR(star.p, post.p, 1e-10);
  EXPECT_NEAR(star.u, post.vel[0], 1e-10);
  expect_prim_near(exact_riemann(post, pre, speed - 1e-6), post, 1e-9);
  expect_prim_near(exact_riemann(post, pre, speed + 1e-6), pre, 1e-12);
  expect_prim_near(exact_riemann(post, pre, 0.0), post, 1e-9);
}

TEST(ExactRiemann, RejectsVacuumAndInadmissibleData) {
  EXPECT_THROW(riemann_star_state({1.0, {-20.0}, 1.0}, {1.0, {20.0}, 1.0}),
               ConfigError);
  EXPECT_THROW(riemann_star_state({-1.0, {0.0}, 1.0}, kSodR), ConfigError);
}

// Integral of the sampled solution over [-L, L] equals the initial integral
// minus t times the net flux through the ends (waves stay inside).
TEST(ExactRiemann, IntegralConservation) {
  const GasModel gas;
  const double len = 1.0, t = 0.2;
  auto sample = [&](double x) {
    return prim_to_cons(exact_riemann(kSodL, kSodR, x / t), gas);
  };
  // Split the domain at the discontinuities (located by bisection on the
  // sampled density) and integrate the smooth pieces with Gauss rules.
  std::vector<double> cuts{-len};
  const int scan = 4000;
  for (int i = 0; i < scan; ++i) {
    double a = -len + 2 * len * i / scan, b = -len + 2 * len * (i + 1) / scan;
    if (std::abs(sample(a)[0] - sample(b)[0]) < 1e-2) continue;
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      if (std::abs(sample(a)[0] - sample(m)[0]) > 1e-2) {
        b = m;
      } else {
        a = m;
      }
    }
    cuts.push_back(0.5 * (a + b));
  }
  cuts.push_back(len);
  EXPECT_EQ(cuts.size(), 4u);  // contact and shock

  const auto gl = build_gauss_legendre(4);
  ConservativeState<1> total;
  for (size_t k = 0; k + 1 < cuts.size(); ++k) {
    const int pieces = 20000;
    const double h = (cuts[k + 1] - cuts[k]) / pieces;
    for (int i = 0; i < pieces; ++i) {
      const double x0 = cuts[k] + (i + 0.5) * h;
      for (size_t q = 0; q < gl.nodes.size(); ++q) {
        total += (0.5 * h * gl.weights[q]) * sample(x0 + 0.5 * h * gl.nodes[q]);
      }
    }
  }
  const auto ul = prim_to_cons(kSodL, gas), ur = prim_to_cons(kSodR, gas);
  const auto initial = len * ul + len * ur;
  const auto net = euler_flux(ur, kSodR.p, 0) - euler_flux(ul, kSodL.p, 0);
  const auto expected = initial - t * net;
  for (int v = 0; v < 3; ++v) {
    EXPECT_NEAR(total[v], expected[v], 1e-6 * (1.0 + std::abs(expected[v])))
        << "component " << v;
  }
}

TEST(Cases, SodInitialCondition) {
  const auto c = sod_case();
  EXPECT_EQ(c.initial({0.25}, 0.0), kSodL);
  EXPECT_EQ(c.initial({0.75}, 0.0), kSodR);
  EXPECT_EQ(c.initial({0.5}, 0.0), kSodL);
  EXPECT_DOUBLE_EQ(c.t_end, 0.2);
  EXPECT_EQ(c.oracle, OracleKind::kExactRiemann);
}

TEST(Cases, ShuOsherInitialCondition) {
  const auto c = shu_osher_case();
  const auto l = c.initial({-4.5}, 0.0);
  EXPECT_DOUBLE_EQ(l.rho, 3.857143);
  EXPECT_DOUBLE_EQ(l.vel[0], 2.629369);
  EXPECT_DOUBLE_EQ(l.p, 10.333333);
  const auto z = c.initial({0.0}, 0.0);
  EXPECT_DOUBLE_EQ(z.rho, 1.0);
  EXPECT_DOUBLE_EQ(z.vel[0], 0.0);
  EXPECT_DOUBLE_EQ(z.p, 1.0);
  EXPECT_NEAR(c.initial({std::numbers::pi / 10.0}, 0.0).rho, 1.2, 1e-15);
  EXPECT_DOUBLE_EQ(c.t_end, 1.8);
}

TEST(Cases, VortexCentreAndFarField) {
  const VortexParameters v;
  const auto c = vortex_exact({0.0, 0.0}, 0.0, v);
  EXPECT_DOUBLE_EQ(c.vel[0], 0.0);
  EXPECT_DOUBLE_EQ(c.vel[1], 1.0);
  EXPECT_LT(c.p, 1.0 / (1.4 * 0.16));
  // Far from the centre (the unwrapped Gaussian is 1e-20 at r = 10 R).
  VortexParameters wide = v;
  wide.half_width = 1000.0;
  const auto far = vortex_exact({15.0 * v.radius, 0.0}, 0.0, wide);
  const double p_inf = 1.0 / (1.4 * 0.16);
  EXPECT_NEAR(far.p, p_inf, 1e-12);
  EXPECT_NEAR(far.rho, 1.0, 1e-12);
  EXPECT_NEAR(far.vel[0], 0.0, 1e-12);
  EXPECT_NEAR(far.vel[1], 1.0, 1e-12);
  VortexParameters literal = wide;
  literal.literal_density = true;
  EXPECT_NEAR(vortex_exact({15.0 * v.radius, 0.0}, 0.0, literal).rho,
              std::pow(p_inf, 1.0 / 1.4), 1e-12);
}

TEST(Cases, VortexIsPeriodicAfterOnePass) {
  const auto c = vortex_case();
  EXPECT_DOUBLE_EQ(c.t_end, 20.0);
  for (double x : {-9.0, -1.3, 0.0, 2.2, 7.5}) {
    for (double y : {-8.0, 0.4, 3.0}) {
      const auto a = vortex_exact({x, y}, 0.0);
      const auto b = vortex_exact({x, y}, 20.0);
      EXPECT_NEAR(a.rho, b.rho, 1e-14);
      EXPECT_NEAR(a.vel[0], b.vel[0], 1e-14);
      EXPECT_NEAR(a.vel[1], b.vel[1], 1e-14);
      EXPECT_NEAR(a.p, b.p, 1e-14);
    }
  }
}

// With rho = (gamma M^2 P)^(1/gamma) the vortex satisfies the radial
// momentum balance dP/dr = rho v_theta^2 / r.
TEST(Cases, VortexIsInRadialEquilibrium) {
  const VortexParameters v;
  for (double r : {0.5, 1.0, 1.5, 2.5, 4.0}) {
    const double h = 1e-5;
    const auto q = vortex_exact({r, 0.0}, 0.0, v);
    const double dp = (vortex_exact({r + h, 0.0}, 0.0, v).p -
                       vortex_exact({r - h, 0.0}, 0.0, v).p) /
                      (2 * h);
    const double vt = q.vel[1] - v.vy;
    EXPECT_NEAR(dp, q.rho * vt * vt / r, 1e-7 * (1.0 + std::abs(dp)));
  }
}

TEST(Cases, DmrStatesAndTopBoundary) {
  const auto c = dmr_case();
  const auto l = c.initial({0.0, 0.0}, 0.0);
  EXPECT_EQ(l, kDmrPostShock);
  EXPECT_DOUBLE_EQ(l.rho, 8.0);
  EXPECT_DOUBLE_EQ(l.vel[0], 7.14471);
  EXPECT_DOUBLE_EQ(l.vel[1], -4.125);
  EXPECT_DOUBLE_EQ(l.p, 116.5);
  EXPECT_EQ(c.initial({3.0, 0.0}, 0.0), kDmrPreShock);
  const auto& top = c.boundaries.at("top").front().bc;
  ASSERT_EQ(top.kind, BcKind::kExact);
  const double t30 = std::tan(std::numbers::pi / 6.0);
  const double c30 = std::cos(std::numbers::pi / 6.0);
  const double xs = 1.0 / 6.0 + t30 + 10.0 / c30 * 0.2;
  EXPECT_EQ(top.state({xs - 0.01, 1.0}, 0.2), kDmrPostShock);
  EXPECT_EQ(top.state({xs + 0.01, 1.0}, 0.2), kDmrPreShock);
  EXPECT_EQ(top.state({1.0 / 6.0 + t30 - 0.01, 1.0}, 0.0), kDmrPostShock);
}

TEST(Cases, KelvinHelmholtzStates) {
  const auto c = kh_case();
  const auto in = c.initial({0.0, 0.0}, 0.0);
  const auto out = c.initial({0.0, 0.4}, 0.0);
  EXPECT_EQ(in, (PrimitiveState<2>{2.0, {0.5, 0.0}, 2.5}));
  EXPECT_EQ(out, (PrimitiveState<2>{1.0, {-0.5, 0.0}, 2.5}));
  EXPECT_TRUE(c.periodic[0] && c.periodic[1]);
  EXPECT_DOUBLE_EQ(c.t_end, 2.0);
}

TEST(Cases, JetStatesAndInlet) {
  const auto c = jet_case();
  const auto amb = c.initial({0.3, 0.7}, 0.0);
  EXPECT_NEAR(amb.rho, 0.14, 1e-15);
  EXPECT_EQ(amb.p, 1.0);
  const auto& bottom = c.boundaries.at("bottom");
  ASSERT_EQ(bottom.size(), 2u);
  EXPECT_TRUE(bottom[0].applies({0.04, 0.0}));
  EXPECT_FALSE(bottom[0].applies({0.2, 0.0}));
  const auto& at_inlet = resolve_boundary<2>(c.boundaries, "bottom", {0.02, 0.0});
  const auto& outside = resolve_boundary<2>(c.boundaries, "bottom", {0.2, 0.0});
  EXPECT_EQ(at_inlet.kind, BcKind::kFixedState);
  EXPECT_EQ(outside.kind, BcKind::kTransmissive);
  const auto q = at_inlet.state({0.02, 0.0}, 0.0);
  EXPECT_NEAR(q.vel[1] / std::sqrt(1.4 * q.p / q.rho), 800.0, 1e-12);
  EXPECT_EQ(resolve_boundary<2>(c.boundaries, "left", {0.0, 0.5}).kind,
            BcKind::kSlipWall);
}

TEST(Cases, NamesAndDimensions) {
  for (const auto& n : case_names()) {
    const int d = case_dimension(n);
    if (d == 1) {
      EXPECT_EQ(case_1d(n).name, n);
    }
    if (d == 2) {
      EXPECT_EQ(case_2d(n).name, n);
    }
  }
  EXPECT_THROW(case_dimension("tgv"), ConfigError);
  EXPECT_THROW(case_1d("vortex"), ConfigError);
}

template <int Dim>
void expect_admissible_initial(const CaseSpec<Dim>& c, int p) {
  const auto mesh = build_mesh<Dim>(c.domain, c.default_mesh, c.periodic);
  const auto b = build_reference_basis<Dim>(p);
  const GasModel gas;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (const auto& xi : b.nodes) {
      const auto q = c.initial(mesh.map_to_physical(e, xi), 0.0);
      ASSERT_GT(q.rho, gas.rho_min) << c.name;
      ASSERT_GT(q.p, gas.p_min) << c.name;
    }
  }
}

TEST(Cases, InitialConditionsAreAdmissibleAtNodes) {
  for (int p : {1, 3, 4}) {
    expect_admissible_initial(sod_case(), p);
    expect_admissible_initial(shu_osher_case(), p);
    expect_admissible_initial(vortex_case(), p);
    expect_admissible_initial(dmr_case(), p);
    expect_admissible_initial(kh_case(), p);
    expect_admissible_initial(jet_case(), p);
  }
}

TEST(GodunovReference, SodMatchesExactSolutionInL1) {
  const auto c = sod_case();
  const auto ref = godunov_reference(
      0.0, 1.0, 2000, [&](double x) { return c.initial({x}, 0.0); }, 0.2,
      GasModel{});
  double err = 0.0;
  for (size_t i = 0; i < ref.cells.size(); ++i) {
    const double x = ref.x0 + (i + 0.5) * ref.dx;
    err += std::abs(ref.cells[i].rho - c.exact({x}, 0.2).rho) * ref.dx;
  }
  EXPECT_LT(err, 5e-3);
}

}  // namespace
}  // namespace entrofilt

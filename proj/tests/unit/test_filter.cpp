#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "entrofilt/basis.hpp"
#include "entrofilt/cases.hpp"
#include "entrofilt/entropy_filter.hpp"
#include "entrofilt/mesh.hpp"
#include "support/oracles.hpp"

namespace entrofilt {
namespace {

using State1 = ConservativeState<1>;
const GasModel kGas{};

State1 from_prim(double rho, double v, double p) {
  return prim_to_cons(PrimitiveState<1>{rho, {v}, p}, kGas);
}

std::vector<State1> nodal_from_coefficients(const ReferenceBasis<1>& b,
                                            const std::vector<State1>& coef) {
  return oracle::modal_family_1d(b.nodes1d, coef).at(0.0);
}

TEST(ElementMinEntropy, Examples) {
  const std::vector<State1> uniform(4, from_prim(1.0, 0.0, 1.0));
  EXPECT_DOUBLE_EQ(element_min_entropy<1>(uniform, kGas), 0.0);
  const std::vector<State1> sod{from_prim(1.0, 0.0, 1.0),
                                from_prim(0.125, 0.0, 0.1)};
  EXPECT_DOUBLE_EQ(element_min_entropy<1>(sod, kGas),
                   std::min(entropy(sod[0], kGas), entropy(sod[1], kGas)));
  auto bad = uniform;
  bad[2][0] = -0.1;
  EXPECT_EQ(element_min_entropy<1>(bad, kGas),
            -std::numeric_limits<double>::infinity());
}

TEST(SigmaMin, UniformField) {
  const auto mesh = build_mesh<2>({{0, 0}, {1, 1}}, {3, 2}, {false, true});
  const std::vector<double> star(6, 0.3);
  const std::vector<std::array<double, 4>> bnd(6, {0.3, 0.3, 0.3, 0.3});
  for (double s : compute_sigma_min<2>(mesh, star, bnd)) EXPECT_EQ(s, 0.3);
}

TEST(SigmaMin, PeriodicThreeElements) {
  const auto mesh = build_mesh<1>({{0.0}, {1.0}}, {3}, {true});
  const std::vector<double> star{0.0, -1.0, 5.0};
  const auto s = compute_sigma_min<1>(mesh, star, {});
  EXPECT_EQ(s, (std::vector<double>{-1.0, -1.0, -1.0}));
}

TEST(SigmaMin, InflowBoundaryStateLowersTheBound) {
  const auto jet = jet_case();
  const auto inflow = jet.boundaries.at("bottom")[0].bc.state({0.0, 0.0}, 0.0);
  const double s_in = entropy(prim_to_cons(inflow, kGas), kGas);
  const auto mesh = build_mesh<2>(jet.domain, {4, 4}, jet.periodic);
  std::vector<double> star(16, 1.0);
  std::vector<std::array<double, 4>> bnd(16);
  for (auto& b : bnd) b.fill(std::numeric_limits<double>::infinity());
  bnd[0][2] = s_in;  // bottom face of the corner element touches the inlet
  ASSERT_LT(s_in, 1.0);
  const auto s = compute_sigma_min<2>(mesh, star, bnd);
  EXPECT_EQ(s[0], s_in);
  EXPECT_EQ(s[1], 1.0);
}

TEST(ExponentialFilter, Arithmetic) {
  Eigen::MatrixXd modes = Eigen::MatrixXd::Ones(3, 2);
  const std::vector<int> orders{0, 1, 2};
  apply_exponential_filter(modes, orders, std::log(2.0));
  EXPECT_DOUBLE_EQ(modes(0, 0), 1.0);
  EXPECT_NEAR(modes(1, 1), 0.5, 1e-15);
  EXPECT_NEAR(modes(2, 0), 1.0 / 16.0, 1e-15);

  Eigen::MatrixXd id = Eigen::MatrixXd::Constant(3, 1, 2.0);
  apply_exponential_filter(id, orders, 0.0);
  EXPECT_EQ(id, Eigen::MatrixXd::Constant(3, 1, 2.0));

  Eigen::MatrixXd strong = Eigen::MatrixXd::Ones(3, 1);
  apply_exponential_filter(strong, orders, kZetaMax);
  EXPECT_EQ(strong(0, 0), 1.0);
  EXPECT_LT(strong(1, 0), 1e-12);
  EXPECT_LT(strong(2, 0), 1e-12);

  EXPECT_THROW(apply_exponential_filter(id, orders, -1.0), ConfigError);
}

TEST(ConstraintCheck, Classes) {
  const auto u = from_prim(1.0, 0.3, 1.0);
  const double s = entropy(u, kGas);
  const std::vector<State1> ok(3, u);
  EXPECT_TRUE(constraints_satisfied<1>(ok, s, kGas).ok);

  auto thin = ok;
  thin[1] = from_prim(1e-9, 0.0, 1.0);
  const auto c1 = constraints_satisfied<1>(thin, -1e300, kGas);
  EXPECT_FALSE(c1.ok);
  EXPECT_EQ(c1.binding, ConstraintClass::kDensity);

  auto cold = ok;
  cold[2] = from_prim(1.0, 0.0, 1e-9);
  EXPECT_EQ(constraints_satisfied<1>(cold, -1e300, kGas).binding,
            ConstraintClass::kPressure);

  // sigma = rho log(P rho^-gamma) with rho = 1: choose P so that sigma sits
  // 2e-4 below sigma_min.
  auto low = ok;
  low[0] = from_prim(1.0, 0.0, std::exp(s - 2e-4));
  const auto c3 = constraints_satisfied<1>(low, s, kGas);
  EXPECT_FALSE(c3.ok);
  EXPECT_EQ(c3.binding, ConstraintClass::kEntropy);
  // Within the eps_sigma relaxation the same node passes.
  low[0] = from_prim(1.0, 0.0, std::exp(s - 0.5e-4));
  EXPECT_TRUE(constraints_satisfied<1>(low, s, kGas).ok);
}

TEST(FilterElement, SmoothElementIsUntouched) {
  const auto b = build_reference_basis<2>(4);
  std::vector<ConservativeState<2>> el(b.n_nodes);
  for (int i = 0; i < b.n_nodes; ++i) {
    el[i] = prim_to_cons(vortex_exact({0.3 * b.nodes[i][0], 0.3 * b.nodes[i][1]}, 0.0),
                         kGas);
  }
  const auto before = el;
  const double smin = element_min_entropy<2>(el, kGas);
  const auto out = filter_element<2>(el, b, smin, kGas);
  EXPECT_EQ(out.zeta, 0.0);
  EXPECT_FALSE(out.activated);
  EXPECT_EQ(out.iterations, 0);
  EXPECT_EQ(el, before);
}

TEST(FilterElement, NegativeDensityModeIsRemoved) {
  const auto b = build_reference_basis<1>(3);
  std::vector<State1> coef(4);
  coef[0] = std::sqrt(2.0) * from_prim(1.0, 0.0, 1.0);
  // Degree-1 density mode driving the left node to rho = -0.5.
  coef[1][0] = 1.5 / std::sqrt(1.5);
  auto el = nodal_from_coefficients(b, coef);
  ASSERT_NEAR(el.front()[0], -0.5, 1e-13);
  const auto mean = element_mean<1>(el, b);
  const auto out = filter_element<1>(el, b, -1e300, kGas);
  EXPECT_TRUE(out.activated);
  EXPECT_GT(out.zeta, 0.0);
  EXPECT_EQ(out.iterations, kBisectionIterations);
  EXPECT_EQ(out.binding, ConstraintClass::kDensity);
  for (const auto& u : el) EXPECT_GE(u[0], 1e-8);
  const auto after = element_mean<1>(el, b);
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(after[v], mean[v], 1e-12);

  // The exact threshold solves 1 - 1.5 exp(-zeta) = 1e-8 at the left node.
  const double exact = std::log(1.5 / (1.0 - 1e-8));
  EXPECT_GE(out.zeta, exact - 1e-12);
  EXPECT_LE(out.zeta - exact, kZetaMax * std::ldexp(1.0, -kBisectionIterations));
}

TEST(FilterElement, MeanViolationIsAnError) {
  const auto b = build_reference_basis<1>(2);
  std::vector<State1> el(3, from_prim(1.0, 0.0, 1.0));
  for (auto& u : el) u[0] = -0.2;
  EXPECT_THROW(filter_element<1>(el, b, -1e300, kGas), MeanViolationError);
  std::vector<State1> ok(3, from_prim(1.0, 0.0, 1.0));
  // sigma_min above the mean's entropy by more than eps_sigma.
  EXPECT_THROW(filter_element<1>(ok, b, 1.0, kGas), MeanViolationError);
}

TEST(FilterElement, OffModeDoesNothing) {
  const auto b = build_reference_basis<1>(2);
  std::vector<State1> el(3, from_prim(1.0, 0.0, 1.0));
  el[0][0] = -1.0;
  const auto before = el;
  FilterOptions off;
  off.mode = FilterMode::kOff;
  EXPECT_FALSE(filter_element<1>(el, b, 0.0, kGas, off).activated);
  EXPECT_EQ(el, before);
}

class RandomElements : public ::testing::TestWithParam<FilterMode> {};

// Conservation, dissipativity, feasibility, idempotence and zeta = 0
// bit-identity on random violating elements.
TEST_P(RandomElements, FilterInvariants) {
  FilterOptions opt;
  opt.mode = GetParam();
  std::mt19937_64 rng(123);
  for (int p : {2, 3, 5}) {
    const auto b = build_reference_basis<1>(p);
    for (int trial = 0; trial < 60; ++trial) {
      const auto v = oracle::random_violating_element(p, rng, kGas);
      auto el = nodal_from_coefficients(b, v.coef);
      const auto mean = element_mean<1>(el, b);
      const Eigen::MatrixXd before_modes =
          b.modal_fwd * detail::as_matrix<1>(std::span<const State1>(el));
      const auto out = filter_element<1>(el, b, v.sigma_min, kGas, opt);
      ASSERT_TRUE(out.activated);
      const auto after = element_mean<1>(el, b);
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(after[k], mean[k], 1e-12 * (1.0 + std::abs(mean[k])));
      }
      const Eigen::MatrixXd after_modes =
          b.modal_fwd * detail::as_matrix<1>(std::span<const State1>(el));
      for (int m = 0; m < b.n_nodes; ++m) {
        for (int k = 0; k < 3; ++k) {
          EXPECT_LE(std::abs(after_modes(m, k)),
                    std::abs(before_modes(m, k)) * (1.0 + 1e-12) + 1e-14);
        }
      }
      EXPECT_TRUE(constraints_satisfied<1>(el, v.sigma_min, kGas).ok);
      const auto filtered = el;
      const auto again = filter_element<1>(el, b, v.sigma_min, kGas, opt);
      EXPECT_EQ(again.zeta, 0.0);
      EXPECT_FALSE(again.activated);
      EXPECT_EQ(el, filtered);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, RandomElements,
                         ::testing::Values(FilterMode::kEntropy,
                                           FilterMode::kLinear));

TEST(LinearLimiter, ScalesNonMeanModes) {
  Eigen::MatrixXd modes = Eigen::MatrixXd::Ones(3, 1);
  const std::vector<int> orders{0, 1, 2};
  apply_linear_limiter(modes, orders, 0.25);
  EXPECT_EQ(modes(0, 0), 1.0);
  EXPECT_EQ(modes(1, 0), 0.25);
  EXPECT_EQ(modes(2, 0), 0.25);
  EXPECT_THROW(apply_linear_limiter(modes, orders, 1.5), ConfigError);
}

// Bisection against a brute-force scan of 10^6 zeta values. Uses a smaller
// element count here; the acceptance binary runs the full 100.
TEST(FilterElement, BisectionMatchesBruteForceScan) {
  std::mt19937_64 rng(2024);
  const double width = kZetaMax * std::ldexp(1.0, -kBisectionIterations);
  for (int trial = 0; trial < 8; ++trial) {
    const int p = 2 + trial % 4;
    const auto b = build_reference_basis<1>(p);
    const auto v = oracle::random_violating_element(p, rng, kGas);
    auto el = nodal_from_coefficients(b, v.coef);
    const auto out = filter_element<1>(el, b, v.sigma_min, kGas);
    const double scan = oracle::brute_force_min_zeta(
        oracle::modal_family_1d(b.nodes1d, v.coef), v.sigma_min, kGas,
        kZetaMax, 1000000);
    EXPECT_LE(std::abs(out.zeta - scan), 2.0 * width) << "trial " << trial;
  }
}

TEST(FilterField, UniformFieldIsNeverFiltered) {
  const auto b = build_reference_basis<1>(3);
  const auto mesh = build_mesh<1>({{0.0}, {1.0}}, {10}, {true});
  std::vector<State1> field(40, from_prim(1.0, 0.5, 1.0));
  const auto prev = field;
  const auto out = filter_field<1>(field, prev, {}, mesh, b, kGas);
  for (const auto& o : out) EXPECT_FALSE(o.activated);
}

TEST(FilterField, VisitingOrderDoesNotMatter) {
  const auto b = build_reference_basis<1>(3);
  const int ne = 40;
  std::mt19937_64 rng(77);
  std::vector<State1> field;
  std::vector<double> smin;
  for (int e = 0; e < ne; ++e) {
    const auto v = oracle::random_violating_element(3, rng, kGas);
    auto el = nodal_from_coefficients(b, v.coef);
    if (e % 3 == 0) {
      el.assign(4, from_prim(1.0, 0.0, 1.0));
    }
    field.insert(field.end(), el.begin(), el.end());
    smin.push_back(e % 3 == 0 ? 0.0 : v.sigma_min);
  }
  std::vector<int> forward(ne), reverse(ne), shuffled(ne);
  std::iota(forward.begin(), forward.end(), 0);
  std::reverse_copy(forward.begin(), forward.end(), reverse.begin());
  shuffled = forward;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<std::vector<State1>> results;
  std::vector<long> counts;
  for (const auto* order : {&forward, &reverse, &shuffled}) {
    auto f = field;
    const auto out = filter_field<1>(f, smin, b, kGas, {}, *order);
    counts.push_back(std::count_if(out.begin(), out.end(),
                                   [](const FilterOutcome& o) { return o.activated; }));
    results.push_back(f);
  }
  EXPECT_EQ(counts[0], counts[1]);
  EXPECT_EQ(counts[0], counts[2]);
  EXPECT_EQ(results[0], results[1]);
  EXPECT_EQ(results[0], results[2]);
}

}  // namespace
}  // namespace entrofilt

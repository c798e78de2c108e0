// Sod shock tube with the entropy filter; prints the density at every
// solution point next to the exact solution.
//
//   sod_profile [N] [order]

#include <cstdio>
#include <cstdlib>

#include "entrofilt/entrofilt.hpp"

int main(int argc, char** argv) {
  using namespace entrofilt;
  const int n = argc > 1 ? std::atoi(argv[1]) : 40;
  const int order = argc > 2 ? std::atoi(argv[2]) : 3;

  const auto spec = sod_case();
  const GasModel gas;
  FrSolver<1> solver(build_mesh<1>(spec.domain, {n}, spec.periodic), order, gas,
                     spec.boundaries);
  auto field = solver.initialize(spec.initial);
  const auto stats = solver.advance_to_time(field, spec.t_end);

  const PrimitiveState<1> left{1.0, {0.0}, 1.0}, right{0.125, {0.0}, 0.1};
  std::printf("# x rho rho_exact\n");
  for (size_t k = 0; k < field.u.size(); ++k) {
    const double x = solver.coordinates()[k][0];
    const auto exact = exact_riemann(left, right, (x - 0.5) / spec.t_end);
    std::printf("%.6f %.6f %.6f\n", x, field.u[k].rho(), exact.rho);
  }
  std::fprintf(stderr, "%zu steps, filter active in %.2f%% of element-stages\n",
               stats.steps.size(),
               100.0 * stats.activations / static_cast<double>(stats.element_stages));
}

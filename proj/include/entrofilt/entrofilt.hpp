#ifndef ENTROFILT_ENTROFILT_HPP_
#define ENTROFILT_ENTROFILT_HPP_

#include "entrofilt/basis.hpp"
#include "entrofilt/boundary.hpp"
#include "entrofilt/cases.hpp"
#include "entrofilt/csv_io.hpp"
#include "entrofilt/entropy_filter.hpp"
#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/exact_riemann.hpp"
#include "entrofilt/harness.hpp"
#include "entrofilt/mesh.hpp"
#include "entrofilt/norms.hpp"
#include "entrofilt/parallel.hpp"
#include "entrofilt/selftest.hpp"
#include "entrofilt/solver.hpp"

#endif  // ENTROFILT_ENTROFILT_HPP_

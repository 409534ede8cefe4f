#ifndef ACX_BASELINES_HPP
#define ACX_BASELINES_HPP

#include "acx/problems.hpp"
#include "acx/solver.hpp"

#include <cstddef>

namespace acx {

struct BaselineOptions {
   double tol = 1e-8;
   Norm norm = Norm::Two;
   std::size_t max_evals = 100000;
   double time_limit_seconds = 0.0;
};

/// How the Barzilai-Borwein iteration takes its first step.
enum class BbStart {
   UnitStep,  ///< x1 = x0 - g0, i.e. one application of x - (Ax - b)
   Cauchy     ///< exact line search along -g0
};

/// Steepest descent with the exact Cauchy step g'g / g'Ag. Stops when
/// ||g|| <= tol; counts one gradient per iterate.
RunReport steepest_descent(const LinearQuadratic& problem, const Vector& x0,
                           const BaselineOptions& options = {});

/// BB1 steps s's / s'y after the configured first step.
RunReport barzilai_borwein(const LinearQuadratic& problem, const Vector& x0,
                           const BaselineOptions& options = {},
                           BbStart start = BbStart::UnitStep);

/// Unaccelerated x <- F(x) until ||F(x) - x|| <= tol.
RunReport plain_iteration(const Mapping& map, const Vector& x0,
                          const BaselineOptions& options = {});

}  // namespace acx

#endif  // ACX_BASELINES_HPP

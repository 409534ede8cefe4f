#ifndef ACX_CATALOG_HPP
#define ACX_CATALOG_HPP

#include "acx/descent.hpp"
#include "acx/problems.hpp"
#include "acx/solver.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace acx {

enum class ProblemKind { Descent, Mapping };

/// Names a catalog problem. dim = 0 selects the problem's default size.
/// Equal specs always produce bit-identical data.
struct ProblemSpec {
   std::string name;
   std::size_t dim = 0;
   std::uint64_t seed = 0;

   // Generator parameters; unset means the problem default.
   std::optional<double> omega;             ///< bound buffer (rosenbrock-box, admixture)
   std::optional<double> locality;          ///< altproj factor correlation
   std::optional<std::size_t> rows;         ///< logistic observations
   std::optional<double> diagonal_max;      ///< power diagonal shift range
   std::optional<std::size_t> groups;       ///< altproj groups per factor
};

struct ProblemInstance {
   std::string name;
   ProblemKind kind = ProblemKind::Mapping;
   DescentProblem descent;  ///< set for Descent problems
   Mapping mapping;         ///< set for Mapping problems
   Vector x0;
   /// Objective used for the final-value comparison across algorithms.
   std::function<double(const Vector&)> objective;
   /// Problem defaults: tolerance, norm, bounds, stabilization.
   AcxConfig config;
   std::optional<LinearQuadratic> quadratic;  ///< linquad only; enables sd/bb
};

/// rosenbrock, rosenbrock-box, linquad, logistic, admixture, power, altproj
const std::vector<std::string>& catalog_names();
bool in_catalog(const std::string& name);

/// Builds the instance for one draw. Problem data and the start point are
/// seeded from (spec.seed, draw). Throws ConfigError for unknown names or
/// invalid sizes.
ProblemInstance make_instance(const ProblemSpec& spec, std::uint64_t draw);

}  // namespace acx

#endif  // ACX_CATALOG_HPP

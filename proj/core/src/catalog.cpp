#include "acx/catalog.hpp"
#include "acx/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acx {

namespace {

// Independent streams per draw: problem data and start point.
enum Stream : std::uint64_t { kData = 0, kStart = 1 };

std::uint64_t stream_seed(const ProblemSpec& spec, std::uint64_t draw, Stream stream)
{
   return derive_seed(derive_seed(spec.seed, draw), stream);
}

std::size_t dim_or(const ProblemSpec& spec, std::size_t fallback)
{
   return spec.dim == 0 ? fallback : spec.dim;
}

Vector uniform_vector(std::size_t n, double lo, double hi, std::uint64_t seed)
{
   Rng rng(seed);
   Vector v(static_cast<Eigen::Index>(n));
   for (Eigen::Index i = 0; i < v.size(); ++i) {
      v[i] = rng.uniform(lo, hi);
   }
   return v;
}

ProblemInstance descent_instance(const std::string& name, DescentProblem problem, Vector x0)
{
   ProblemInstance inst;
   inst.name = name;
   inst.kind = ProblemKind::Descent;
   inst.objective = problem.objective;
   inst.descent = std::move(problem);
   inst.x0 = std::move(x0);
   return inst;
}

ProblemInstance mapping_instance(const std::string& name, Mapping map, Vector x0)
{
   ProblemInstance inst;
   inst.name = name;
   inst.kind = ProblemKind::Mapping;
   inst.objective = map.objective;
   inst.mapping = std::move(map);
   inst.x0 = std::move(x0);
   return inst;
}

ProblemInstance make_rosenbrock(const ProblemSpec& spec, std::uint64_t draw)
{
   const std::size_t n = dim_or(spec, 1000);
   auto inst = descent_instance("rosenbrock", rosenbrock(n),
                                uniform_vector(n, -5.0, 5.0, stream_seed(spec, draw, kStart)));
   return inst;
}

ProblemInstance make_rosenbrock_box(const ProblemSpec& spec, std::uint64_t draw)
{
   const std::size_t n = dim_or(spec, 1000);
   auto inst = descent_instance("rosenbrock-box", rosenbrock(n),
                                uniform_vector(n, -5.0, 0.0, stream_seed(spec, draw, kStart)));
   Vector upper = uniform_vector(n, 0.0, 1.0, stream_seed(spec, draw, kData));
   // A zero upper bound would put the start on the boundary.
   for (Eigen::Index i = 0; i < upper.size(); ++i) {
      if (!(upper[i] > 0.0)) {
         upper[i] = std::numeric_limits<double>::min();
      }
   }
   const Vector lower = Vector::Constant(upper.size(), -std::numeric_limits<double>::infinity());
   inst.config.bounds = BoxBounds(lower, upper, spec.omega.value_or(0.999));
   return inst;
}

ProblemInstance make_linquad(const ProblemSpec& spec)
{
   const std::size_t n = dim_or(spec, 4);
   Vector eigs(static_cast<Eigen::Index>(n));
   if (n == 4) {
      eigs << 20.0, 10.0, 2.0, 1.0;
   } else if (n == 1) {
      eigs << 1.0;
   } else {
      eigs = Vector::LinSpaced(static_cast<Eigen::Index>(n), 20.0, 1.0);
   }
   auto lq = linear_quadratic(eigs, Vector::Ones(static_cast<Eigen::Index>(n)));
   auto inst = mapping_instance("linquad", lq.mapping(), Vector::Zero(static_cast<Eigen::Index>(n)));
   inst.quadratic = lq;
   inst.config.tol = 1e-8;
   inst.config.norm = Norm::Two;
   return inst;
}

ProblemInstance make_logistic(const ProblemSpec& spec, std::uint64_t draw)
{
   const std::size_t cols = dim_or(spec, 100);
   const std::size_t rows = spec.rows.value_or(2000);
   if (cols < 2 || rows <= cols) {
      throw ConfigError("logistic needs rows > cols >= 2");
   }
   const auto data = logistic_regression(rows, cols, stream_seed(spec, draw, kData));
   return descent_instance("logistic", data.problem(),
                           Vector::Zero(static_cast<Eigen::Index>(cols)));
}

ProblemInstance make_admixture(const ProblemSpec& spec, std::uint64_t draw)
{
   if (spec.dim != 0 && spec.dim != 3) {
      throw ConfigError("admixture has exactly three parameters");
   }
   const PoissonAdmixture model;
   auto inst = mapping_instance("admixture", model.mapping(),
                                PoissonAdmixture::random_start(stream_seed(spec, draw, kStart)));
   inst.config.stabilize = true;
   inst.config.bounds = PoissonAdmixture::bounds(spec.omega.value_or(0.8));
   return inst;
}

ProblemInstance make_power(const ProblemSpec& spec, std::uint64_t draw)
{
   const std::size_t n = dim_or(spec, 1000);
   auto pm = power_method(random_symmetric_matrix(n, 0.1, spec.diagonal_max.value_or(100.0),
                                                  stream_seed(spec, draw, kData)));
   Mapping map = pm.mapping();
   map.objective = [pm](const Vector& x) { return pm.rayleigh(x); };
   return mapping_instance("power", std::move(map), Vector::Ones(static_cast<Eigen::Index>(n)));
}

ProblemInstance make_altproj(const ProblemSpec& spec, std::uint64_t draw)
{
   const std::size_t n = dim_or(spec, 20000);
   const int groups = static_cast<int>(spec.groups.value_or(500));
   auto panel = std::make_shared<const FixedEffectsPanel>(synthetic_panel(
       n, {groups, groups}, spec.locality.value_or(0.9), stream_seed(spec, draw, kData)));
   Rng rng(stream_seed(spec, draw, kStart));
   Vector x0(static_cast<Eigen::Index>(n));
   for (Eigen::Index i = 0; i < x0.size(); ++i) {
      x0[i] = rng.normal();
   }
   auto inst = mapping_instance("altproj", alternating_projections(panel), std::move(x0));
   inst.config.tol = 1e-8;
   inst.config.norm = Norm::Two;
   return inst;
}

}  // namespace

const std::vector<std::string>& catalog_names()
{
   static const std::vector<std::string> names{"rosenbrock", "rosenbrock-box", "linquad", "logistic",
                                               "admixture",  "power",          "altproj"};
   return names;
}

bool in_catalog(const std::string& name)
{
   const auto& names = catalog_names();
   return std::find(names.begin(), names.end(), name) != names.end();
}

ProblemInstance make_instance(const ProblemSpec& spec, std::uint64_t draw)
{
   if (spec.omega && !(*spec.omega > 0.0 && *spec.omega < 1.0)) {
      throw ConfigError("omega must lie in (0, 1)");
   }
   if (spec.name == "rosenbrock") {
      return make_rosenbrock(spec, draw);
   }
   if (spec.name == "rosenbrock-box") {
      return make_rosenbrock_box(spec, draw);
   }
   if (spec.name == "linquad") {
      return make_linquad(spec);
   }
   if (spec.name == "logistic") {
      return make_logistic(spec, draw);
   }
   if (spec.name == "admixture") {
      return make_admixture(spec, draw);
   }
   if (spec.name == "power") {
      return make_power(spec, draw);
   }
   if (spec.name == "altproj") {
      return make_altproj(spec, draw);
   }
   throw ConfigError("unknown problem '" + spec.name + "'");
}

}  // namespace acx

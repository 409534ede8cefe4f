#include "acx/descent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace acx {

namespace {

// Step search from a gradient g0 = grad f(x0) the caller already holds.
// Counts exclude that gradient.
AlphaSearch search_alpha(const DescentProblem& problem, const Vector& x0, const Vector& g0,
                         const AlphaPolicy& policy)
{
   const double g_norm = g0.norm();
   const double g_inf = g0.lpNorm<Eigen::Infinity>();
   if (!(g_inf > 0.0)) {
      throw std::invalid_argument("initial step search needs a nonzero gradient");
   }

   AlphaSearch out;
   const double f0 = problem.objective(x0);
   ++out.objective_evals;
   if (!std::isfinite(f0)) {
      throw NoAdmissibleStep("objective is not finite at the start point");
   }

   // Secant curvature along -g0 gives the starting grid point.
   const double scale = std::max(1.0, x0.size() > 0 ? x0.lpNorm<Eigen::Infinity>() : 0.0);
   const double h = 1e-6 * scale / g_inf;
   Vector trial = x0 - h * g0;
   Vector g_trial(x0.size());
   problem.gradient(trial, g_trial);
   ++out.grad_evals;
   const double curvature = (g_trial - g0).norm() / (h * g_norm);
   double alpha = std::isfinite(curvature) && curvature > 0.0 ? 1.0 / curvature : 1.0;

   const double decrease = policy.squared_armijo ? g_norm * g_norm : g_norm;
   auto admissible = [&](double a) {
      trial = x0 - a * g0;
      const double f = problem.objective(trial);
      ++out.objective_evals;
      if (!std::isfinite(f) || f > f0 - policy.c_ag * a * decrease) {
         return false;
      }
      problem.gradient(trial, g_trial);
      ++out.grad_evals;
      return g_trial.allFinite() && g_trial.norm() <= policy.l_n * g_norm;
   };

   if (admissible(alpha)) {
      while (alpha * policy.theta <= policy.alpha_ceiling && admissible(alpha * policy.theta)) {
         alpha *= policy.theta;
      }
   } else {
      while (true) {
         alpha /= policy.theta;
         if (alpha < policy.alpha_floor) {
            throw NoAdmissibleStep("no admissible initial step above the floor");
         }
         if (admissible(alpha)) {
            break;
         }
      }
   }
   out.alpha = alpha;
   return out;
}

void check_problem(const DescentProblem& problem)
{
   if (problem.dim == 0 || !problem.objective || !problem.gradient) {
      throw ConfigError("descent problem needs a dimension, objective and gradient");
   }
}

}  // namespace

void AlphaPolicy::validate() const
{
   if (!(c_ag > 0.0) || !(l_n > 0.0)) {
      throw ConfigError("step search constants must be positive");
   }
   if (!(theta > 1.0)) {
      throw ConfigError("step growth factor theta must exceed 1");
   }
   if (!(sigma_lower > 0.0) || !(sigma_lower <= sigma_upper)) {
      throw ConfigError("need 0 < sigma_lower <= sigma_upper");
   }
   if (!(alpha_cap > 0.0) || !(alpha_floor > 0.0) || !(alpha_floor < alpha_ceiling)) {
      throw ConfigError("invalid step size limits");
   }
}

AlphaSearch initial_alpha(const DescentProblem& problem, const Vector& x0, const AlphaPolicy& policy)
{
   check_problem(problem);
   policy.validate();
   Vector g0(x0.size());
   problem.gradient(x0, g0);
   if (!g0.allFinite()) {
      throw NoAdmissibleStep("gradient is not finite at the start point");
   }
   AlphaSearch out = search_alpha(problem, x0, g0, policy);
   ++out.grad_evals;
   return out;
}

double adapt_alpha(double alpha, double sigma, const AlphaPolicy& policy)
{
   const bool low = sigma < policy.sigma_lower;
   const bool high = sigma > policy.sigma_upper;
   if (!low && !high) {
      return alpha;
   }
   const bool grow = policy.adaptation == AlphaAdaptation::Restoring ? high : low;
   return grow ? alpha * policy.theta : alpha / policy.theta;
}

TinyDifferenceStep tiny_difference_guard(double alpha, int occurrences, const AlphaPolicy& policy)
{
   TinyDifferenceStep out;
   out.sigma = 1.0;
   out.alpha = std::min(policy.alpha_cap, std::ldexp(alpha, 1 + occurrences));
   out.occurrences = occurrences + 1;
   return out;
}

int first_cycle_order(double squared_sigma, const OrderSchedule& schedule)
{
   const int scheduled = schedule.order_at(0);
   return scheduled == 3 && squared_sigma < 1.0 ? 2 : scheduled;
}

Mapping descent_mapping(const DescentProblem& problem, std::shared_ptr<const double> alpha,
                        const std::optional<BoxBounds>& bounds)
{
   check_problem(problem);
   Mapping map;
   map.dim = problem.dim;
   map.objective = problem.objective;
   map.apply = [gradient = problem.gradient, alpha = std::move(alpha), bounds](const Vector& x,
                                                                               Vector& fx) {
      gradient(x, fx);
      fx = x - *alpha * fx;
      if (bounds) {
         apply_bounds_inplace(x, fx, *bounds);
      }
   };
   return map;
}

Mapping descent_mapping(const DescentProblem& problem, double alpha,
                        const std::optional<BoxBounds>& bounds)
{
   return descent_mapping(problem, std::make_shared<const double>(alpha), bounds);
}

DescentAdapter::DescentAdapter(DescentProblem problem, double alpha0, AlphaPolicy policy, double rho,
                               std::optional<BoxBounds> bounds)
    : problem_(std::move(problem)),
      policy_(policy),
      rho_(rho),
      alpha_(std::make_shared<double>(alpha0)),
      alpha_at_best_(alpha0)
{
   if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) {
      throw ConfigError("descent step size must be positive and finite");
   }
   mapping_ = descent_mapping(problem_, std::shared_ptr<const double>(alpha_), bounds);
}

void DescentAdapter::on_step(double sigma)
{
   *alpha_ = adapt_alpha(*alpha_, sigma, policy_);
}

double DescentAdapter::on_degenerate()
{
   const auto step = tiny_difference_guard(*alpha_, tiny_occurrences_, policy_);
   *alpha_ = step.alpha;
   tiny_occurrences_ = step.occurrences;
   return step.sigma;
}

void DescentAdapter::on_improvement()
{
   alpha_at_best_ = *alpha_;
}

void DescentAdapter::on_backtrack(int streak)
{
   *alpha_ = alpha_at_best_ / std::pow(rho_, streak);
}

int DescentAdapter::first_order(double squared_sigma, int scheduled) const
{
   return scheduled == 3 && squared_sigma < 1.0 ? 2 : scheduled;
}

RunReport minimize(const DescentProblem& problem, const Vector& x0, const AcxConfig& cfg,
                   const AlphaPolicy& policy)
{
   check_problem(problem);
   policy.validate();
   cfg.validate(problem.dim);
   if (static_cast<std::size_t>(x0.size()) != problem.dim) {
      throw ConfigError("start point dimension does not match the problem");
   }

   Vector g0(x0.size());
   problem.gradient(x0, g0);
   if (!g0.allFinite()) {
      throw NoAdmissibleStep("gradient is not finite at the start point");
   }
   if (norm(g0, cfg.norm) <= cfg.tol) {
      RunReport report;
      report.x_final = x0;
      report.converged = true;
      report.status = Status::Converged;
      report.grad_evals = 1;
      report.final_residual = norm(g0, cfg.norm);
      report.final_objective = problem.objective(x0);
      return report;
   }

   const AlphaSearch search = search_alpha(problem, x0, g0, policy);
   DescentAdapter adapter(problem, search.alpha, policy, cfg.rho, cfg.bounds);
   RunReport report = solve(adapter.mapping(), x0, cfg, &adapter);
   report.grad_evals = report.maps + 1 + search.grad_evals;
   report.objective_evals += search.objective_evals;
   report.final_objective = problem.objective(report.x_final);
   return report;
}

}  // namespace acx

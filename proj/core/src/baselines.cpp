#include "acx/baselines.hpp"

#include <chrono>
#include <cmath>

namespace acx {

namespace {

using Clock = std::chrono::steady_clock;

class Deadline {
public:
   explicit Deadline(double seconds) : seconds_(seconds), start_(Clock::now()) {}

   bool passed() const
   {
      if (seconds_ <= 0.0) {
         return false;
      }
      const std::chrono::duration<double> elapsed = Clock::now() - start_;
      return elapsed.count() > seconds_;
   }

private:
   double seconds_;
   Clock::time_point start_;
};

void check_options(const BaselineOptions& options)
{
   if (!(options.tol > 0.0) || options.max_evals == 0 || options.time_limit_seconds < 0.0) {
      throw ConfigError("baseline needs tol > 0, max_evals > 0 and a non-negative time limit");
   }
}

void check_start(const LinearQuadratic& problem, const Vector& x0)
{
   if (x0.size() != problem.b.size() || !x0.allFinite()) {
      throw ConfigError("start point must be finite and match the problem dimension");
   }
}

RunReport finish(const LinearQuadratic& problem, Vector x, double residual, std::size_t evals,
                 std::size_t iterations, Status status)
{
   RunReport r;
   r.x_final = std::move(x);
   r.status = status;
   r.converged = status == Status::Converged;
   r.maps = evals;
   r.grad_evals = evals;
   r.iterations = iterations;
   r.final_residual = residual;
   r.final_objective = problem.objective(r.x_final);
   return r;
}

}  // namespace

RunReport steepest_descent(const LinearQuadratic& problem, const Vector& x0,
                           const BaselineOptions& options)
{
   check_options(options);
   check_start(problem, x0);
   const Deadline deadline(options.time_limit_seconds);
   const Vector& a = problem.eigenvalues;

   Vector x = x0;
   std::size_t evals = 0;
   std::size_t iterations = 0;
   double residual = 0.0;
   while (true) {
      if (evals >= options.max_evals) {
         return finish(problem, x, residual, evals, iterations, Status::MaxMapsExceeded);
      }
      if (deadline.passed()) {
         return finish(problem, x, residual, evals, iterations, Status::TimedOut);
      }
      const Vector g = a.cwiseProduct(x) - problem.b;
      ++evals;
      residual = norm(g, options.norm);
      if (residual <= options.tol) {
         return finish(problem, x, residual, evals, iterations, Status::Converged);
      }
      const double step = g.squaredNorm() / g.dot(a.cwiseProduct(g));
      x -= step * g;
      ++iterations;
   }
}

RunReport barzilai_borwein(const LinearQuadratic& problem, const Vector& x0,
                           const BaselineOptions& options, BbStart start)
{
   check_options(options);
   check_start(problem, x0);
   const Deadline deadline(options.time_limit_seconds);
   const Vector& a = problem.eigenvalues;

   Vector x = x0;
   Vector g = a.cwiseProduct(x) - problem.b;
   std::size_t evals = 1;
   std::size_t iterations = 0;
   double residual = norm(g, options.norm);
   if (residual <= options.tol) {
      return finish(problem, x, residual, evals, iterations, Status::Converged);
   }
   double step = start == BbStart::Cauchy ? g.squaredNorm() / g.dot(a.cwiseProduct(g)) : 1.0;

   while (true) {
      if (evals >= options.max_evals) {
         return finish(problem, x, residual, evals, iterations, Status::MaxMapsExceeded);
      }
      if (deadline.passed()) {
         return finish(problem, x, residual, evals, iterations, Status::TimedOut);
      }
      const Vector s = -step * g;
      const Vector x_next = x + s;
      const Vector g_next = a.cwiseProduct(x_next) - problem.b;
      ++evals;
      ++iterations;
      residual = norm(g_next, options.norm);
      if (residual <= options.tol) {
         return finish(problem, x_next, residual, evals, iterations, Status::Converged);
      }
      const Vector y = g_next - g;
      const double sy = s.dot(y);
      if (!(sy > 0.0)) {
         return finish(problem, x_next, residual, evals, iterations, Status::Unrecoverable);
      }
      step = s.squaredNorm() / sy;
      x = x_next;
      g = g_next;
   }
}

RunReport plain_iteration(const Mapping& map, const Vector& x0, const BaselineOptions& options)
{
   check_options(options);
   if (!map.apply || static_cast<std::size_t>(x0.size()) != map.dim || !x0.allFinite()) {
      throw ConfigError("start point must be finite and match the mapping dimension");
   }
   const Deadline deadline(options.time_limit_seconds);

   RunReport r;
   Vector x = x0;
   Vector fx(x0.size());
   double residual = 0.0;
   r.status = Status::MaxMapsExceeded;
   while (true) {
      if (r.maps >= options.max_evals) {
         r.status = Status::MaxMapsExceeded;
         break;
      }
      if (deadline.passed()) {
         r.status = Status::TimedOut;
         break;
      }
      try {
         ++r.maps;
         map.apply(x, fx);
         if (!fx.allFinite()) {
            throw MappingFailure("mapping returned non-finite values");
         }
      } catch (const MappingFailure&) {
         r.status = Status::Unrecoverable;
         break;
      }
      residual = norm(fx - x, options.norm);
      if (residual <= options.tol) {
         r.status = Status::Converged;
         break;
      }
      x.swap(fx);
      ++r.iterations;
   }
   r.converged = r.status == Status::Converged;
   r.x_final = std::move(x);
   r.final_residual = residual;
   if (map.objective) {
      r.final_objective = map.objective(r.x_final);
   }
   return r;
}

}  // namespace acx

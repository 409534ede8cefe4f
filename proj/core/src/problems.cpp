#include "acx/problems.hpp"
#include "acx/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace acx {

namespace {

double softplus(double t)
{
   return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

double logistic(double t)
{
   if (t >= 0.0) {
      return 1.0 / (1.0 + std::exp(-t));
   }
   const double e = std::exp(t);
   return e / (1.0 + e);
}

// log(k!) for the counts 0..9.
const std::array<double, 10>& log_factorials()
{
   static const std::array<double, 10> table = [] {
      std::array<double, 10> t{};
      for (std::size_t k = 0; k < t.size(); ++k) {
         t[k] = std::lgamma(static_cast<double>(k) + 1.0);
      }
      return t;
   }();
   return table;
}

double log_poisson(double mean, std::size_t k)
{
   return -mean + static_cast<double>(k) * std::log(mean) - log_factorials()[k];
}

void check_admixture_point(const Vector& x)
{
   if (x.size() != 3) {
      throw DomainError("admixture parameters must have three entries");
   }
   if (!(x[0] > 0.0) || !(x[1] > 0.0) || !(x[2] > 0.0 && x[2] < 1.0) || !x.allFinite()) {
      throw DomainError("admixture parameters outside mu > 0, 0 < pi < 1");
   }
}

}  // namespace

// Linear quadratic ------------------------------------------------------------

LinearQuadratic linear_quadratic(Vector eigenvalues, Vector b)
{
   if (eigenvalues.size() == 0 || eigenvalues.size() != b.size()) {
      throw ConfigError("eigenvalues and right-hand side must be non-empty and of equal length");
   }
   if (!(eigenvalues.array() > 0.0).all()) {
      throw ConfigError("quadratic needs positive eigenvalues");
   }
   return LinearQuadratic{std::move(eigenvalues), std::move(b)};
}

DescentProblem LinearQuadratic::descent() const
{
   DescentProblem p;
   p.dim = static_cast<std::size_t>(b.size());
   p.objective = [self = *this](const Vector& x) { return self.objective(x); };
   p.gradient = [a = eigenvalues, b = b](const Vector& x, Vector& g) {
      g = a.cwiseProduct(x) - b;
   };
   return p;
}

Mapping LinearQuadratic::mapping() const
{
   Mapping m;
   m.dim = static_cast<std::size_t>(b.size());
   m.objective = [self = *this](const Vector& x) { return self.objective(x); };
   m.apply = [a = eigenvalues, b = b](const Vector& x, Vector& fx) {
      fx = x - (a.cwiseProduct(x) - b);
   };
   return m;
}

Vector LinearQuadratic::solution() const
{
   return b.cwiseQuotient(eigenvalues);
}

double LinearQuadratic::objective(const Vector& x) const
{
   return 0.5 * x.dot(eigenvalues.cwiseProduct(x)) - x.dot(b);
}

double LinearQuadratic::inverse_norm(const Vector& e) const
{
   return std::sqrt(e.cwiseProduct(e).cwiseQuotient(eigenvalues).sum());
}

// Rosenbrock ------------------------------------------------------------------

DescentProblem rosenbrock(std::size_t n)
{
   if (n < 2 || n % 2 != 0) {
      throw ConfigError("rosenbrock dimension must be even and at least 2");
   }
   DescentProblem p;
   p.dim = n;
   p.objective = [](const Vector& x) {
      double f = 0.0;
      for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
         const double u = x[i] * x[i] - x[i + 1];
         const double v = x[i] - 1.0;
         f += 100.0 * u * u + v * v;
      }
      return f;
   };
   p.gradient = [](const Vector& x, Vector& g) {
      g.resize(x.size());
      for (Eigen::Index i = 0; i + 1 < x.size(); i += 2) {
         const double u = x[i] * x[i] - x[i + 1];
         g[i] = 400.0 * x[i] * u + 2.0 * (x[i] - 1.0);
         g[i + 1] = -200.0 * u;
      }
   };
   return p;
}

// Logistic regression ---------------------------------------------------------

LogisticRegression logistic_regression(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
   if (rows == 0 || cols == 0) {
      throw ConfigError("logistic regression needs at least one row and one column");
   }
   Rng rng(seed);
   const auto n = static_cast<Eigen::Index>(rows);
   const auto m = static_cast<Eigen::Index>(cols);
   LogisticRegression out;
   out.design.resize(n, m);
   for (Eigen::Index i = 0; i < n; ++i) {
      out.design(i, 0) = 1.0;
      for (Eigen::Index j = 1; j < m; ++j) {
         out.design(i, j) = rng.uniform(-1.0, 1.0);
      }
   }
   out.beta_true.resize(m);
   for (Eigen::Index j = 0; j < m; ++j) {
      out.beta_true[j] = rng.uniform(-1.0, 1.0);
   }
   const Vector eta = out.design * out.beta_true;
   out.response.resize(n);
   for (Eigen::Index i = 0; i < n; ++i) {
      out.response[i] = rng.bernoulli(logistic(eta[i])) ? 1.0 : 0.0;
   }
   return out;
}

double LogisticRegression::objective(const Vector& beta) const
{
   const Vector eta = design * beta;
   double f = 0.0;
   for (Eigen::Index i = 0; i < eta.size(); ++i) {
      f += softplus(eta[i]) - response[i] * eta[i];
   }
   return f;
}

void LogisticRegression::gradient(const Vector& beta, Vector& grad) const
{
   Vector r = design * beta;
   for (Eigen::Index i = 0; i < r.size(); ++i) {
      r[i] = logistic(r[i]) - response[i];
   }
   grad.noalias() = design.transpose() * r;
}

DescentProblem LogisticRegression::problem() const
{
   auto self = std::make_shared<const LogisticRegression>(*this);
   DescentProblem p;
   p.dim = static_cast<std::size_t>(design.cols());
   p.objective = [self](const Vector& b) { return self->objective(b); };
   p.gradient = [self](const Vector& b, Vector& g) { self->gradient(b, g); };
   return p;
}

// Poisson admixture -----------------------------------------------------------

std::array<double, 10> PoissonAdmixture::posterior_weights(const Vector& x) const
{
   check_admixture_point(x);
   std::array<double, 10> w{};
   for (std::size_t k = 0; k < w.size(); ++k) {
      const double a = std::log(x[2]) + log_poisson(x[0], k);
      const double b = std::log1p(-x[2]) + log_poisson(x[1], k);
      // a / (a + b) on the log scale
      w[k] = 1.0 / (1.0 + std::exp(b - a));
   }
   return w;
}

void PoissonAdmixture::em_step(const Vector& x, Vector& out) const
{
   const auto w = posterior_weights(x);
   double n1 = 0.0;
   double n2 = 0.0;
   double s1 = 0.0;
   double s2 = 0.0;
   double total = 0.0;
   for (std::size_t k = 0; k < w.size(); ++k) {
      const double y = kFrequencies[k];
      const double kk = static_cast<double>(k);
      n1 += y * w[k];
      n2 += y * (1.0 - w[k]);
      s1 += y * kk * w[k];
      s2 += y * kk * (1.0 - w[k]);
      total += y;
   }
   if (!(n1 > 0.0) || !(n2 > 0.0)) {
      throw DomainError("a mixture component has no posterior mass");
   }
   out.resize(3);
   out[0] = s1 / n1;
   out[1] = s2 / n2;
   out[2] = n1 / total;
}

double PoissonAdmixture::negative_log_likelihood(const Vector& x) const
{
   check_admixture_point(x);
   double nll = 0.0;
   for (std::size_t k = 0; k < kFrequencies.size(); ++k) {
      const double a = std::log(x[2]) + log_poisson(x[0], k);
      const double b = std::log1p(-x[2]) + log_poisson(x[1], k);
      const double hi = std::max(a, b);
      nll -= kFrequencies[k] * (hi + std::log(std::exp(a - hi) + std::exp(b - hi)));
   }
   return nll;
}

Mapping PoissonAdmixture::mapping() const
{
   Mapping m;
   m.dim = 3;
   m.apply = [self = *this](const Vector& x, Vector& fx) { self.em_step(x, fx); };
   m.objective = [self = *this](const Vector& x) { return self.negative_log_likelihood(x); };
   return m;
}

BoxBounds PoissonAdmixture::bounds(double omega)
{
   const double inf = std::numeric_limits<double>::infinity();
   return BoxBounds(Vector::Zero(3), Vector{{inf, inf, 1.0}}, omega);
}

Vector PoissonAdmixture::random_start(std::uint64_t seed)
{
   Rng rng(seed);
   Vector x(3);
   x[0] = rng.uniform(0.0, 20.0);
   x[1] = rng.uniform(0.0, 20.0);
   x[2] = rng.uniform(0.05, 0.95);
   // A zero mean would sit on the boundary; redraw it.
   while (!(x[0] > 0.0)) {
      x[0] = rng.uniform(0.0, 20.0);
   }
   while (!(x[1] > 0.0)) {
      x[1] = rng.uniform(0.0, 20.0);
   }
   return x;
}

double PoissonAdmixture::sample_mean()
{
   double s = 0.0;
   double total = 0.0;
   for (std::size_t k = 0; k < kFrequencies.size(); ++k) {
      s += static_cast<double>(k) * kFrequencies[k];
      total += kFrequencies[k];
   }
   return s / total;
}

// Power method ----------------------------------------------------------------

PowerMethod power_method(SparseMatrix q)
{
   if (q.rows() == 0 || q.rows() != q.cols()) {
      throw ConfigError("power method needs a non-empty square matrix");
   }
   q.makeCompressed();
   return PowerMethod{std::make_shared<const SparseMatrix>(std::move(q))};
}

Mapping PowerMethod::mapping() const
{
   Mapping m;
   m.dim = static_cast<std::size_t>(matrix->rows());
   m.apply = [q = matrix](const Vector& x, Vector& fx) {
      fx.noalias() = *q * x;
      const double scale = fx.lpNorm<Eigen::Infinity>();
      if (!(scale > 0.0)) {
         throw ZeroVector("power iteration reached the zero vector");
      }
      fx /= scale;
   };
   return m;
}

double PowerMethod::rayleigh(const Vector& x) const
{
   return x.dot(*matrix * x) / x.squaredNorm();
}

double PowerMethod::eigen_residual(const Vector& x) const
{
   const Vector qx = *matrix * x;
   const double lambda = x.dot(qx) / x.squaredNorm();
   return (qx - lambda * x).lpNorm<Eigen::Infinity>();
}

SparseMatrix random_symmetric_matrix(std::size_t n, double density, double diagonal_max,
                                     std::uint64_t seed)
{
   if (n == 0 || !(density >= 0.0 && density <= 1.0) || !(diagonal_max >= 0.0)) {
      throw ConfigError("random matrix needs n > 0, density in [0, 1], diagonal_max >= 0");
   }
   Rng rng(seed);
   const auto dim = static_cast<Eigen::Index>(n);
   std::vector<Eigen::Triplet<double>> entries;
   entries.reserve(static_cast<std::size_t>(density * static_cast<double>(n * n)) + n);
   for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i + 1; j < dim; ++j) {
         if (rng.bernoulli(density)) {
            const double v = rng.uniform();
            entries.emplace_back(i, j, v);
            entries.emplace_back(j, i, v);
         }
      }
   }
   for (Eigen::Index i = 0; i < dim; ++i) {
      entries.emplace_back(i, i, rng.uniform(0.0, diagonal_max));
   }
   SparseMatrix q(dim, dim);
   q.setFromTriplets(entries.begin(), entries.end());
   return q;
}

// Fixed effects ---------------------------------------------------------------

FixedEffectsPanel::FixedEffectsPanel(std::vector<std::vector<int>> groups_,
                                     std::vector<int> group_counts)
    : groups(std::move(groups_))
{
   if (groups.empty() || groups.size() != group_counts.size()) {
      throw ConfigError("panel needs one group count per factor");
   }
   const std::size_t n = groups.front().size();
   if (n == 0) {
      throw ConfigError("panel needs at least one observation");
   }
   inverse_sizes.resize(groups.size());
   for (std::size_t f = 0; f < groups.size(); ++f) {
      if (groups[f].size() != n) {
         throw ConfigError("every factor must assign every observation");
      }
      if (group_counts[f] <= 0) {
         throw ConfigError("group counts must be positive");
      }
      std::vector<double> sizes(static_cast<std::size_t>(group_counts[f]), 0.0);
      for (int g : groups[f]) {
         if (g < 0 || g >= group_counts[f]) {
            throw ConfigError("group index out of range");
         }
         sizes[static_cast<std::size_t>(g)] += 1.0;
      }
      for (double& s : sizes) {
         s = s > 0.0 ? 1.0 / s : 0.0;
      }
      inverse_sizes[f] = std::move(sizes);
   }
}

std::vector<double> FixedEffectsPanel::group_sums(const Vector& v, std::size_t factor) const
{
   std::vector<double> sums(group_count(factor), 0.0);
   const auto& g = groups[factor];
   for (std::size_t i = 0; i < g.size(); ++i) {
      sums[static_cast<std::size_t>(g[i])] += v[static_cast<Eigen::Index>(i)];
   }
   return sums;
}

void FixedEffectsPanel::demean(Vector& v, std::size_t factor) const
{
   std::vector<double> means = group_sums(v, factor);
   const auto& inv = inverse_sizes[factor];
   for (std::size_t k = 0; k < means.size(); ++k) {
      means[k] *= inv[k];
   }
   const auto& g = groups[factor];
   for (std::size_t i = 0; i < g.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] -= means[static_cast<std::size_t>(g[i])];
   }
}

FixedEffectsPanel synthetic_panel(std::size_t observations, std::vector<int> group_counts,
                                  double locality, std::uint64_t seed)
{
   if (group_counts.size() != 2) {
      throw ConfigError("synthetic panel has exactly two factors");
   }
   if (!(locality >= 0.0 && locality <= 1.0)) {
      throw ConfigError("locality must lie in [0, 1]");
   }
   const int g1 = group_counts[0];
   const int g2 = group_counts[1];
   if (g1 <= 0 || g2 <= 0 || observations == 0) {
      throw ConfigError("panel needs observations and positive group counts");
   }
   Rng rng(seed);
   std::vector<std::vector<int>> groups(2, std::vector<int>(observations));
   for (std::size_t i = 0; i < observations; ++i) {
      const int a = static_cast<int>(rng.index(static_cast<std::uint64_t>(g1)));
      groups[0][i] = a;
      if (rng.bernoulli(locality)) {
         const long centre = static_cast<long>(a) * g2 / g1;
         const long offset = static_cast<long>(rng.index(5)) - 2;
         groups[1][i] = static_cast<int>(((centre + offset) % g2 + g2) % g2);
      } else {
         groups[1][i] = static_cast<int>(rng.index(static_cast<std::uint64_t>(g2)));
      }
   }
   return FixedEffectsPanel(std::move(groups), std::move(group_counts));
}

Mapping alternating_projections(std::shared_ptr<const FixedEffectsPanel> panel)
{
   Mapping m;
   m.dim = panel->observations();
   m.apply = [panel](const Vector& x, Vector& fx) {
      fx = x;
      for (std::size_t f = 0; f < panel->factors(); ++f) {
         panel->demean(fx, f);
      }
   };
   // Squared distance to the origin; projections never increase it.
   m.objective = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
   return m;
}

}  // namespace acx

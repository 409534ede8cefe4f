#ifndef ACX_PROBLEMS_HPP
#define ACX_PROBLEMS_HPP

#include "acx/descent.hpp"
#include "acx/solver.hpp"
#include "acx/types.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace acx {

/// f(x) = 1/2 x'Ax - x'b with A = diag(eigenvalues).
struct LinearQuadratic {
   Vector eigenvalues;
   Vector b;

   DescentProblem descent() const;
   /// F(x) = x - (Ax - b), with the quadratic as objective.
   Mapping mapping() const;
   Vector solution() const;
   double objective(const Vector& x) const;
   /// sqrt(e' A^{-1} e)
   double inverse_norm(const Vector& e) const;
};

LinearQuadratic linear_quadratic(Vector eigenvalues, Vector b);

/// Extended Rosenbrock: sum over pairs of 100 (x_{2i-1}^2 - x_{2i})^2 + (x_{2i-1} - 1)^2.
/// n must be even and >= 2.
DescentProblem rosenbrock(std::size_t n);

/// Negative log-likelihood of a logistic model on simulated data: an
/// intercept column plus U[-1,1] covariates, U[-1,1] true coefficients and
/// y ~ Bernoulli(logistic(X beta_true)).
struct LogisticRegression {
   Eigen::MatrixXd design;
   Vector response;
   Vector beta_true;

   double objective(const Vector& beta) const;
   void gradient(const Vector& beta, Vector& grad) const;
   DescentProblem problem() const;
};

LogisticRegression logistic_regression(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Two-component Poisson mixture fitted by EM to the London Times
/// death-notice counts. Parameter vector: (mu1, mu2, pi).
class PoissonAdmixture {
public:
   static constexpr std::array<double, 10> kFrequencies{162, 267, 271, 185, 111,
                                                       61,  27,  8,   3,   1};

   /// One EM update. Throws DomainError unless mu1, mu2 > 0 and 0 < pi < 1.
   void em_step(const Vector& x, Vector& out) const;
   /// Posterior probability of component 1 for each count.
   std::array<double, 10> posterior_weights(const Vector& x) const;
   double negative_log_likelihood(const Vector& x) const;

   Mapping mapping() const;
   /// mu_i >= 0 and pi in [0, 1].
   static BoxBounds bounds(double omega);
   /// pi ~ U[0.05, 0.95], mu_i ~ U[0, 20].
   static Vector random_start(std::uint64_t seed);
   static double sample_mean();
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Qx = 0 in the power iteration.
class ZeroVector : public MappingFailure {
public:
   using MappingFailure::MappingFailure;
};

/// x -> Qx / ||Qx||_inf
struct PowerMethod {
   std::shared_ptr<const SparseMatrix> matrix;

   Mapping mapping() const;
   double rayleigh(const Vector& x) const;
   /// ||Qx - rayleigh(x) x||_inf
   double eigen_residual(const Vector& x) const;
};

PowerMethod power_method(SparseMatrix q);

/// Symmetric n x n matrix: off-diagonal entries present with probability
/// `density`, values U[0,1]; U[0, diagonal_max] added to the diagonal.
SparseMatrix random_symmetric_matrix(std::size_t n, double density, double diagonal_max,
                                     std::uint64_t seed);

/// Observations assigned to one group per factor.
struct FixedEffectsPanel {
   std::vector<std::vector<int>> groups;       ///< groups[factor][observation]
   std::vector<std::vector<double>> inverse_sizes;  ///< 1 / group size, 0 for empty groups

   FixedEffectsPanel(std::vector<std::vector<int>> groups, std::vector<int> group_counts);

   std::size_t observations() const { return groups.empty() ? 0 : groups.front().size(); }
   std::size_t factors() const { return groups.size(); }
   std::size_t group_count(std::size_t factor) const { return inverse_sizes[factor].size(); }

   /// Subtracts group means of one factor in place.
   void demean(Vector& v, std::size_t factor) const;
   std::vector<double> group_sums(const Vector& v, std::size_t factor) const;
};

/// Unbalanced two-factor panel. With probability `locality` an observation's
/// second-factor group sits within two groups of the position matching its
/// first-factor group, otherwise it is uniform. Locality near 1 makes the
/// factors nearly collinear and plain alternating projections slow.
FixedEffectsPanel synthetic_panel(std::size_t observations, std::vector<int> group_counts,
                                  double locality, std::uint64_t seed);

/// One sweep of group demeaning against every factor in order.
Mapping alternating_projections(std::shared_ptr<const FixedEffectsPanel> panel);

}  // namespace acx

#endif  // ACX_PROBLEMS_HPP

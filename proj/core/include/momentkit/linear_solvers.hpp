#pragma once

#include <string_view>
#include <vector>

namespace momentkit {

// Dense row-major matrix as a list of rows.
using DenseRows = std::vector<std::vector<double>>;

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view lp_status_name(LpStatus s) noexcept;

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  double phase1_objective = 0.0;  // scaled infeasibility left after phase 1
  int iterations = 0;
};

// minimize cost . x subject to A x = b, x >= 0, by the two-phase tableau
// simplex with Bland's rule. The optimum returned is a basic solution, so it
// has at most rank(A) nonzeros.
LpResult simplex_solve(const DenseRows& A, const std::vector<double>& b, const std::vector<double>& cost,
                       double tol = 1e-10);

struct NnlsResult {
  std::vector<double> x;
  double residual_norm = 0.0;
  int iterations = 0;
};

// Lawson-Hanson active set: minimize |A x - b|_2 subject to x >= 0.
NnlsResult nnls(const DenseRows& A, const std::vector<double>& b, int max_iterations = 0);

struct LeastSquaresResult {
  std::vector<double> x;
  double condition = 1.0;  // of the normal matrix
  bool ridge = false;      // ridge regularization was applied
};

// Normal equations, with ridge * trace/cols added when the normal matrix is
// near singular (condition above cond_limit).
LeastSquaresResult least_squares(const DenseRows& A, const std::vector<double>& b, double ridge = 1e-12,
                                 double cond_limit = 1e12);

}  // namespace momentkit

#include "momentkit/linear_solvers.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "momentkit/error.hpp"

namespace momentkit {

namespace {

Eigen::MatrixXd to_eigen(const DenseRows& A, std::size_t cols) {
  Eigen::MatrixXd M(static_cast<Eigen::Index>(A.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].size() != cols) raise(ErrorCode::kDimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A[i][j];
  }
  return M;
}

std::size_t column_count(const DenseRows& A) { return A.empty() ? 0 : A.front().size(); }

class Tableau {
 public:
  // T = [A | I | b] with artificial columns cols..cols+rows-1 basic.
  Tableau(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol)
      : m_(A.rows()), n_(A.cols()), tol_(tol), T_(A.rows(), A.cols() + A.rows() + 1), basis_(A.rows()) {
    T_.setZero();
    T_.leftCols(n_) = A;
    T_.block(0, n_, m_, m_).setIdentity();
    T_.col(n_ + m_) = b;
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  // Minimizes cost over the columns with allowed[j] true. Returns false if unbounded.
  bool optimize(const Eigen::VectorXd& cost, const std::vector<bool>& allowed, int& iterations, int limit,
                bool& hit_limit) {
    const Eigen::Index total = n_ + m_;
    for (;;) {
      if (iterations >= limit) {
        hit_limit = true;
        return true;
      }
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < total; ++j) {
        if (!allowed[static_cast<std::size_t>(j)] || is_basic(j)) continue;
        double r = cost(j);
        for (Eigen::Index i = 0; i < m_; ++i) r -= cost(basis_[i]) * T_(i, j);
        if (r < -tol_) {
          enter = j;  // Bland: smallest index
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double a = T_(i, enter);
        if (a <= tol_) continue;
        const double ratio = T_(i, total) / a;
        if (leave < 0 || ratio < best - tol_ || (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      ++iterations;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    T_.row(row) /= T_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i != row && T_(i, col) != 0.0) T_.row(i) -= T_(i, col) * T_.row(row);
    }
    basis_[row] = col;
  }

  bool is_basic(Eigen::Index j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  // Pivots artificial variables out of the basis where an original column allows it.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (!is_basic(j) && std::abs(T_(i, j)) > tol_) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double objective(const Eigen::VectorXd& cost) const {
    double z = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) z += cost(basis_[i]) * T_(i, n_ + m_);
    return z;
  }

  std::vector<double> solution() const {
    std::vector<double> x(static_cast<std::size_t>(n_), 0.0);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[static_cast<std::size_t>(basis_[i])] = std::max(0.0, T_(i, n_ + m_));
    }
    return x;
  }

 private:
  Eigen::Index m_, n_;
  double tol_;
  Eigen::MatrixXd T_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

std::string_view lp_status_name(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

LpResult simplex_solve(const DenseRows& A, const std::vector<double>& b, const std::vector<double>& cost, double tol) {
  const std::size_t n = column_count(A);
  if (b.size() != A.size() || cost.size() != n) raise(ErrorCode::kDimensionMismatch, "LP shapes disagree");
  Eigen::MatrixXd M = to_eigen(A, n);
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const auto m = M.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    double scale = std::max(M.row(i).cwiseAbs().maxCoeff(), std::abs(rhs(i)));
    if (scale == 0.0) scale = 1.0;
    if (rhs(i) < 0.0) scale = -scale;
    M.row(i) /= scale;
    rhs(i) /= scale;
  }

  LpResult out;
  Tableau t(M, rhs, tol);
  const auto total = static_cast<std::size_t>(M.cols() + m);
  const int limit = 50 * static_cast<int>(total) + 1000;
  bool hit_limit = false;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  phase1.tail(m).setOnes();
  std::vector<bool> allowed(total, true);
  t.optimize(phase1, allowed, out.iterations, limit, hit_limit);
  out.phase1_objective = t.objective(phase1);
  if (hit_limit) {
    out.status = LpStatus::kIterationLimit;
    return out;
  }
  if (out.phase1_objective > tol * static_cast<double>(std::max<Eigen::Index>(m, 1)) * 10.0) {
    out.status = LpStatus::kInfeasible;
    return out;
  }
  t.drive_out_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t j = 0; j < n; ++j) phase2(static_cast<Eigen::Index>(j)) = cost[j];
  for (std::size_t j = n; j < total; ++j) allowed[j] = false;
  if (!t.optimize(phase2, allowed, out.iterations, limit, hit_limit)) {
    out.status = LpStatus::kUnbounded;
    return out;
  }
  out.status = hit_limit ? LpStatus::kIterationLimit : LpStatus::kOptimal;
  out.x = t.solution();
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += cost[j] * out.x[j];
  return out;
}

NnlsResult nnls(const DenseRows& A, const std::vector<double>& b, int max_iterations) {
  const std::size_t n = column_count(A);
  if (b.size() != A.size()) raise(ErrorCode::kDimensionMismatch, "NNLS shapes disagree");
  const Eigen::MatrixXd M = to_eigen(A, n);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const auto N = static_cast<Eigen::Index>(n);
  if (max_iterations <= 0) max_iterations = 3 * static_cast<int>(n) + 30;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(N);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()) * std::max(1.0, rhs.cwiseAbs().maxCoeff());

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < N; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    z = Eigen::VectorXd::Zero(N);
    if (idx.empty()) return;
    Eigen::MatrixXd P(M.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) P.col(static_cast<Eigen::Index>(k)) = M.col(idx[k]);
    const Eigen::VectorXd zp = P.colPivHouseholderQr().solve(rhs);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  NnlsResult out;
  for (;;) {
    const Eigen::VectorXd w = M.transpose() * (rhs - M * x);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < N; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0 || out.iterations >= max_iterations) break;
    passive[static_cast<std::size_t>(enter)] = true;
    ++out.iterations;

    Eigen::VectorXd z;
    for (int inner = 0; inner < 3 * static_cast<int>(n) + 3; ++inner) {
      solve_passive(z);
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < N; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          feasible = false;
          const double denom = x(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      if (feasible) break;
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < N; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    for (Eigen::Index j = 0; j < N; ++j) x(j) = passive[static_cast<std::size_t>(j)] ? std::max(0.0, z(j)) : 0.0;
  }
  out.x.assign(x.data(), x.data() + N);
  out.residual_norm = (M * x - rhs).norm();
  return out;
}

LeastSquaresResult least_squares(const DenseRows& A, const std::vector<double>& b, double ridge, double cond_limit) {
  const std::size_t n = column_count(A);
  if (b.size() != A.size()) raise(ErrorCode::kDimensionMismatch, "least-squares shapes disagree");
  const Eigen::MatrixXd M = to_eigen(A, n);
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::MatrixXd G = M.transpose() * M;
  const Eigen::VectorXd g = M.transpose() * rhs;

  LeastSquaresResult out;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (out.condition > cond_limit) {
    const double shift = ridge * std::max(G.trace() / static_cast<double>(std::max<std::size_t>(n, 1)), 1e-300);
    G.diagonal().array() += shift;
    out.ridge = true;
  }
  const Eigen::VectorXd x = G.ldlt().solve(g);
  out.x.assign(x.data(), x.data() + x.size());
  return out;
}

}  // namespace momentkit

#pragma once

#include <Eigen/Cholesky>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lprec/types.hpp"

namespace lprec {

struct SolveOptions {
  double p = 1.0;                    // quasinorm exponent, (0, 1]
  std::optional<double> eps0;        // smoothing start; default max|y0| or 1
  double eps_decay = 0.99;
  double eps_min = 1e-9;
  int max_outer = 3000;
  int max_inner = 200;
  double grad_tol = 1e-8;
  double step_init = 1.0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  std::uint64_t seed = 0;            // drives optional randomized restarts
  int restarts = 1;                  // 1 = deterministic single start
  bool record_history = false;
};

struct HistoryEntry {
  double eps = 0.0;
  double objective = 0.0;  // smoothed objective at the end of the stage
  double residual = 0.0;
};

struct SolveReport {
  Vector solution;
  double objective_p = 0.0;   // quasinorm(solution, p)
  double residual_l2 = 0.0;   // ||A solution - b||_2
  int outer_iters = 0;
  int inner_iters_total = 0;
  double eps_final = 0.0;
  bool converged = false;
  std::vector<HistoryEntry> history;  // filled when record_history is set
};

std::string to_json(const SolveReport& r);
std::string history_csv(const SolveReport& r);

// f_eps(y) = sum_i (y_i^2 + eps^2)^(p/2). Decreases to ||y||_p^p as
// eps -> 0, and never undershoots it: ||y||_p^p <= f_eps(y) <= ||y||_p^p
// + N eps^p.
double smoothed_objective(const Vector& y, double eps, double p);

// Gradient of f_eps: component i is p y_i (y_i^2 + eps^2)^(p/2-1).
Vector smoothed_gradient(const Vector& y, double eps, double p);

// Euclidean projection onto {y : Ay = b}. Factorizes A A^T once; reuse one
// instance for repeated projections against the same A.
class AffineProjector {
 public:
  explicit AffineProjector(const MeasurementMatrix& A);

  // z - A^T (A A^T)^{-1} (A z - b)
  Vector project(const Vector& z, const Vector& b) const;
  // z - A^T (A A^T)^{-1} A z, the orthogonal projection onto the null space
  Vector null_project(const Vector& z) const;
  // A^T (A A^T)^{-1} b, the least-norm solution of Ay = b
  Vector min_norm_point(const Vector& b) const;

  const Matrix& matrix() const { return A_; }

 private:
  Matrix A_;
  Eigen::LLT<Matrix> llt_;
};

Vector project_affine(const Vector& z, const MeasurementMatrix& A,
                      const Vector& b);

// Sparsest consistent solution by brute force: supports of size 0..S_max in
// increasing size, lexicographic within a size, least squares on each.
// Returns the first support size whose best residual meets res_tol; if none
// does, returns the least-residual candidate overall and clears *met_tol.
// Guards keep the enumeration tractable.
Vector decode_l0_oracle(const MeasurementMatrix& A, const Vector& b,
                        Index S_max, double res_tol,
                        bool* met_tol = nullptr, Index n_guard = 25,
                        Index s_guard = 4);

// min ||y||_p s.t. Ay = b, by smoothed continuation: minimize f_eps over
// the affine set with projected-gradient/Armijo steps, shrinking eps by
// eps_decay per stage until eps_min. converged means every stage met
// grad_tol and the schedule ran to completion.
SolveReport decode_lp(const MeasurementMatrix& A, const Vector& b,
                      const SolveOptions& opts);

// min ||y||_p s.t. ||Ay - b||_2 <= eps_noise, via the penalty path
// f_eps(y) + ||Ay - b||^2 / (2 mu) with mu bisected (at most 40 solves)
// until the residual lands in [0.9, 1.0] * eps_noise. ||b|| <= eps_noise
// short-circuits to the zero vector; eps_noise = 0 delegates to decode_lp.
SolveReport decode_lp_eps(const MeasurementMatrix& A, const Vector& b,
                          double eps_noise, const SolveOptions& opts);

// Same continuation loop with the inner minimizer swapped for reweighted
// least squares: y <- D A^T (A D A^T)^{-1} b, D = diag((y_i^2+eps^2)^(1-p/2)).
SolveReport decode_irls(const MeasurementMatrix& A, const Vector& b,
                        const SolveOptions& opts);

}  // namespace lprec

#include "lprec/decode.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <utility>

#include "lprec/metrics.hpp"
#include "lprec/reports.hpp"
#include "lprec/rng.hpp"

namespace lprec {

namespace {

void check_p01(double p) {
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("p must lie in (0, 1]");
}

void check_opts(const SolveOptions& o) {
  check_p01(o.p);
  if (o.eps0 && !(*o.eps0 > 0.0)) {
    throw InvalidArgument("eps0 must be positive");
  }
  if (!(o.eps_decay > 0.0) || !(o.eps_decay < 1.0)) {
    throw InvalidArgument("eps_decay must lie in (0, 1)");
  }
  if (!(o.eps_min > 0.0)) throw InvalidArgument("eps_min must be positive");
  if (o.max_outer < 1 || o.max_inner < 1) {
    throw InvalidArgument("iteration limits must be positive");
  }
  if (!(o.grad_tol > 0.0)) throw InvalidArgument("grad_tol must be positive");
  if (!(o.step_init > 0.0)) throw InvalidArgument("step_init must be positive");
  if (!(o.backtrack > 0.0) || !(o.backtrack < 1.0)) {
    throw InvalidArgument("backtrack must lie in (0, 1)");
  }
  if (!(o.armijo > 0.0) || !(o.armijo < 1.0)) {
    throw InvalidArgument("armijo must lie in (0, 1)");
  }
  if (o.restarts < 1) throw InvalidArgument("restarts must be positive");
}

double default_eps0(const Vector& y0) {
  const double m = y0.size() ? y0.cwiseAbs().maxCoeff() : 0.0;
  return m > 0.0 ? m : 1.0;
}

// Smallest step the backtracking line search will try before giving up on
// the current smoothing stage.
constexpr double kStepFloor = 1e-20;

}  // namespace

double smoothed_objective(const Vector& y, double eps, double p) {
  check_p01(p);
  if (eps < 0.0) throw InvalidArgument("eps must be nonnegative");
  const double e2 = eps * eps;
  const Index n = y.size();
  double s = 0.0;
  if (p == 1.0) {
    for (Index i = 0; i < n; ++i) s += std::sqrt(y[i] * y[i] + e2);
  } else if (p == 0.5) {
    for (Index i = 0; i < n; ++i) {
      s += std::sqrt(std::sqrt(y[i] * y[i] + e2));
    }
  } else {
    const double h = 0.5 * p;
    for (Index i = 0; i < n; ++i) s += std::pow(y[i] * y[i] + e2, h);
  }
  return s;
}

Vector smoothed_gradient(const Vector& y, double eps, double p) {
  check_p01(p);
  if (eps < 0.0) throw InvalidArgument("eps must be nonnegative");
  const double e2 = eps * eps;
  const Index n = y.size();
  Vector g(n);
  if (p == 1.0) {
    for (Index i = 0; i < n; ++i) {
      const double u = y[i] * y[i] + e2;
      g[i] = u == 0.0 ? 0.0 : y[i] / std::sqrt(u);
    }
  } else if (p == 0.5) {
    for (Index i = 0; i < n; ++i) {
      const double u = y[i] * y[i] + e2;
      g[i] = u == 0.0 ? 0.0
                      : 0.5 * y[i] / (std::sqrt(u) * std::sqrt(std::sqrt(u)));
    }
  } else {
    const double h = 0.5 * p;
    for (Index i = 0; i < n; ++i) {
      const double u = y[i] * y[i] + e2;
      g[i] = u == 0.0 ? 0.0 : p * y[i] * std::pow(u, h - 1.0);
    }
  }
  return g;
}

AffineProjector::AffineProjector(const MeasurementMatrix& A) : A_(A.entries) {
  if (A_.rows() < 1 || A_.cols() < 1) {
    throw InvalidArgument("projector needs a nonempty matrix");
  }
  Matrix gram = A_ * A_.transpose();
  llt_.compute(gram);
  if (llt_.info() != Eigen::Success || llt_.rcond() < 1e-12) {
    throw NumericError(
        "A A^T is singular to working precision; affine projection "
        "undefined");
  }
}

Vector AffineProjector::project(const Vector& z, const Vector& b) const {
  if (z.size() != A_.cols() || b.size() != A_.rows()) {
    throw InvalidArgument("projection dimension mismatch");
  }
  return z - A_.transpose() * llt_.solve(A_ * z - b);
}

Vector AffineProjector::null_project(const Vector& z) const {
  if (z.size() != A_.cols()) {
    throw InvalidArgument("projection dimension mismatch");
  }
  return z - A_.transpose() * llt_.solve(A_ * z);
}

Vector AffineProjector::min_norm_point(const Vector& b) const {
  if (b.size() != A_.rows()) {
    throw InvalidArgument("projection dimension mismatch");
  }
  return A_.transpose() * llt_.solve(b);
}

Vector project_affine(const Vector& z, const MeasurementMatrix& A,
                      const Vector& b) {
  return AffineProjector(A).project(z, b);
}

Vector decode_l0_oracle(const MeasurementMatrix& A, const Vector& b,
                        Index S_max, double res_tol, bool* met_tol,
                        Index n_guard, Index s_guard) {
  const Index M = A.rows(), N = A.cols();
  if (b.size() != M) throw InvalidArgument("dimension mismatch");
  if (S_max < 1) throw InvalidArgument("S_max must be positive");
  if (!(res_tol > 0.0)) throw InvalidArgument("res_tol must be positive");
  if (N > n_guard || S_max > s_guard) {
    throw InvalidArgument(
        "instance exceeds the exhaustive enumeration guard");
  }
  S_max = std::min(S_max, N);

  Vector best_x = Vector::Zero(N);
  double best_res = b.norm();
  if (best_res <= res_tol) {
    if (met_tol) *met_tol = true;
    return best_x;
  }

  for (Index s = 1; s <= S_max; ++s) {
    std::vector<Index> support(static_cast<std::size_t>(s));
    for (Index k = 0; k < s; ++k) support[static_cast<std::size_t>(k)] = k;

    double size_best_res = std::numeric_limits<double>::infinity();
    Vector size_best_x;
    for (;;) {
      Matrix sub(M, s);
      for (Index k = 0; k < s; ++k) {
        sub.col(k) = A.entries.col(support[static_cast<std::size_t>(k)]);
      }
      Vector coef = sub.colPivHouseholderQr().solve(b);
      const double res = (sub * coef - b).norm();
      // strict improvement keeps the lexicographically first support on ties
      if (res < size_best_res) {
        size_best_res = res;
        size_best_x = Vector::Zero(N);
        for (Index k = 0; k < s; ++k) {
          size_best_x[support[static_cast<std::size_t>(k)]] = coef[k];
        }
      }

      Index k = s - 1;
      while (k >= 0 && support[static_cast<std::size_t>(k)] == N - s + k) --k;
      if (k < 0) break;
      ++support[static_cast<std::size_t>(k)];
      for (Index j = k + 1; j < s; ++j) {
        support[static_cast<std::size_t>(j)] =
            support[static_cast<std::size_t>(j - 1)] + 1;
      }
    }

    if (size_best_res <= res_tol) {
      if (met_tol) *met_tol = true;
      return size_best_x;
    }
    if (size_best_res < best_res) {
      best_res = size_best_res;
      best_x = size_best_x;
    }
  }

  if (met_tol) *met_tol = false;
  return best_x;
}

namespace {

// Equality-constrained continuation from a given start. Candidates
// y + t*d keep Ay = b exactly because d is null-space projected; this is
// the same point as projecting y - t*grad onto the constraint, with one
// projection per iteration instead of one per candidate.
SolveReport continuation_equality(const AffineProjector& proj, const Vector& b,
                                  const SolveOptions& o, const Vector& start) {
  SolveReport rep;
  Vector y = proj.project(start, b);
  double eps = o.eps0 ? *o.eps0 : default_eps0(y);

  double step = o.step_init;
  bool all_met = true;
  int outer = 0;
  int inner_total = 0;

  while (eps >= o.eps_min && outer < o.max_outer) {
    y = proj.project(y, b);
    double f = smoothed_objective(y, eps, o.p);
    bool met = false;
    for (int it = 0; it < o.max_inner; ++it) {
      Vector g = smoothed_gradient(y, eps, o.p);
      Vector d = -proj.null_project(g);
      const double gn2 = d.squaredNorm();
      if (std::sqrt(gn2) <= o.grad_tol * (1.0 + f)) {
        met = true;
        break;
      }
      ++inner_total;

      double t = step;
      bool accepted = false;
      Vector cand;
      double fc = 0.0;
      while (t > kStepFloor) {
        cand = y + t * d;
        fc = smoothed_objective(cand, eps, o.p);
        if (fc <= f - o.armijo * t * gn2) {
          accepted = true;
          break;
        }
        t *= o.backtrack;
      }
      if (!accepted) break;
      y = std::move(cand);
      f = fc;
      step = std::min(o.step_init, t / o.backtrack);
    }
    if (!std::isfinite(f)) {
      throw NumericError("divergence: smoothed objective is not finite");
    }
    if (!met) all_met = false;
    if (o.record_history) {
      rep.history.push_back({eps, f, (proj.matrix() * y - b).norm()});
    }
    ++outer;
    eps *= o.eps_decay;
  }

  y = proj.project(y, b);
  rep.solution = y;
  rep.objective_p = quasinorm(y, o.p);
  rep.residual_l2 = (proj.matrix() * y - b).norm();
  rep.outer_iters = outer;
  rep.inner_iters_total = inner_total;
  rep.eps_final = eps;
  rep.converged = all_met && eps < o.eps_min;
  return rep;
}

}  // namespace

SolveReport decode_lp(const MeasurementMatrix& A, const Vector& b,
                      const SolveOptions& opts) {
  check_opts(opts);
  if (b.size() != A.rows()) throw InvalidArgument("dimension mismatch");

  AffineProjector proj(A);
  const Vector y0 = proj.min_norm_point(b);
  SolveReport best = continuation_equality(proj, b, opts, y0);

  const double sigma = default_eps0(y0);
  for (int r = 1; r < opts.restarts; ++r) {
    SplitMix64 rng(derive_stream(opts.seed, static_cast<std::uint64_t>(r)));
    Vector noise(A.cols());
    for (Index i = 0; i < noise.size(); ++i) {
      noise[i] = sigma * rng.next_gaussian();
    }
    SolveReport cand = continuation_equality(proj, b, opts, y0 + noise);
    if (cand.objective_p < best.objective_p) best = std::move(cand);
  }
  return best;
}

SolveReport decode_irls(const MeasurementMatrix& A, const Vector& b,
                        const SolveOptions& opts) {
  check_opts(opts);
  if (b.size() != A.rows()) throw InvalidArgument("dimension mismatch");

  AffineProjector proj(A);
  SolveReport rep;
  Vector y = proj.min_norm_point(b);
  double eps = opts.eps0 ? *opts.eps0 : default_eps0(y);

  bool all_met = true;
  int outer = 0;
  int inner_total = 0;

  while (eps >= opts.eps_min && outer < opts.max_outer) {
    double f = smoothed_objective(y, eps, opts.p);
    bool met = false;
    for (int it = 0; it < opts.max_inner; ++it) {
      Vector g = smoothed_gradient(y, eps, opts.p);
      if (proj.null_project(g).norm() <= opts.grad_tol * (1.0 + f)) {
        met = true;
        break;
      }
      ++inner_total;

      // minimizer of sum w_i y_i^2 over {Ay=b}, w_i = (y_i^2+eps^2)^(p/2-1)
      Vector d = (y.array().square() + eps * eps).pow(1.0 - 0.5 * opts.p);
      Matrix ada = A.entries * d.asDiagonal() * A.entries.transpose();
      Eigen::LDLT<Matrix> ldlt(ada);
      if (ldlt.info() != Eigen::Success) break;
      Vector ynew = d.asDiagonal() * (A.entries.transpose() * ldlt.solve(b));
      if (!ynew.allFinite()) break;
      ynew = proj.project(ynew, b);
      const double fnew = smoothed_objective(ynew, eps, opts.p);
      if (fnew > f + 1e-6 * (1.0 + std::abs(f))) break;  // numerical stall
      y = std::move(ynew);
      f = fnew;
    }
    if (!std::isfinite(f)) {
      throw NumericError("divergence: smoothed objective is not finite");
    }
    if (!met) all_met = false;
    if (opts.record_history) {
      rep.history.push_back({eps, f, (proj.matrix() * y - b).norm()});
    }
    ++outer;
    eps *= opts.eps_decay;
  }

  y = proj.project(y, b);
  rep.solution = y;
  rep.objective_p = quasinorm(y, opts.p);
  rep.residual_l2 = (proj.matrix() * y - b).norm();
  rep.outer_iters = outer;
  rep.inner_iters_total = inner_total;
  rep.eps_final = eps;
  rep.converged = all_met && eps < opts.eps_min;
  return rep;
}

namespace {

// Unconstrained continuation on f_eps(y) + ||Ay-b||^2 / (2 mu).
SolveReport continuation_penalty(const Matrix& A, const Vector& b, double mu,
                                 const SolveOptions& o, const Vector& start) {
  SolveReport rep;
  Vector y = start;
  double eps = o.eps0 ? *o.eps0 : default_eps0(start);

  const double w = 1.0 / mu;
  auto value = [&](const Vector& v, double e, Vector& resid) {
    resid = A * v - b;
    return smoothed_objective(v, e, o.p) + 0.5 * w * resid.squaredNorm();
  };

  double step = o.step_init;
  bool all_met = true;
  int outer = 0;
  int inner_total = 0;
  Vector resid;

  while (eps >= o.eps_min && outer < o.max_outer) {
    double f = value(y, eps, resid);
    bool met = false;
    for (int it = 0; it < o.max_inner; ++it) {
      Vector g = smoothed_gradient(y, eps, o.p) + w * (A.transpose() * resid);
      const double gn2 = g.squaredNorm();
      if (std::sqrt(gn2) <= o.grad_tol * (1.0 + f)) {
        met = true;
        break;
      }
      ++inner_total;

      double t = step;
      bool accepted = false;
      Vector cand;
      Vector cand_resid;
      double fc = 0.0;
      while (t > kStepFloor) {
        cand = y - t * g;
        fc = value(cand, eps, cand_resid);
        if (fc <= f - o.armijo * t * gn2) {
          accepted = true;
          break;
        }
        t *= o.backtrack;
      }
      if (!accepted) break;
      y = std::move(cand);
      resid = std::move(cand_resid);
      f = fc;
      step = std::min(o.step_init, t / o.backtrack);
    }
    if (!std::isfinite(f)) {
      throw NumericError("divergence: penalty objective is not finite");
    }
    if (!met) all_met = false;
    if (o.record_history) {
      rep.history.push_back({eps, f, (A * y - b).norm()});
    }
    ++outer;
    eps *= o.eps_decay;
  }

  rep.solution = y;
  rep.objective_p = quasinorm(y, o.p);
  rep.residual_l2 = (A * y - b).norm();
  rep.outer_iters = outer;
  rep.inner_iters_total = inner_total;
  rep.eps_final = eps;
  rep.converged = all_met && eps < o.eps_min;
  return rep;
}

}  // namespace

SolveReport decode_lp_eps(const MeasurementMatrix& A, const Vector& b,
                          double eps_noise, const SolveOptions& opts) {
  check_opts(opts);
  if (b.size() != A.rows()) throw InvalidArgument("dimension mismatch");
  if (eps_noise < 0.0) throw InvalidArgument("eps_noise must be nonnegative");
  if (eps_noise == 0.0) return decode_lp(A, b, opts);

  if (b.norm() <= eps_noise) {
    SolveReport rep;
    rep.solution = Vector::Zero(A.cols());
    rep.objective_p = 0.0;
    rep.residual_l2 = b.norm();
    rep.converged = true;
    return rep;
  }

  AffineProjector proj(A);
  const Vector start = proj.min_norm_point(b);

  const double lo_target = 0.9 * eps_noise;
  const int max_solves = 40;
  int solves = 0;

  auto run = [&](double mu) {
    ++solves;
    return continuation_penalty(A.entries, b, mu, opts, start);
  };
  auto in_band = [&](const SolveReport& r) {
    return r.residual_l2 >= lo_target && r.residual_l2 <= eps_noise;
  };
  auto finish = [&](SolveReport r) {
    r.converged = r.converged && r.residual_l2 <= eps_noise;
    return r;
  };

  SolveReport best;  // least achieved residual, the fallback answer
  double best_res = std::numeric_limits<double>::infinity();
  auto remember = [&](const SolveReport& r) {
    if (r.residual_l2 < best_res) {
      best_res = r.residual_l2;
      best = r;
    }
  };

  // residual grows with mu: bracket the band, then bisect in log(mu)
  double mu = 1.0;
  SolveReport rep = run(mu);
  if (in_band(rep)) return finish(rep);
  remember(rep);

  double mu_lo = mu, mu_hi = mu;
  if (rep.residual_l2 > eps_noise) {
    while (solves < max_solves) {
      mu_lo /= 16.0;
      SolveReport r = run(mu_lo);
      if (in_band(r)) return finish(r);
      remember(r);
      if (r.residual_l2 < lo_target) break;
      mu_hi = mu_lo;
    }
  } else {
    while (solves < max_solves) {
      mu_hi *= 16.0;
      SolveReport r = run(mu_hi);
      if (in_band(r)) return finish(r);
      remember(r);
      if (r.residual_l2 > eps_noise) break;
      mu_lo = mu_hi;
    }
  }

  while (solves < max_solves) {
    const double mid = std::sqrt(mu_lo * mu_hi);
    SolveReport r = run(mid);
    if (in_band(r)) return finish(r);
    remember(r);
    if (r.residual_l2 > eps_noise) {
      mu_hi = mid;
    } else {
      mu_lo = mid;
    }
  }
  return finish(best);
}

std::string to_json(const SolveReport& r) {
  nlohmann::ordered_json j;
  j["solution"] = std::vector<double>(r.solution.data(),
                                      r.solution.data() + r.solution.size());
  j["objective_p"] = r.objective_p;
  j["residual_l2"] = r.residual_l2;
  j["outer_iters"] = r.outer_iters;
  j["inner_iters_total"] = r.inner_iters_total;
  j["eps_final"] = r.eps_final;
  j["converged"] = r.converged;
  if (!r.history.empty()) {
    nlohmann::ordered_json h = nlohmann::ordered_json::array();
    for (const auto& e : r.history) {
      h.push_back({{"eps", e.eps},
                   {"objective", e.objective},
                   {"residual", e.residual}});
    }
    j["history"] = std::move(h);
  }
  return j.dump();
}

std::string history_csv(const SolveReport& r) {
  std::string text = "eps,objective,residual\n";
  for (const auto& e : r.history) {
    text += format_double(e.eps);
    text += ',';
    text += format_double(e.objective);
    text += ',';
    text += format_double(e.residual);
    text += '\n';
  }
  return text;
}

}  // namespace lprec

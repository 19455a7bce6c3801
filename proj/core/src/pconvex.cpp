#include "lprec/pconvex.hpp"

#include <algorithm>
#include <cmath>

#include "lprec/certify.hpp"
#include "lprec/ensembles.hpp"
#include "lprec/metrics.hpp"
#include "lprec/parallel.hpp"
#include "lprec/reports.hpp"
#include "lprec/rng.hpp"

namespace lprec {

double gauge_bp(const Vector& x, double p) { return quasinorm(x, p); }

bool check_p_subadditivity(const Vector& x, const Vector& y, double p) {
  if (x.size() != y.size()) throw InvalidArgument("dimension mismatch");
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("p must lie in (0, 1]");
  return quasinorm_pow(x + y, p) <=
         quasinorm_pow(x, p) + quasinorm_pow(y, p) + 1e-10;
}

SignAssignment balance_signs(const std::vector<Vector>& points) {
  if (points.empty()) {
    throw InvalidArgument("balance_signs needs at least one vector");
  }
  const Index n = points.front().size();
  for (const auto& x : points) {
    if (x.size() != n) throw InvalidArgument("dimension mismatch");
  }

  SignAssignment out;
  out.signs.reserve(points.size());
  out.signs.push_back(1);
  Vector sum = points.front();
  for (std::size_t k = 1; k < points.size(); ++k) {
    // ||sum + s x||^2 differs between signs only through 2 s <sum, x>
    const int s = sum.dot(points[k]) > 0.0 ? -1 : 1;
    out.signs.push_back(s);
    sum += s * points[k];
  }
  out.achieved_norm = sum.norm();
  return out;
}

namespace {

// Per-direction minimal-quasinorm preimage norms, shared by lq_empirical
// and d1_gap_check.
std::vector<DirectionRecord> preimage_scan(const MeasurementMatrix& A,
                                           double p, Index directions,
                                           std::uint64_t seed,
                                           const SolveOptions& solver_opts,
                                           unsigned num_threads) {
  if (directions < 1) throw InvalidArgument("directions must be positive");
  const Index M = A.rows();
  SolveOptions opts = solver_opts;
  opts.p = p;

  std::vector<DirectionRecord> records(
      static_cast<std::size_t>(directions));
  parallel_for(
      static_cast<std::size_t>(directions),
      [&](std::size_t t) {
        SplitMix64 rng(derive_stream(seed, t));
        Vector u(M);
        double norm = 0.0;
        do {
          for (Index i = 0; i < M; ++i) u[i] = rng.next_gaussian();
          norm = u.norm();
        } while (norm == 0.0);
        u /= norm;
        try {
          SolveReport rep = decode_lp(A, u, opts);
          records[t].u_norm = u.norm();
          records[t].preimage_quasinorm = rep.objective_p;
        } catch (const std::exception& e) {
          throw NumericError("direction " + std::to_string(t) + ": " +
                             e.what());
        }
      },
      num_threads);
  return records;
}

double max_preimage(const std::vector<DirectionRecord>& records) {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.preimage_quasinorm);
  return m;
}

}  // namespace

LqEmpirical lq_empirical(const MeasurementMatrix& A, double p,
                         Index directions, std::uint64_t seed,
                         const SolveOptions& solver_opts,
                         unsigned num_threads) {
  LqEmpirical out;
  out.directions = directions;
  out.seed = seed;
  out.per_direction =
      preimage_scan(A, p, directions, seed, solver_opts, num_threads);
  const double worst = max_preimage(out.per_direction);
  if (!(worst > 0.0)) {
    throw NumericError("all sampled preimages have zero quasinorm");
  }
  out.alpha_hat = 1.0 / worst;
  return out;
}

std::string per_direction_csv(const LqEmpirical& e) {
  std::string text = "index,u_norm_check,preimage_quasinorm\n";
  for (std::size_t i = 0; i < e.per_direction.size(); ++i) {
    text += std::to_string(i);
    text += ',';
    text += format_double(e.per_direction[i].u_norm);
    text += ',';
    text += format_double(e.per_direction[i].preimage_quasinorm);
    text += '\n';
  }
  return text;
}

D1GapReport d1_gap_check(const MeasurementMatrix& A, double p,
                         Index directions, std::uint64_t seed,
                         const SolveOptions& solver_opts,
                         unsigned num_threads, double tol) {
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("p must lie in (0, 1]");

  double max_col = 0.0;
  for (Index j = 0; j < A.cols(); ++j) {
    max_col = std::max(max_col, A.entries.col(j).norm());
  }
  if (!(max_col > 0.0)) throw InvalidArgument("matrix is zero");
  MeasurementMatrix scaled = A;
  scaled.entries /= max_col;

  D1GapReport rep;
  rep.d1_p_hat = max_preimage(
      preimage_scan(scaled, p, directions, seed, solver_opts, num_threads));
  rep.d1_conv_hat = max_preimage(
      preimage_scan(scaled, 1.0, directions, seed, solver_opts, num_threads));
  rep.bound = constant_cp(p) * std::pow(rep.d1_conv_hat, 2.0 / p - 1.0);
  rep.violated = rep.d1_p_hat > rep.bound * (1.0 + tol);
  return rep;
}

}  // namespace lprec

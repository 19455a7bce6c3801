#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lprec/decode.hpp"
#include "lprec/types.hpp"

namespace lprec {

// Gauge of the unit p-ball, inf{t > 0 : x in t B_p}. Coincides with the
// p-quasinorm by homogeneity.
double gauge_bp(const Vector& x, double p);

// ||x+y||_p^p <= ||x||_p^p + ||y||_p^p holds for every p in (0,1]; this
// checks it with 1e-10 absolute slack as a harness primitive.
bool check_p_subadditivity(const Vector& x, const Vector& y, double p);

struct SignAssignment {
  std::vector<int> signs;  // entries are +1 or -1
  double achieved_norm = 0.0;
};

// Greedy signing: signs[0] = +1, then each sign minimizes the running sum's
// l2 norm. The parallelogram law gives achieved_norm^2 <= sum_i ||x_i||^2,
// so at most sqrt(m) for unit-ball inputs.
SignAssignment balance_signs(const std::vector<Vector>& points);

struct DirectionRecord {
  double u_norm = 0.0;             // should be 1 for sampled sphere points
  double preimage_quasinorm = 0.0; // ||decode_lp(A, u)||_p
};

struct LqEmpirical {
  double alpha_hat = 0.0;
  Index directions = 0;
  std::uint64_t seed = 0;
  std::vector<DirectionRecord> per_direction;
};

// Samples unit directions u in R^M (stream hash(seed, index) per direction),
// finds a minimal-quasinorm preimage of each with decode_lp, and returns
// alpha_hat = 1 / max_u ||yhat(u)||_p. Solver suboptimality inflates the
// preimage norms, so alpha_hat is a conservative containment estimate of
// the largest alpha with A(B_p) containing alpha B_2.
LqEmpirical lq_empirical(const MeasurementMatrix& A, double p,
                         Index directions, std::uint64_t seed,
                         const SolveOptions& solver_opts,
                         unsigned num_threads = 0);

std::string per_direction_csv(const LqEmpirical& e);

struct D1GapReport {
  double d1_conv_hat = 0.0;  // sampled d_1(A(B_1), B_2), l1 preimages
  double d1_p_hat = 0.0;     // sampled d_1(A(B_p), B_2), l^p preimages
  double bound = 0.0;        // C(p) * d1_conv_hat^(2/p - 1)
  bool violated = false;
};

// Consistency check of d_1(K, B_2) <= C(p) d_1(conv K, B_2)^(2/p-1) for
// K = A(B_p). A is rescaled by its max column norm so A(B_1) fits in B_2.
// Both estimates use the same sampled directions and are lower bounds of
// the true d_1 values; violated = d1_p_hat > bound * (1 + tol) would
// falsify the inequality, while false means consistent only.
D1GapReport d1_gap_check(const MeasurementMatrix& A, double p,
                         Index directions, std::uint64_t seed,
                         const SolveOptions& solver_opts,
                         unsigned num_threads = 0, double tol = 1e-6);

}  // namespace lprec

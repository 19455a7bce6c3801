#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lprec/rip.hpp"
#include "lprec/types.hpp"

namespace lprec {

// The recovery statements involve log(N/M) and log 2 without a stated base.
// Natural log is the default everywhere; base 2 is available for comparison.
enum class LogBase { kNatural, kBase2 };
inline constexpr LogBase kDefaultLogBase = LogBase::kNatural;

// Sufficient condition for every S-sparse vector to be the unique l^p
// minimizer: delta_kS + k^(2/p-1) * delta_(k+1)S < k^(2/p-1) - 1, strict.
bool check_condition_P(double delta_kS, double delta_k1S, double k, double p);

// Largest delta for which the symmetric condition delta_mS = delta with
// k = m - 1 still passes: f(m) = ((m-1)^(2/p-1) - 1) / ((m-1)^(2/p-1) + 1).
double threshold_f(double m, double p);

// Competing single-delta threshold g(m) =
// 4(sqrt(2)-1)(m/2)^(1/p-1/2) / (4(sqrt(2)-1)(m/2)^(1/p-1/2) + 2).
double threshold_g(double m, double p);

// Error-bound constants attached to condition P. Both share the denominator
// (1-delta_(k+1)S)^(p/2) - (1+delta_kS)^(p/2) * k^(p/2-1), which is positive
// exactly when the condition holds; otherwise these throw NumericError.
double constant_c1(double p, double k, double delta_kS, double delta_k1S);
double constant_c2(double p, double k, double delta_kS, double delta_k1S);

// Sparsity level recovered by the l^p decoder when the l^1 decoder handles
// S1: floor((k+1) / (k^(p/(2-p)) + 1) * S1). Requires k*S1 integral.
Index sparsity_transfer(Index S1, double k, double p);

// Null-space quotient constant C_{p,q}, 0 < p < 1 < q <= 2.
double constant_cpq(double p, double q, LogBase base = kDefaultLogBase);

// q = 2 specialization C(p); equals 1 at p = 1 where the general formula
// hits an indeterminate form.
double constant_cp(double p, LogBase base = kDefaultLogBase);

// alpha such that a Gaussian null space satisfies the l^p quotient property:
// (1/C(p)) * (mu^2 * log(N/M) / M)^(1/p-1/2), with mu in (0, 1/sqrt(2)).
double lq_alpha(Index M, Index N, double mu, double p,
                LogBase base = kDefaultLogBase);

struct IoConstants {
  double gamma_p = 0.0;  // mu^(2/p-1) / C(p)
  double C3 = 0.0;
  double C_case_i = 0.0;
  double C_case_iii = 0.0;
};

// Mixed-norm instance-optimality constants in terms of gamma_p:
//   C3         = 1/gamma + (gamma(1-delta) + 1) / ((1-delta^2) gamma)
//   C_case_i   = C3 + 2^(1/p-1) C2p (1/gamma + 1)
//   C_case_iii = 1 + C3 + 2^(1/p-1) C2p / gamma
IoConstants io_constants(double p, double delta, double mu, double C2p,
                         LogBase base = kDefaultLogBase);

struct Certificate {
  double p = 0.0;
  Index S = 0;
  double k = 0.0;  // ratio n/S of the examined condition, n integer
  double delta_kS = 0.0;
  double delta_k1S = 0.0;
  bool satisfied = false;
  std::optional<double> C1;
  std::optional<double> C2;
};

std::string to_json(const Certificate& c);

// Walks candidate ratios k = n/S for n = S+1, S+2, ... as far as the
// profile reaches, returning the first k that passes check_condition_P with
// C1/C2 filled in. When none passes, satisfied = false and the fields hold
// the largest k examined. Throws NumericError when the profile is too short
// to examine any k.
Certificate certify_recovery(
    const std::vector<std::pair<Index, double>>& delta_profile, Index S,
    double p);
Certificate certify_recovery(const std::vector<RipEstimate>& delta_profile,
                             Index S, double p);

}  // namespace lprec

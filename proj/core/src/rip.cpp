#include "lprec/rip.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <nlohmann/json.hpp>

#include "lprec/ensembles.hpp"
#include "lprec/parallel.hpp"
#include "lprec/rng.hpp"

namespace lprec {

namespace {

void check_s(const MeasurementMatrix& A, Index S) {
  const Index cap = std::min(A.rows(), A.cols());
  if (S < 1 || S > cap) {
    throw InvalidArgument("S must satisfy 1 <= S <= min(M, N)");
  }
}

// max(lambda_max - 1, 1 - lambda_min) of the S x S Gram of the selected
// columns, the tightest delta for this single support.
double gram_deviation(const Matrix& A, const std::vector<Index>& support) {
  const Index S = static_cast<Index>(support.size());
  Matrix sub(A.rows(), S);
  for (Index k = 0; k < S; ++k) {
    sub.col(k) = A.col(support[static_cast<std::size_t>(k)]);
  }
  Matrix gram = sub.transpose() * sub;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(ev[S - 1] - 1.0, 1.0 - ev[0]);
}

// C(N, S), saturating at cap + 1 to avoid overflow.
std::uint64_t binomial_capped(Index N, Index S, std::uint64_t cap) {
  if (S > N - S) S = N - S;
  std::uint64_t c = 1;
  for (Index i = 1; i <= S; ++i) {
    if (c > cap) return cap + 1;
    c = c * static_cast<std::uint64_t>(N - S + i) /
        static_cast<std::uint64_t>(i);
  }
  return std::min<std::uint64_t>(c, cap + 1);
}

}  // namespace

double rip_delta_exact(const MeasurementMatrix& A, Index S,
                       std::uint64_t max_subsets) {
  check_s(A, S);
  const Index N = A.cols();
  if (binomial_capped(N, S, max_subsets) > max_subsets) {
    throw NumericError(
        "support count C(N, S) too large for exhaustive enumeration; "
        "use rip_delta_mc");
  }

  std::vector<Index> support(static_cast<std::size_t>(S));
  for (Index k = 0; k < S; ++k) support[static_cast<std::size_t>(k)] = k;

  double delta = 0.0;
  for (;;) {
    delta = std::max(delta, gram_deviation(A.entries, support));
    // next combination in lexicographic order
    Index k = S - 1;
    while (k >= 0 &&
           support[static_cast<std::size_t>(k)] == N - S + k) {
      --k;
    }
    if (k < 0) break;
    ++support[static_cast<std::size_t>(k)];
    for (Index j = k + 1; j < S; ++j) {
      support[static_cast<std::size_t>(j)] =
          support[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return delta;
}

RipEstimate rip_delta_mc(const MeasurementMatrix& A, Index S,
                         std::uint64_t trials, std::uint64_t seed,
                         unsigned num_threads) {
  check_s(A, S);
  if (trials < 1) throw InvalidArgument("trials must be positive");

  std::vector<double> deviation(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        SplitMix64 rng(derive_stream(seed, t));
        std::vector<Index> support = random_subset(A.cols(), S, rng);
        deviation[t] = gram_deviation(A.entries, support);
      },
      num_threads);

  RipEstimate e;
  e.S = S;
  e.delta_lower = *std::max_element(deviation.begin(), deviation.end());
  e.trials = trials;
  e.method = RipMethod::kMonteCarlo;
  e.seed = seed;
  return e;
}

std::vector<RipEstimate> rip_profile(const MeasurementMatrix& A, Index S_max,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned num_threads) {
  check_s(A, S_max);
  std::vector<RipEstimate> profile;
  profile.reserve(static_cast<std::size_t>(S_max));
  double running = 0.0;
  for (Index S = 1; S <= S_max; ++S) {
    RipEstimate e = rip_delta_mc(A, S, trials, seed, num_threads);
    running = std::max(running, e.delta_lower);
    e.delta_lower = running;
    profile.push_back(e);
  }
  return profile;
}

std::string to_json(const RipEstimate& e) {
  nlohmann::ordered_json j;
  j["S"] = e.S;
  j["delta_lower"] = e.delta_lower;
  j["trials"] = e.trials;
  j["method"] =
      e.method == RipMethod::kMonteCarlo ? "monte_carlo" : "exhaustive";
  j["seed"] = e.seed;
  return j.dump();
}

}  // namespace lprec

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lprec/types.hpp"

namespace lprec {

enum class RipMethod { kMonteCarlo, kExhaustive };

struct RipEstimate {
  Index S = 0;
  double delta_lower = 0.0;  // MC gives a lower bound on the true delta_S
  std::uint64_t trials = 0;
  RipMethod method = RipMethod::kMonteCarlo;
  std::uint64_t seed = 0;
};

std::string to_json(const RipEstimate& e);

// Exact delta_S by enumerating every size-S column subset. Refuses when
// C(N, S) exceeds max_subsets; use rip_delta_mc past that point.
inline constexpr std::uint64_t kRipExhaustiveCap = 2'000'000;
double rip_delta_exact(const MeasurementMatrix& A, Index S,
                       std::uint64_t max_subsets = kRipExhaustiveCap);

// Max Gram-spectrum deviation over `trials` uniformly random supports.
// Trial t draws from derive_stream(seed, t), so the result is independent
// of evaluation order and thread count.
RipEstimate rip_delta_mc(const MeasurementMatrix& A, Index S,
                         std::uint64_t trials, std::uint64_t seed,
                         unsigned num_threads = 0);

// MC estimates for S = 1..S_max, monotonized by running maximum (the true
// delta_S is nondecreasing in S).
std::vector<RipEstimate> rip_profile(const MeasurementMatrix& A, Index S_max,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned num_threads = 0);

}  // namespace lprec

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lprec/rng.hpp"
#include "lprec/types.hpp"

namespace lprec {

// Uniformly random size-S subset of {0, ..., N-1}, sorted ascending.
// Shared by the signal generators and the RIP support sampler.
std::vector<Index> random_subset(Index N, Index S, SplitMix64& rng);

// M x N with entries i.i.d. N(0, 1/M), i.e. standard deviation 1/sqrt(M),
// so squared column norms concentrate at 1. Column j draws from its own
// stream derive_stream(seed, j); generation order does not matter.
MeasurementMatrix gen_gaussian(Index M, Index N, std::uint64_t seed);

// Columns drawn independently and uniformly from the unit sphere in R^M
// (normalized Gaussian vectors).
MeasurementMatrix gen_uniform_sphere(Index M, Index N, std::uint64_t seed);

// Exactly S nonzeros on a uniformly random support, values standard normal.
Vector gen_sparse_signal(Index N, Index S, std::uint64_t seed);

// x(j) = c * j^(-1/q) for j = 1..N, scaled so the l2 norm is 1.
// Deterministic; no seed. Accepts 0 < q <= 1.
Vector gen_powerlaw_signal(Index N, double q);

// x = x_T + lambda * z_{T^c} with x_T and z_{T^c} unit-norm on disjoint
// supports, T a uniformly random size-S set. Returns x and T (sorted).
std::pair<Vector, std::vector<Index>> gen_mixed_signal(Index N, Index S,
                                                       double lambda,
                                                       std::uint64_t seed);

}  // namespace lprec

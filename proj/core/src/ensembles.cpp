#include "lprec/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lprec/rng.hpp"

namespace lprec {

std::string ensemble_name(Ensemble e) {
  switch (e) {
    case Ensemble::kGaussian:
      return "gaussian";
    case Ensemble::kUniformSphere:
      return "uniform_sphere";
    case Ensemble::kExternal:
      return "external";
  }
  throw InvalidArgument("unknown ensemble code");
}

Ensemble ensemble_from_name(const std::string& name) {
  if (name == "gaussian") return Ensemble::kGaussian;
  if (name == "uniform_sphere") return Ensemble::kUniformSphere;
  if (name == "external") return Ensemble::kExternal;
  throw InvalidArgument("unknown ensemble name: " + name);
}

namespace {

void check_dims(Index M, Index N) {
  if (M < 1 || N < 1) {
    throw InvalidArgument("matrix dimensions must be positive");
  }
}

double nonzero_gaussian(SplitMix64& rng) {
  double v = rng.next_gaussian();
  while (v == 0.0) v = rng.next_gaussian();
  return v;
}

Vector unit_gaussian_vector(Index n, SplitMix64& rng) {
  Vector v(n);
  double norm = 0.0;
  do {
    for (Index i = 0; i < n; ++i) v[i] = rng.next_gaussian();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace

// First S entries of a uniformly random permutation of 0..N-1, sorted.
std::vector<Index> random_subset(Index N, Index S, SplitMix64& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < S; ++i) {
    Index j = i + static_cast<Index>(
                      rng.next_below(static_cast<std::uint64_t>(N - i)));
    std::swap(idx[static_cast<std::size_t>(i)],
              idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(S));
  std::sort(idx.begin(), idx.end());
  return idx;
}

MeasurementMatrix gen_gaussian(Index M, Index N, std::uint64_t seed) {
  check_dims(M, N);
  MeasurementMatrix out;
  out.entries.resize(M, N);
  out.ensemble = Ensemble::kGaussian;
  out.seed = seed;
  const double sigma = 1.0 / std::sqrt(static_cast<double>(M));
  for (Index j = 0; j < N; ++j) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(j)));
    for (Index i = 0; i < M; ++i) {
      out.entries(i, j) = sigma * rng.next_gaussian();
    }
  }
  return out;
}

MeasurementMatrix gen_uniform_sphere(Index M, Index N, std::uint64_t seed) {
  check_dims(M, N);
  MeasurementMatrix out;
  out.entries.resize(M, N);
  out.ensemble = Ensemble::kUniformSphere;
  out.seed = seed;
  for (Index j = 0; j < N; ++j) {
    SplitMix64 rng(derive_stream(seed, static_cast<std::uint64_t>(j)));
    out.entries.col(j) = unit_gaussian_vector(M, rng);
  }
  return out;
}

Vector gen_sparse_signal(Index N, Index S, std::uint64_t seed) {
  if (N < 1) throw InvalidArgument("signal length must be positive");
  if (S < 1 || S > N) {
    throw InvalidArgument("sparsity must satisfy 1 <= S <= N");
  }
  SplitMix64 rng(derive_stream(seed, 0));
  std::vector<Index> support = random_subset(N, S, rng);
  Vector x = Vector::Zero(N);
  for (Index i : support) x[i] = nonzero_gaussian(rng);
  return x;
}

Vector gen_powerlaw_signal(Index N, double q) {
  if (N < 1) throw InvalidArgument("signal length must be positive");
  if (!(q > 0.0) || q > 1.0) {
    throw InvalidArgument("power-law exponent q must lie in (0, 1]");
  }
  Vector x(N);
  const double e = -1.0 / q;
  for (Index j = 0; j < N; ++j) {
    x[j] = std::pow(static_cast<double>(j + 1), e);
  }
  x /= x.norm();
  return x;
}

std::pair<Vector, std::vector<Index>> gen_mixed_signal(Index N, Index S,
                                                       double lambda,
                                                       std::uint64_t seed) {
  if (N < 2 || S < 1 || S >= N) {
    throw InvalidArgument("mixed signal needs 1 <= S < N");
  }
  if (lambda < 0.0) throw InvalidArgument("lambda must be nonnegative");

  SplitMix64 rng(derive_stream(seed, 0));
  std::vector<Index> support = random_subset(N, S, rng);
  Vector head = unit_gaussian_vector(S, rng);
  Vector tail = unit_gaussian_vector(N - S, rng);

  std::vector<char> on_support(static_cast<std::size_t>(N), 0);
  for (Index i : support) on_support[static_cast<std::size_t>(i)] = 1;

  Vector x(N);
  Index hi = 0, ti = 0;
  for (Index i = 0; i < N; ++i) {
    x[i] = on_support[static_cast<std::size_t>(i)] ? head[hi++]
                                                   : lambda * tail[ti++];
  }
  return {x, support};
}

}  // namespace lprec

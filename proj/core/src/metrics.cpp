#include "lprec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lprec {

namespace {

void check_p(double p) {
  if (!(p > 0.0) || p > 2.0) {
    throw InvalidArgument("p must lie in (0, 2]");
  }
}

}  // namespace

double quasinorm_pow(const Vector& x, double p) {
  check_p(p);
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.squaredNorm();
  double s = 0.0;
  if (p == 0.5) {
    for (Index i = 0; i < x.size(); ++i) s += std::sqrt(std::abs(x[i]));
  } else {
    for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), p);
  }
  return s;
}

double quasinorm(const Vector& x, double p) {
  check_p(p);
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  double s = quasinorm_pow(x, p);
  if (p == 0.5) return s * s;
  return std::pow(s, 1.0 / p);
}

double best_s_term_error(const Vector& x, Index S, double p) {
  check_p(p);
  const Index N = x.size();
  if (S < 0 || S > N) throw InvalidArgument("S must satisfy 0 <= S <= N");
  if (S == 0) return quasinorm(x, p);
  if (S == N) return 0.0;

  std::vector<Index> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), Index{0});
  // stable: equal magnitudes keep index order, so the kept set is the
  // lowest-index one among ties
  std::stable_sort(order.begin(), order.end(), [&x](Index a, Index b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });

  Vector tail = x;
  for (Index k = 0; k < S; ++k) tail[order[static_cast<std::size_t>(k)]] = 0.0;
  return quasinorm(tail, p);
}

double snr_db(const Vector& x, const Vector& xhat) {
  if (x.size() != xhat.size()) {
    throw InvalidArgument("snr_db needs vectors of equal length");
  }
  const double xn = x.norm();
  if (xn == 0.0) throw InvalidArgument("snr_db is undefined for x = 0");
  const double err = (x - xhat).norm();
  if (err < 1e-15 * xn) return kSnrCapDb;
  return 20.0 * std::log10(xn / err);
}

}  // namespace lprec

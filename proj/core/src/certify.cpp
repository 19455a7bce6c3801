#include "lprec/certify.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <unordered_map>

namespace lprec {

namespace {

void check_p01(double p) {
  if (!(p > 0.0) || p > 1.0) throw InvalidArgument("p must lie in (0, 1]");
}

void check_k(double k) {
  if (!(k > 1.0)) throw InvalidArgument("k must exceed 1");
}

void check_deltas(double dk, double dk1) {
  if (dk < 0.0 || dk1 < 0.0) {
    throw InvalidArgument("restricted isometry constants are nonnegative");
  }
}

double log_of(double x, LogBase base) {
  return base == LogBase::kNatural ? std::log(x) : std::log2(x);
}

}  // namespace

bool check_condition_P(double delta_kS, double delta_k1S, double k, double p) {
  check_deltas(delta_kS, delta_k1S);
  check_k(k);
  check_p01(p);
  const double kpow = std::pow(k, 2.0 / p - 1.0);
  return delta_kS + kpow * delta_k1S < kpow - 1.0;
}

double threshold_f(double m, double p) {
  if (!(m >= 2.0)) throw InvalidArgument("m must be at least 2");
  check_p01(p);
  const double t = std::pow(m - 1.0, 2.0 / p - 1.0);
  return (t - 1.0) / (t + 1.0);
}

double threshold_g(double m, double p) {
  if (!(m >= 2.0)) throw InvalidArgument("m must be at least 2");
  check_p01(p);
  const double t =
      4.0 * (std::sqrt(2.0) - 1.0) * std::pow(m / 2.0, 1.0 / p - 0.5);
  return t / (t + 2.0);
}

double constant_c1(double p, double k, double delta_kS, double delta_k1S) {
  if (!check_condition_P(delta_kS, delta_k1S, k, p)) {
    throw NumericError("condition P not satisfied");
  }
  const double denom = std::pow(1.0 - delta_k1S, p / 2.0) -
                       std::pow(1.0 + delta_kS, p / 2.0) *
                           std::pow(k, p / 2.0 - 1.0);
  const double num =
      std::pow(2.0, p) *
      (1.0 + std::pow(k, p / 2.0 - 1.0) * std::pow(2.0 / p - 1.0, -p / 2.0));
  return num / denom;
}

double constant_c2(double p, double k, double delta_kS, double delta_k1S) {
  if (!check_condition_P(delta_kS, delta_k1S, k, p)) {
    throw NumericError("condition P not satisfied");
  }
  const double k1 = std::pow(k, 1.0 - p / 2.0);
  const double denom =
      std::pow(1.0 - delta_k1S, p / 2.0) - std::pow(1.0 + delta_kS, p / 2.0) / k1;
  const double lead = 2.0 * std::pow(p / (2.0 - p), p / 2.0) / k1;
  const double inner =
      (std::pow(2.0 / p - 1.0, p / 2.0) + std::pow(k, p / 2.0 - 1.0)) *
      std::pow(1.0 + delta_kS, p / 2.0) / denom;
  return lead * (1.0 + inner);
}

Index sparsity_transfer(Index S1, double k, double p) {
  if (S1 < 1) throw InvalidArgument("S1 must be positive");
  check_k(k);
  check_p01(p);
  const double n = k * static_cast<double>(S1);
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw InvalidArgument("k * S1 must be an integer");
  }
  const double ratio = (k + 1.0) / (std::pow(k, p / (2.0 - p)) + 1.0);
  const double value = ratio * static_cast<double>(S1);
  return static_cast<Index>(std::floor(value + 1e-9 * std::max(1.0, value)));
}

double constant_cpq(double p, double q, LogBase base) {
  if (!(p > 0.0) || p >= 1.0) {
    throw InvalidArgument("constant_cpq needs p in (0, 1)");
  }
  if (!(q > 1.0) || q > 2.0) {
    throw InvalidArgument("constant_cpq needs q in (1, 2]");
  }
  const double r = 1.0 - 1.0 / q;
  const double a =
      std::pow(2.0, 1.0 - p) + std::pow(2.0, -p * r) * (1.0 - p) / (p * r);
  const double e1 = (1.0 - p / q) / (p * p * r);
  const double e2 = (1.0 / p - 1.0) / (p * r);
  return std::pow(a, e1) * std::pow(1.0 / ((1.0 - p) * log_of(2.0, base)), e2);
}

double constant_cp(double p, LogBase base) {
  check_p01(p);
  if (p == 1.0) return 1.0;  // general formula is indeterminate (0^0) here
  const double a = std::pow(2.0, 1.0 - p) +
                   (1.0 - p) * std::pow(2.0, 1.0 - p / 2.0) / p;
  const double e1 = (2.0 - p) / (p * p);
  const double e2 = (2.0 - 2.0 * p) / (p * p);
  return std::pow(a, e1) * std::pow(1.0 / ((1.0 - p) * log_of(2.0, base)), e2);
}

double lq_alpha(Index M, Index N, double mu, double p, LogBase base) {
  if (M < 1) throw InvalidArgument("M must be positive");
  if (N <= M) throw InvalidArgument("lq_alpha needs N > M");
  if (!(mu > 0.0) || !(mu < 1.0 / std::sqrt(2.0))) {
    throw InvalidArgument("mu must lie in (0, 1/sqrt(2))");
  }
  check_p01(p);
  const double lg =
      log_of(static_cast<double>(N) / static_cast<double>(M), base);
  const double body = mu * mu * lg / static_cast<double>(M);
  return std::pow(body, 1.0 / p - 0.5) / constant_cp(p, base);
}

IoConstants io_constants(double p, double delta, double mu, double C2p,
                         LogBase base) {
  check_p01(p);
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  if (!(mu > 0.0)) throw InvalidArgument("mu must be positive");
  if (!(C2p > 0.0)) throw InvalidArgument("C2p must be positive");

  IoConstants io;
  io.gamma_p = std::pow(mu, 2.0 / p - 1.0) / constant_cp(p, base);
  const double g = io.gamma_p;
  io.C3 = 1.0 / g + (g * (1.0 - delta) + 1.0) / ((1.0 - delta * delta) * g);
  const double tri = std::pow(2.0, 1.0 / p - 1.0);
  io.C_case_i = io.C3 + tri * C2p * (1.0 / g + 1.0);
  io.C_case_iii = 1.0 + io.C3 + tri * C2p / g;
  return io;
}

Certificate certify_recovery(
    const std::vector<std::pair<Index, double>>& delta_profile, Index S,
    double p) {
  check_p01(p);
  if (S < 1) throw InvalidArgument("S must be positive");

  std::unordered_map<Index, double> lookup;
  Index max_s = 0;
  for (const auto& [s, d] : delta_profile) {
    lookup[s] = d;
    max_s = std::max(max_s, s);
  }

  Certificate cert;
  cert.p = p;
  cert.S = S;
  bool examined = false;
  for (Index n = S + 1; n + S <= max_s; ++n) {
    auto lo = lookup.find(n);
    auto hi = lookup.find(n + S);
    if (lo == lookup.end() || hi == lookup.end()) continue;
    examined = true;
    const double k = static_cast<double>(n) / static_cast<double>(S);
    cert.k = k;
    cert.delta_kS = lo->second;
    cert.delta_k1S = hi->second;
    if (check_condition_P(cert.delta_kS, cert.delta_k1S, k, p)) {
      cert.satisfied = true;
      cert.C1 = constant_c1(p, k, cert.delta_kS, cert.delta_k1S);
      cert.C2 = constant_c2(p, k, cert.delta_kS, cert.delta_k1S);
      return cert;
    }
  }
  if (!examined) {
    throw NumericError(
        "delta profile too short: no k with both kS and (k+1)S covered");
  }
  return cert;
}

Certificate certify_recovery(const std::vector<RipEstimate>& delta_profile,
                             Index S, double p) {
  std::vector<std::pair<Index, double>> pairs;
  pairs.reserve(delta_profile.size());
  for (const auto& e : delta_profile) pairs.emplace_back(e.S, e.delta_lower);
  return certify_recovery(pairs, S, p);
}

std::string to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["p"] = c.p;
  j["S"] = c.S;
  j["k"] = c.k;
  j["satisfied"] = c.satisfied;
  j["C1"] = c.C1 ? nlohmann::json(*c.C1) : nlohmann::json(nullptr);
  j["C2"] = c.C2 ? nlohmann::json(*c.C2) : nlohmann::json(nullptr);
  j["delta_kS"] = c.delta_kS;
  j["delta_k1S"] = c.delta_k1S;
  return j.dump();
}

}  // namespace lprec

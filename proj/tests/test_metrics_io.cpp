#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "lprec/ensembles.hpp"
#include "lprec/matrix_io.hpp"
#include "lprec/metrics.hpp"
#include "lprec/reports.hpp"
#include "lprec/rng.hpp"
#include "lprec/types.hpp"

using namespace lprec;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lprec_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Vector random_vector(Index n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.next_gaussian();
  return v;
}

// Exhaustive best-S-term reference: minimize the p-norm of the off-support
// part over every size-S support.
double brute_force_tail(const Vector& x, Index S, double p) {
  const Index n = x.size();
  std::vector<Index> idx(static_cast<std::size_t>(S));
  for (Index i = 0; i < S; ++i) idx[static_cast<std::size_t>(i)] = i;
  double best = 1e300;
  while (true) {
    std::vector<bool> keep(static_cast<std::size_t>(n), false);
    for (Index i : idx) keep[static_cast<std::size_t>(i)] = true;
    double tail = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (!keep[static_cast<std::size_t>(i)])
        tail += std::pow(std::abs(x[i]), p);
    }
    best = std::min(best, std::pow(tail, 1.0 / p));
    Index i = S - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - S + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < S; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("quasinorm basic values") {
  Vector x(2);
  x << 3, 4;
  CHECK(quasinorm(x, 2.0) == doctest::Approx(5.0).epsilon(1e-14));

  Vector ones(2);
  ones << 1, 1;
  CHECK(quasinorm(ones, 0.5) == doctest::Approx(4.0).epsilon(1e-14));

  const Vector z = Vector::Zero(7);
  for (double p : {0.1, 0.5, 1.0, 2.0}) CHECK(quasinorm(z, p) == 0.0);

  CHECK_THROWS_AS(quasinorm(x, 0.0), InvalidArgument);
  CHECK_THROWS_AS(quasinorm(x, 2.5), InvalidArgument);
}

TEST_CASE("quasinorm inequalities on random vectors") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector x = random_vector(12, seed);
    const Vector y = random_vector(12, seed + 1000);
    for (double p : {0.3, 0.5, 0.9, 1.0}) {
      // p-power subadditivity
      CHECK(quasinorm_pow(x + y, p) <=
            quasinorm_pow(x, p) + quasinorm_pow(y, p) + 1e-10);
      // quasi-triangle inequality with constant 2^(1/p-1)
      const double c = std::pow(2.0, 1.0 / p - 1.0);
      CHECK(quasinorm(x + y, p) <=
            c * (quasinorm(x, p) + quasinorm(y, p)) + 1e-10);
    }
    // norm ordering on R^N
    const double l1 = quasinorm(x, 1.0), l2 = quasinorm(x, 2.0);
    CHECK(l2 <= l1 + 1e-12);
    CHECK(l1 <= std::sqrt(12.0) * l2 + 1e-12);
  }
}

TEST_CASE("best_s_term_error hand values and properties") {
  Vector x(3);
  x << 3, 1, -2;
  CHECK(best_s_term_error(x, 1, 2.0) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));

  Vector sp = Vector::Zero(10);
  sp[2] = 4.0;
  sp[7] = -1.0;
  CHECK(best_s_term_error(sp, 2, 0.5) == 0.0);
  CHECK(best_s_term_error(sp, 5, 1.0) == 0.0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector v = random_vector(8, seed);
    CHECK(best_s_term_error(v, 3, 0.5) ==
          doctest::Approx(brute_force_tail(v, 3, 0.5)).epsilon(1e-12));
    CHECK(best_s_term_error(v, 0, 0.7) ==
          doctest::Approx(quasinorm(v, 0.7)).epsilon(1e-14));
    // nonincreasing in S
    double prev = best_s_term_error(v, 0, 1.0);
    for (Index S = 1; S <= 8; ++S) {
      const double cur = best_s_term_error(v, S, 1.0);
      CHECK(cur <= prev + 1e-14);
      prev = cur;
    }
  }

  // determinism under ties: repeated evaluation gives the identical double
  Vector ties(4);
  ties << 1, -1, 1, -1;
  CHECK(best_s_term_error(ties, 2, 0.5) == best_s_term_error(ties, 2, 0.5));
  CHECK(best_s_term_error(ties, 2, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("snr_db reference points") {
  Vector x = Vector::Zero(4);
  x[0] = 1.0;
  Vector xhat = x;
  xhat[1] = 0.1;
  CHECK(snr_db(x, xhat) == doctest::Approx(20.0).epsilon(1e-12));

  CHECK(snr_db(x, x) == kSnrCapDb);

  Vector half = x;
  half[1] = 0.5;
  CHECK(snr_db(x, half) == doctest::Approx(6.0206).epsilon(1e-3));
}

TEST_CASE("matrix binary format round-trips exactly") {
  MeasurementMatrix m = gen_gaussian(6, 9, 123);
  m.ensemble = Ensemble::kGaussian;

  const auto path = temp_file("roundtrip.lprm");
  save_matrix(m, path.string());
  const MeasurementMatrix back = load_matrix(path.string());
  CHECK(back.entries == m.entries);
  CHECK(back.ensemble == m.ensemble);
  CHECK(back.seed == m.seed);

  std::stringstream buf;
  write_matrix(m, buf);
  const MeasurementMatrix back2 = read_matrix(buf);
  CHECK(back2.entries == m.entries);

  std::filesystem::remove(path);
}

TEST_CASE("matrix loader rejects malformed input") {
  CHECK_THROWS_AS(load_matrix("/nonexistent/path/a.lprm"), IoError);

  const auto path = temp_file("garbage.lprm");
  write_text_file(path.string(), "not a matrix");
  CHECK_THROWS_AS(load_matrix(path.string()), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("vector csv round-trips through shortest formatting") {
  const Vector v = random_vector(37, 5);
  const auto path = temp_file("vec.csv");
  save_vector_csv(v, path.string());
  const Vector back = load_vector_csv(path.string());
  CHECK(back == v);

  write_text_file(path.string(), "1.5\nnot-a-number\n");
  CHECK_THROWS_AS(load_vector_csv(path.string()), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("format_double writes shortest exact decimal") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-0.25) == "-0.25");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SplitMix64 rng(seed);
    const double v = rng.next_gaussian() * std::pow(10.0, double(seed % 13) - 6);
    CHECK(std::stod(format_double(v)) == v);
  }
}

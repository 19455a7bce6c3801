#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "lprec/certify.hpp"
#include "lprec/types.hpp"

using namespace lprec;

TEST_CASE("check_condition_P reference instances") {
  // delta_3S + 3 delta_4S < 2 at p=1
  CHECK(check_condition_P(0.5, 0.4, 3.0, 1.0));
  // delta_3S + 27 delta_4S < 26 at p=1/2
  CHECK(check_condition_P(1.0, 0.9, 3.0, 0.5));
  // boundary is strict: 0.5 + 3*0.5 = 2, not < 2
  CHECK_FALSE(check_condition_P(0.5, 0.5, 3.0, 1.0));

  CHECK_THROWS_AS(check_condition_P(0.1, 0.1, 1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(check_condition_P(-0.1, 0.1, 2.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(check_condition_P(0.1, 0.1, 2.0, 1.5), InvalidArgument);
}

TEST_CASE("threshold_f values and monotonicity") {
  for (int i = 1; i <= 10; ++i) {
    CHECK(std::abs(threshold_f(2.0, 0.1 * i)) <= 1e-15);
  }
  CHECK(threshold_f(3.0, 0.5) == doctest::Approx(7.0 / 9.0).epsilon(1e-14));

  // strictly increasing in m (p fixed), decreasing in p (m fixed, m > 2)
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double prev = threshold_f(2.0, p);
    for (double m = 2.5; m <= 8.0; m += 0.5) {
      const double cur = threshold_f(m, p);
      CHECK(cur > prev);
      prev = cur;
    }
  }
  for (double m : {3.0, 5.0, 8.0}) {
    double prev = threshold_f(m, 0.1);
    for (double p = 0.2; p <= 1.0; p += 0.1) {
      const double cur = threshold_f(m, p);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  CHECK_THROWS_AS(threshold_f(1.5, 0.5), InvalidArgument);
}

TEST_CASE("threshold_g values and crossover against f") {
  const double g2 = 4.0 * (std::sqrt(2.0) - 1.0) /
                    (4.0 * (std::sqrt(2.0) - 1.0) + 2.0);
  for (double p : {0.1, 0.5, 1.0}) {
    CHECK(threshold_g(2.0, p) == doctest::Approx(g2).epsilon(1e-14));
  }
  CHECK(threshold_g(4.0, 1.0) ==
        doctest::Approx(0.5395042867796359).epsilon(1e-12));

  // at p=0.5 the two sufficient conditions swap: g wins near m=2, f wins
  // once m grows
  CHECK(threshold_g(2.0, 0.5) > threshold_f(2.0, 0.5));
  bool f_wins_later = false;
  for (double m = 2.0; m <= 16.0; m += 0.5) {
    if (threshold_f(m, 0.5) > threshold_g(m, 0.5)) f_wins_later = true;
  }
  CHECK(f_wins_later);
}

TEST_CASE("condition P at equal deltas matches threshold_f") {
  // m = 2 gives ratio k = 1, outside the condition's domain; f(2, p) = 0
  // encodes that nothing passes there.
  for (double m : {3.0, 4.0, 5.0, 8.0}) {
    for (double p : {0.2, 0.5, 1.0}) {
      const double thr = threshold_f(m, p);
      for (double delta : {0.01, 0.3, 0.6, 0.9}) {
        CHECK(check_condition_P(delta, delta, m - 1.0, p) == (delta < thr));
      }
    }
  }
}

TEST_CASE("error constants reproduce the reference values") {
  CHECK(constant_c1(1.0, 3.0, 0.2, 0.2) ==
        doctest::Approx(12.04214437099012).epsilon(1e-13));
  CHECK(constant_c2(1.0, 3.0, 0.2, 0.2) ==
        doctest::Approx(8.770821363360147).epsilon(1e-13));
  CHECK(constant_c1(0.5, 3.0, 0.5, 0.5) ==
        doctest::Approx(5.305552747844151).epsilon(1e-13));
  CHECK(constant_c2(0.5, 3.0, 0.5, 0.5) ==
        doctest::Approx(4.309401076758503).epsilon(1e-13));

  CHECK_THROWS_AS(constant_c1(1.0, 3.0, 0.5, 0.5), NumericError);
  CHECK_THROWS_AS(constant_c2(1.0, 3.0, 0.5, 0.5), NumericError);
}

TEST_CASE("error constants grow with either delta") {
  for (double p : {0.4, 0.7, 1.0}) {
    for (double base : {0.05, 0.1}) {
      const double c1 = constant_c1(p, 3.0, base, base);
      const double c2 = constant_c2(p, 3.0, base, base);
      CHECK(constant_c1(p, 3.0, base + 0.05, base) > c1);
      CHECK(constant_c1(p, 3.0, base, base + 0.05) > c1);
      CHECK(constant_c2(p, 3.0, base + 0.05, base) > c2);
      CHECK(constant_c2(p, 3.0, base, base + 0.05) > c2);
    }
  }
}

TEST_CASE("sparsity_transfer reference points") {
  CHECK(sparsity_transfer(3, 4.0, 2.0 / 3.0) == 5);
  CHECK(sparsity_transfer(10, 2.0, 0.5) == 13);
  for (Index s1 : {1, 4, 9}) {
    CHECK(sparsity_transfer(s1, 3.0, 1.0) == s1);
    // k^(p/(2-p)) <= k keeps the transferred level at least S1
    for (double p : {0.2, 0.5, 0.8}) {
      CHECK(sparsity_transfer(s1, 3.0, p) >= s1);
    }
  }
  CHECK_THROWS_AS(sparsity_transfer(3, 1.1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(sparsity_transfer(0, 2.0, 0.5), InvalidArgument);
}

TEST_CASE("quotient constants and their q=2 specialization") {
  int finite_points = 0;
  for (int i = 1; i <= 20; ++i) {
    const double p = 0.05 + (0.95 - 0.05) * (i - 1) / 19.0;
    const double general = constant_cpq(p, 2.0);
    const double special = constant_cp(p);
    if (std::isinf(special)) {
      // below p ~ 0.1 the true value passes 1e308; both forms must saturate
      // the same way
      CHECK(std::isinf(general));
      continue;
    }
    ++finite_points;
    CHECK(std::abs(general - special) <= 1e-10 * special);
  }
  CHECK(finite_points >= 19);

  CHECK(constant_cp(1.0) == 1.0);
  CHECK(constant_cp(0.5) ==
        doctest::Approx(61042.0669875623658).epsilon(1e-12));
  CHECK(constant_cpq(0.5, 2.0) ==
        doctest::Approx(61042.0669875623658).epsilon(1e-12));

  for (double p = 0.1; p < 1.0; p += 0.1) {
    CHECK(constant_cp(p) >= 1.0);
  }
  // the constant approaches 1 as p -> 1
  CHECK(std::abs(constant_cpq(1.0 - 1e-6, 2.0) - 1.0) <= 1e-3);

  CHECK_THROWS_AS(constant_cpq(1.0, 2.0), InvalidArgument);
  CHECK_THROWS_AS(constant_cpq(0.5, 2.5), InvalidArgument);
  CHECK_THROWS_AS(constant_cpq(0.5, 1.0), InvalidArgument);

  // base-2 variant is a distinct, finite choice
  CHECK(constant_cp(0.5, LogBase::kBase2) > 0.0);
  CHECK(constant_cp(0.5, LogBase::kBase2) != constant_cp(0.5));
}

TEST_CASE("lq_alpha closed form and monotonicity") {
  CHECK(lq_alpha(100, 300, 0.5, 1.0) ==
        doctest::Approx(0.05240735369841025).epsilon(1e-13));

  for (Index M : {50, 100}) {
    for (Index N : {200, 400}) {
      for (double mu : {0.1, 0.5}) {
        const double expect =
            mu * std::sqrt(std::log(double(N) / double(M)) / double(M));
        CHECK(lq_alpha(M, N, mu, 1.0) ==
              doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  // the base mu^2 log(N/M) / M is below 1 here, so the shrinking exponent
  // 1/p - 1/2 raises alpha as p grows
  double prev = lq_alpha(100, 300, 0.3, 0.2);
  for (double p = 0.3; p <= 1.0; p += 0.1) {
    const double cur = lq_alpha(100, 300, 0.3, p);
    CHECK(cur > prev);
    prev = cur;
  }

  CHECK_THROWS_AS(lq_alpha(300, 100, 0.5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(lq_alpha(100, 300, 0.8, 0.5), InvalidArgument);
}

TEST_CASE("io_constants identities and positivity") {
  for (double p : {0.3, 0.5, 0.8}) {
    for (double delta : {0.1, 0.5}) {
      for (double mu : {0.1, 0.5}) {
        const IoConstants io = io_constants(p, delta, mu, 2.0);
        CHECK(io.gamma_p > 0.0);
        CHECK(io.C3 > 0.0);
        CHECK(io.C_case_i > 0.0);
        CHECK(io.C_case_iii > 0.0);
        // the case constants differ by 1 - 2^(1/p-1) C2p, but both grow like
        // 1/gamma_p, so the cancellation error scales with their magnitude
        const double tri = std::pow(2.0, 1.0 / p - 1.0);
        const double expected = 1.0 - tri * 2.0;
        const double scale = io.C_case_i + io.C_case_iii + std::abs(expected);
        CHECK(std::abs((io.C_case_iii - io.C_case_i) - expected) <=
              1e-12 * scale);
      }
    }
  }
  // at p near 1 the magnitudes stay O(10), so the identity is sharp
  {
    const IoConstants io = io_constants(0.95, 0.5, 0.5, 2.0);
    const double tri = std::pow(2.0, 1.0 / 0.95 - 1.0);
    CHECK(io.C_case_iii - io.C_case_i ==
          doctest::Approx(1.0 - tri * 2.0).epsilon(1e-12));
  }
  // gamma reduces to mu at p=1 because C(1)=1
  CHECK(io_constants(1.0, 0.2, 0.4, 1.5).gamma_p ==
        doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("certify_recovery walks ratios over a delta profile") {
  std::vector<std::pair<Index, double>> zero_profile;
  for (Index s = 1; s <= 10; ++s) zero_profile.emplace_back(s, 0.0);
  const Certificate good = certify_recovery(zero_profile, 1, 0.5);
  CHECK(good.satisfied);
  CHECK(good.k == doctest::Approx(2.0));
  REQUIRE(good.C1.has_value());
  REQUIRE(good.C2.has_value());
  CHECK(*good.C1 > 0.0);
  CHECK(*good.C2 > 0.0);

  std::vector<std::pair<Index, double>> bad_profile;
  for (Index s = 1; s <= 40; ++s) bad_profile.emplace_back(s, 0.99);
  const Certificate bad = certify_recovery(bad_profile, 1, 1.0);
  CHECK_FALSE(bad.satisfied);
  CHECK_FALSE(bad.C1.has_value());
  CHECK(bad.k == doctest::Approx(39.0));  // largest ratio the profile allows

  // sparse profile covering just delta_6 and delta_8 for S=2 certifies the
  // documented p=1/2, k=3 instance
  const std::vector<std::pair<Index, double>> pair_profile{{6, 0.5}, {8, 0.5}};
  const Certificate inst = certify_recovery(pair_profile, 2, 0.5);
  CHECK(inst.satisfied);
  CHECK(inst.k == doctest::Approx(3.0));
  CHECK(*inst.C1 == doctest::Approx(5.305552747844151).epsilon(1e-13));
  CHECK(*inst.C2 == doctest::Approx(4.309401076758503).epsilon(1e-13));

  const std::vector<std::pair<Index, double>> short_profile{
      {1, 0.1}, {2, 0.1}, {3, 0.1}};
  CHECK_THROWS_AS(certify_recovery(short_profile, 5, 0.5), NumericError);
}

TEST_CASE("certificate json carries null constants when unsatisfied") {
  std::vector<std::pair<Index, double>> profile;
  for (Index s = 1; s <= 6; ++s) profile.emplace_back(s, 0.99);
  const Certificate c = certify_recovery(profile, 1, 1.0);
  const std::string j = to_json(c);
  CHECK(j.find("\"satisfied\":false") != std::string::npos);
  CHECK(j.find("\"C1\":null") != std::string::npos);
}

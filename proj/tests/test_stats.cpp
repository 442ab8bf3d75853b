#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rbnedit/stats.hpp"

using namespace rbnedit;

namespace {

// Reference values computed with an external statistics package and frozen
// before the implementation existed.
const std::vector<double> kSampleA = {19.8, 20.4, 19.6, 17.8, 18.5,
                                      18.9, 18.3, 18.9, 19.5, 22.0};
const std::vector<double> kSampleB = {28.2, 26.6, 20.1, 23.3, 25.2, 22.1, 17.7,
                                      27.6, 20.6, 13.7, 23.2, 17.5, 20.6, 18.0,
                                      23.9, 21.6, 24.3, 20.4, 24.0, 13.2};
constexpr double kOracleT = -2.2192409158;
constexpr double kOracleDf = 24.4962231242;
constexpr double kOracleP = 0.0359722710;

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("fixed dataset matches the frozen oracle within one percent") {
  const WelchResult w = welch_t_test(kSampleA, kSampleB);
  CHECK(std::abs(w.t - kOracleT) < std::abs(kOracleT) * 0.01);
  CHECK(std::abs(w.df - kOracleDf) < kOracleDf * 0.01);
  CHECK(std::abs(w.p - kOracleP) < kOracleP * 0.01);
}

TEST_CASE("identical samples give t=0, p=1") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  const WelchResult w = welch_t_test(xs, xs);
  CHECK(w.t == 0.0);
  CHECK(w.p == 1.0);
}

TEST_CASE("swapping samples negates t and preserves df and p") {
  const WelchResult ab = welch_t_test(kSampleA, kSampleB);
  const WelchResult ba = welch_t_test(kSampleB, kSampleA);
  CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-14));
  CHECK(ab.df == doctest::Approx(ba.df).epsilon(1e-14));
  CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-14));
}

TEST_CASE("shift invariance within 1e-12") {
  std::vector<double> a = kSampleA, b = kSampleB;
  for (double& v : a) v += 5.0;
  for (double& v : b) v += 5.0;
  const WelchResult base = welch_t_test(kSampleA, kSampleB);
  const WelchResult shifted = welch_t_test(a, b);
  CHECK(std::abs(base.t - shifted.t) < 1e-12);
  CHECK(std::abs(base.df - shifted.df) < 1e-12);
  CHECK(std::abs(base.p - shifted.p) < 1e-12);
}

TEST_CASE("p stays in (0, 1]") {
  const std::vector<double> lo = {0.0, 0.1, 0.05, 0.12};
  const std::vector<double> hi = {100.0, 100.2, 99.9, 100.3};
  const WelchResult w = welch_t_test(lo, hi);
  CHECK(w.p > 0.0);
  CHECK(w.p <= 1.0);
  CHECK(w.t < 0.0);
}

TEST_CASE("degenerate samples are rejected") {
  const std::vector<double> one = {1.0};
  const std::vector<double> ok = {1.0, 2.0, 3.0};
  const std::vector<double> constant = {2.0, 2.0, 2.0};
  CHECK_THROWS_AS(welch_t_test(one, ok), std::invalid_argument);
  CHECK_THROWS_AS(welch_t_test(ok, one), std::invalid_argument);
  CHECK_THROWS_AS(welch_t_test(constant, constant), std::invalid_argument);
  CHECK_THROWS_AS(welch_t_test({}, ok), std::invalid_argument);
}

TEST_CASE("one constant sample keeps the statistic finite") {
  // With one side constant the standard error comes entirely from the
  // other side and the degrees of freedom collapse to its n-1.
  const std::vector<double> constant = {2.0, 2.0, 2.0, 2.0, 2.0};
  const std::vector<double> spread = {1.0, 2.0, 3.0, 4.0};
  const WelchResult r = welch_t_test(constant, spread);
  CHECK(std::isfinite(r.t));
  CHECK(r.df == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.p > 0.0);
  CHECK(r.p <= 1.0);
  const WelchResult flipped = welch_t_test(spread, constant);
  CHECK(flipped.t == doctest::Approx(-r.t).epsilon(1e-14));
  CHECK(flipped.df == doctest::Approx(r.df).epsilon(1e-14));
}

TEST_CASE("incomplete beta boundary and monotonicity") {
  CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  double prev = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double v = incomplete_beta(2.0, 3.0, i / 10.0);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  // Symmetric case: I_{1/2}(a, a) = 1/2.
  CHECK(incomplete_beta(4.0, 4.0, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("sample statistics") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
  CHECK(sample_mean(xs) == doctest::Approx(2.5));
  CHECK(sample_variance(xs) == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

}  // TEST_SUITE

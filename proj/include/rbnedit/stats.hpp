// Welch's unequal-variance t-test with two-sided p-values.

#pragma once

#include <span>

namespace rbnedit {

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Welch statistic with Welch-Satterthwaite degrees of freedom; two-sided p
// via the regularized incomplete beta function. Throws
// std::invalid_argument when either sample has fewer than two values or
// zero variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation,
// 1e-12 tolerance, 200 iteration cap. Exposed for direct testing.
double incomplete_beta(double a, double b, double x);

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased, n-1

}  // namespace rbnedit

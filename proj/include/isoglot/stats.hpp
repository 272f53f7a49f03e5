#pragma once

#include <cstddef>
#include <vector>

namespace isoglot {

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
// Continued-fraction evaluation, absolute accuracy around 1e-14.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with nu > 0 degrees of freedom.
double student_t_cdf(double t, double nu);

// Two-sided tail probability P(|T| >= |t|), the p-value of a t-test.
double student_t_pvalue(double t, double nu);

// Sample Pearson correlation. Requires equal lengths >= 3 and nonzero
// variance on both sides.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Elementwise natural log. Any nonpositive entry is an error naming the
// offending index and value.
std::vector<double> log_transform(const std::vector<double>& values);

} // namespace isoglot

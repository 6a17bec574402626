#pragma once

#include <vector>

namespace cotforge {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a),
// series + continued fraction (relative error ~1e-12 for the ranges used).
double gamma_q(double a, double x);

// Survival p-value of a chi-square statistic with df degrees of freedom.
double chi_square_pvalue(double stat, int df);

// Pearson goodness-of-fit p-value of observed counts against uniform cells.
double chi_square_uniform_pvalue(const std::vector<long long>& counts);

// Independence p-value of an r x c contingency table (counts row-major).
double chi_square_independence_pvalue(const std::vector<std::vector<long long>>& table);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);  // unbiased

}  // namespace cotforge

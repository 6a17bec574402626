#include "cotforge/stats.hpp"

#include <cmath>

#include "cotforge/errors.hpp"

namespace cotforge {

namespace {

// Lower regularized gamma by power series, valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by Lentz continued fraction, valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0 || x < 0) throw BadArity("gamma_q: need a > 0 and x >= 0");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int df) {
    if (df < 1) throw BadArity("chi_square_pvalue: df must be positive");
    if (stat <= 0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * stat);
}

double chi_square_uniform_pvalue(const std::vector<long long>& counts) {
    if (counts.size() < 2) throw BadArity("chi_square_uniform_pvalue: need >= 2 cells");
    long long total = 0;
    for (long long c : counts) total += c;
    if (total == 0) return 1.0;
    const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (long long c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return chi_square_pvalue(stat, static_cast<int>(counts.size()) - 1);
}

double chi_square_independence_pvalue(const std::vector<std::vector<long long>>& table) {
    const std::size_t rows = table.size();
    if (rows < 2) throw BadArity("chi_square_independence_pvalue: need >= 2 rows");
    const std::size_t cols = table[0].size();
    if (cols < 2) throw BadArity("chi_square_independence_pvalue: need >= 2 columns");

    std::vector<double> row_sum(rows, 0.0);
    std::vector<double> col_sum(cols, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (table[r].size() != cols) throw BadArity("ragged contingency table");
        for (std::size_t c = 0; c < cols; ++c) {
            row_sum[r] += static_cast<double>(table[r][c]);
            col_sum[c] += static_cast<double>(table[r][c]);
            total += static_cast<double>(table[r][c]);
        }
    }
    if (total == 0) return 1.0;
    double stat = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double expected = row_sum[r] * col_sum[c] / total;
            if (expected <= 0) continue;
            const double diff = static_cast<double>(table[r][c]) - expected;
            stat += diff * diff / expected;
        }
    const int df = static_cast<int>((rows - 1) * (cols - 1));
    return chi_square_pvalue(stat, df);
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw NoData();
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw NoData();
    const double mu = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

}  // namespace cotforge

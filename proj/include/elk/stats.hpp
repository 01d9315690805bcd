#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace elk {

namespace detail {

// Lower regularized incomplete gamma by series, valid for x < s + 1.
inline double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (s + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized incomplete gamma by modified Lentz continued fraction,
// valid for x >= s + 1.
inline double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1 - s;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        double an = -i * (i - s);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace detail

// Upper regularized incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).
inline double gamma_q(double s, double x) {
    if (s <= 0 || x < 0) throw std::domain_error("gamma_q: need s > 0, x >= 0");
    if (x == 0) return 1.0;
    if (x < s + 1) return 1.0 - detail::gamma_p_series(s, x);
    return detail::gamma_q_cf(s, x);
}

// Survival function of the chi-square distribution with dof degrees of
// freedom: P[X >= stat].
inline double chi_square_sf(double stat, unsigned dof) {
    if (dof == 0) throw std::domain_error("chi_square_sf: dof must be positive");
    if (stat < 0) return 1.0;
    return gamma_q(dof / 2.0, stat / 2.0);
}

// Pearson statistic sum (obs - exp)^2 / exp over matching cells.
inline double pearson_statistic(const std::vector<std::uint64_t>& observed,
                                const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("pearson_statistic: cell mismatch");
    double s = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0))
            throw std::domain_error("pearson_statistic: nonpositive expectation");
        double d = static_cast<double>(observed[i]) - expected[i];
        s += d * d / expected[i];
    }
    return s;
}

// p-value of a goodness-of-fit test against the uniform distribution over
// the observed cells (dof = cells - 1).
inline double chi_square_uniform_pvalue(
    const std::vector<std::uint64_t>& observed) {
    if (observed.size() < 2)
        throw std::invalid_argument("chi_square_uniform_pvalue: need >= 2 cells");
    std::uint64_t total = 0;
    for (auto v : observed) total += v;
    if (total == 0)
        throw std::invalid_argument("chi_square_uniform_pvalue: no samples");
    std::vector<double> expected(observed.size(),
                                 static_cast<double>(total) / observed.size());
    return chi_square_sf(pearson_statistic(observed, expected),
                         static_cast<unsigned>(observed.size() - 1));
}

}  // namespace elk

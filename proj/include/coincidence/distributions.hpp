#pragma once

// Exact discrete-distribution kernels: log-space combinatorics, hypergeometric,
// binomial and Poisson probabilities, the even-dof chi-squared survival
// function and tail probabilities of independent sums.

#include <cstdint>
#include <span>
#include <vector>

namespace coincidence {

/// Natural logarithm of a probability or a combinatorial count.
struct LogWeight {
    double value = 0.0;

    double exp() const;
    friend bool operator==(const LogWeight&, const LogWeight&) = default;
};

/// ln(i!) for i = 0..max_n, built once and immutable afterwards.
/// Lookups beyond max_n fall back to lgammal.
class LogFactorialTable {
public:
    explicit LogFactorialTable(std::int64_t max_n);

    long double operator()(std::int64_t n) const;
    std::int64_t max_n() const noexcept { return static_cast<std::int64_t>(table_.size()) - 1; }

private:
    std::vector<long double> table_;
};

/// Shared table used by the free functions below (covers n <= 20000 exactly).
const LogFactorialTable& log_factorials();

/// Probability mass over a contiguous integer support [support_min, support_max].
class DiscreteDist {
public:
    /// Throws DomainError if any entry is negative or the total differs from 1 by more than 1e-12.
    DiscreteDist(std::int64_t support_min, std::vector<double> probabilities);

    static DiscreteDist hypergeometric(std::int64_t n, std::int64_t r, std::int64_t k);

    std::int64_t support_min() const noexcept { return support_min_; }
    std::int64_t support_max() const noexcept
    {
        return support_min_ + static_cast<std::int64_t>(probabilities_.size()) - 1;
    }
    std::span<const double> probabilities() const noexcept { return probabilities_; }

    /// Zero outside the support.
    double pmf(std::int64_t x) const noexcept;

private:
    std::int64_t support_min_;
    std::vector<double> probabilities_;
};

/// ln C(n, k). Throws DomainError when k > n or either argument is negative.
LogWeight log_binomial(std::int64_t n, std::int64_t k);

/// P(X = x) for X ~ Hypergeometric: x of the k incidents fall in the r suspect
/// shifts out of n shifts. Out-of-support x gives 0.
double hypergeom_pmf(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x);

/// P(X >= x_min) for the same distribution.
double hypergeom_tail(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x_min);

/// P(X >= x_min) for X ~ Binomial(trials, success_prob).
double binomial_tail(std::int64_t trials, double success_prob, std::int64_t x_min);

/// P(X <= x_max) for X ~ Binomial(trials, success_prob).
double binomial_cdf(std::int64_t trials, double success_prob, std::int64_t x_max);

double poisson_pmf(double mean, std::int64_t k);

/// Upper tail P(X > x_max) of Poisson(mean), computed without cancellation.
double poisson_upper_tail(double mean, std::int64_t x_max);

/// Q(x; dof) = P(chi2_dof >= x) for even dof, via the finite Poisson-sum form.
double chi2_survival_even(double x, std::int64_t dof);

/// P(X1 + X2 >= s_min) for independent X1 ~ d1, X2 ~ d2.
double convolve_tail(const DiscreteDist& d1, const DiscreteDist& d2, std::int64_t s_min);

/// Clamp into [0, 1] when within 1e-12 of the boundary; ConsistencyError otherwise.
double checked_probability(long double value);

} // namespace coincidence

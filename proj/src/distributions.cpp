#include "coincidence/distributions.hpp"

#include "coincidence/errors.hpp"
#include "compensated_sum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coincidence {

namespace {

constexpr long double kBoundarySlack = 1e-12L;

// Sum P(X >= x_min) over the support [lo, hi] given a log-pmf. The shorter side
// of the split is summed; the complement is used only when it cannot cancel.
template <typename LogPmf>
double tail_sum(std::int64_t lo, std::int64_t hi, std::int64_t x_min, LogPmf log_pmf)
{
    if (x_min <= lo)
        return 1.0;
    if (x_min > hi)
        return 0.0;

    auto sum_range = [&](std::int64_t from, std::int64_t to) {
        detail::CompensatedSum acc;
        for (std::int64_t x = from; x <= to; ++x)
            acc.add(std::exp(log_pmf(x)));
        return acc.value();
    };

    const std::int64_t upper_terms = hi - x_min + 1;
    const std::int64_t lower_terms = x_min - lo;
    if (upper_terms > lower_terms) {
        const long double lower = sum_range(lo, x_min - 1);
        if (lower <= 0.5L)
            return checked_probability(1.0L - lower);
    }
    return checked_probability(sum_range(x_min, hi));
}

void require_hypergeom_params(std::int64_t n, std::int64_t r, std::int64_t k)
{
    if (n < 0 || r < 0 || k < 0 || r > n || k > n)
        throw DomainError("hypergeometric parameters require 0 <= r <= n and 0 <= k <= n (n=" +
                          std::to_string(n) + ", r=" + std::to_string(r) + ", k=" + std::to_string(k) + ")");
}

long double log_choose(std::int64_t n, std::int64_t k)
{
    const auto& lf = log_factorials();
    return lf(n) - lf(k) - lf(n - k);
}

long double hypergeom_log_pmf(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x)
{
    return log_choose(r, x) + log_choose(n - r, k - x) - log_choose(n, k);
}

void require_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
}

} // namespace

double LogWeight::exp() const { return std::exp(value); }

LogFactorialTable::LogFactorialTable(std::int64_t max_n)
{
    if (max_n < 0)
        throw DomainError("log-factorial table size must be non-negative");
    table_.resize(static_cast<std::size_t>(max_n) + 1);
    table_[0] = 0.0L;
    detail::CompensatedSum acc;
    for (std::int64_t i = 1; i <= max_n; ++i) {
        acc.add(std::log(static_cast<long double>(i)));
        table_[static_cast<std::size_t>(i)] = acc.value();
    }
}

long double LogFactorialTable::operator()(std::int64_t n) const
{
    if (n < 0)
        throw DomainError("log-factorial of a negative number");
    if (n <= max_n())
        return table_[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<long double>(n) + 1.0L);
}

const LogFactorialTable& log_factorials()
{
    static const LogFactorialTable table(20000);
    return table;
}

DiscreteDist::DiscreteDist(std::int64_t support_min, std::vector<double> probabilities)
    : support_min_(support_min), probabilities_(std::move(probabilities))
{
    if (probabilities_.empty())
        throw DomainError("distribution needs a non-empty support");
    detail::CompensatedSum total;
    for (double p : probabilities_) {
        if (!(p >= 0.0))
            throw DomainError("distribution has a negative or NaN mass");
        total.add(p);
    }
    if (std::fabs(total.value() - 1.0L) > kBoundarySlack)
        throw DomainError("distribution masses do not sum to 1");
}

DiscreteDist DiscreteDist::hypergeometric(std::int64_t n, std::int64_t r, std::int64_t k)
{
    require_hypergeom_params(n, r, k);
    const std::int64_t lo = std::max<std::int64_t>(0, k - (n - r));
    const std::int64_t hi = std::min(r, k);
    std::vector<double> masses;
    masses.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t x = lo; x <= hi; ++x)
        masses.push_back(static_cast<double>(std::exp(hypergeom_log_pmf(n, r, k, x))));
    return DiscreteDist(lo, std::move(masses));
}

double DiscreteDist::pmf(std::int64_t x) const noexcept
{
    if (x < support_min_ || x > support_max())
        return 0.0;
    return probabilities_[static_cast<std::size_t>(x - support_min_)];
}

LogWeight log_binomial(std::int64_t n, std::int64_t k)
{
    if (n < 0 || k < 0)
        throw DomainError("log_binomial arguments must be non-negative");
    if (k > n)
        throw DomainError("log_binomial requires k <= n (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    return LogWeight{static_cast<double>(log_choose(n, k))};
}

double hypergeom_pmf(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x)
{
    require_hypergeom_params(n, r, k);
    const std::int64_t lo = std::max<std::int64_t>(0, k - (n - r));
    const std::int64_t hi = std::min(r, k);
    if (x < lo || x > hi)
        return 0.0;
    return checked_probability(std::exp(hypergeom_log_pmf(n, r, k, x)));
}

double hypergeom_tail(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x_min)
{
    require_hypergeom_params(n, r, k);
    const std::int64_t lo = std::max<std::int64_t>(0, k - (n - r));
    const std::int64_t hi = std::min(r, k);
    const long double log_total = log_choose(n, k);
    return tail_sum(lo, hi, x_min, [&](std::int64_t x) {
        return log_choose(r, x) + log_choose(n - r, k - x) - log_total;
    });
}

double binomial_tail(std::int64_t trials, double success_prob, std::int64_t x_min)
{
    if (trials < 0)
        throw DomainError("binomial trials must be non-negative");
    require_probability(success_prob, "binomial success probability");
    if (x_min < 0 || x_min > trials + 1)
        throw DomainError("binomial tail threshold must lie in [0, trials + 1]");
    if (success_prob == 0.0)
        return x_min <= 0 ? 1.0 : 0.0;
    if (success_prob == 1.0)
        return x_min <= trials ? 1.0 : 0.0;

    const long double log_p = std::log(static_cast<long double>(success_prob));
    const long double log_q = std::log1p(-static_cast<long double>(success_prob));
    return tail_sum(0, trials, x_min, [&](std::int64_t x) {
        return log_choose(trials, x) + x * log_p + (trials - x) * log_q;
    });
}

double binomial_cdf(std::int64_t trials, double success_prob, std::int64_t x_max)
{
    if (x_max < 0)
        return 0.0;
    if (x_max >= trials)
        return 1.0;
    // P(X <= x_max) is the upper tail of the mirrored binomial.
    return binomial_tail(trials, 1.0 - success_prob, trials - x_max);
}

double poisson_pmf(double mean, std::int64_t k)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw DomainError("Poisson mean must be finite and non-negative");
    if (k < 0)
        return 0.0;
    if (mean == 0.0)
        return k == 0 ? 1.0 : 0.0;
    const long double m = mean;
    return checked_probability(std::exp(-m + k * std::log(m) - log_factorials()(k)));
}

double poisson_upper_tail(double mean, std::int64_t x_max)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw DomainError("Poisson mean must be finite and non-negative");
    if (x_max < 0)
        return 1.0;
    if (mean == 0.0)
        return 0.0;
    const long double m = mean;
    const long double log_m = std::log(m);
    detail::CompensatedSum acc;
    for (std::int64_t x = x_max + 1;; ++x) {
        const long double term = std::exp(-m + x * log_m - log_factorials()(x));
        acc.add(term);
        if (x > m && term <= acc.value() * 1e-20L)
            break;
        if (x > m && acc.value() == 0.0L)
            break;
    }
    return checked_probability(acc.value());
}

double chi2_survival_even(double x, std::int64_t dof)
{
    if (dof < 2 || dof % 2 != 0)
        throw DomainError("chi2_survival_even requires an even, positive number of degrees of freedom");
    if (!(x >= 0.0))
        throw DomainError("chi-squared statistic must be non-negative");
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    const long double half = static_cast<long double>(x) / 2.0L;
    const long double log_half = std::log(half);
    detail::CompensatedSum acc;
    for (std::int64_t j = 0; j < dof / 2; ++j)
        acc.add(std::exp(-half + j * log_half - log_factorials()(j)));
    return checked_probability(acc.value());
}

double convolve_tail(const DiscreteDist& d1, const DiscreteDist& d2, std::int64_t s_min)
{
    if (s_min <= d1.support_min() + d2.support_min())
        return 1.0;
    detail::CompensatedSum acc;
    for (std::int64_t a = d1.support_min(); a <= d1.support_max(); ++a) {
        const long double pa = d1.pmf(a);
        for (std::int64_t b = std::max(d2.support_min(), s_min - a); b <= d2.support_max(); ++b)
            acc.add(pa * d2.pmf(b));
    }
    return checked_probability(acc.value());
}

double checked_probability(long double value)
{
    if (std::isnan(value) || value < -kBoundarySlack || value > 1.0L + kBoundarySlack)
        throw ConsistencyError("probability out of range: " + std::to_string(static_cast<double>(value)));
    return static_cast<double>(std::clamp(value, 0.0L, 1.0L));
}

} // namespace coincidence

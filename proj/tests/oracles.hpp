#pragma once

// Independent reference computations used only by the tests: exact integer
// combinatorics, brute-force enumeration and numerical quadrature. None of
// these call into the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using u128 = unsigned __int128;

/// Exact C(n, k); throws on overflow of the 128-bit accumulator.
inline u128 choose(std::int64_t n, std::int64_t k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    u128 c = 1;
    for (std::int64_t i = 0; i < k; ++i) {
        const u128 factor = static_cast<u128>(n - i);
        if (c > (~u128{0}) / factor)
            throw std::overflow_error("binomial coefficient exceeds 128 bits");
        c = c * factor / static_cast<u128>(i + 1);
    }
    return c;
}

inline long double to_ld(u128 v)
{
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    return static_cast<long double>(hi) * 18446744073709551616.0L + static_cast<long double>(lo);
}

/// Exact rational P(X >= x_min) for the hypergeometric, converted once at the end.
inline long double hypergeom_tail(std::int64_t n, std::int64_t r, std::int64_t k, std::int64_t x_min)
{
    u128 numerator = 0;
    for (std::int64_t x = std::max<std::int64_t>(x_min, 0); x <= std::min(r, k); ++x)
        numerator += choose(r, x) * choose(n - r, k - x);
    return to_ld(numerator) / to_ld(choose(n, k));
}

/// P(X = x) by placing k incidents on n shifts in every possible way and
/// counting placements with exactly x incidents among shifts [0, r).
inline double enumerate_hypergeom_pmf(int n, int r, int k, int x)
{
    std::int64_t hits = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k)
            continue;
        ++total;
        if (__builtin_popcount(mask & ((1u << r) - 1)) == x)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

/// Joint enumeration of two wards: P(X1 + X2 >= s_min).
inline double enumerate_two_ward_tail(int n1, int r1, int k1, int n2, int r2, int k2, int s_min)
{
    std::int64_t hits = 0, total = 0;
    for (std::uint32_t a = 0; a < (1u << n1); ++a) {
        if (__builtin_popcount(a) != k1)
            continue;
        for (std::uint32_t b = 0; b < (1u << n2); ++b) {
            if (__builtin_popcount(b) != k2)
                continue;
            ++total;
            const int s = __builtin_popcount(a & ((1u << r1) - 1)) + __builtin_popcount(b & ((1u << r2) - 1));
            hits += s >= s_min;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

/// Composite Simpson integration with n (even) panels.
inline long double simpson(const std::function<long double(long double)>& f, long double a, long double b, int n)
{
    const long double h = (b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0L : 2.0L);
    return s * h / 3.0L;
}

/// Upper tail of chi-squared with `dof` degrees of freedom by integrating the density.
inline long double chi2_survival_quadrature(long double x, int dof)
{
    const long double half = dof / 2.0L;
    const long double norm = std::pow(2.0L, half) * std::tgamma(half);
    auto density = [&](long double t) {
        return t <= 0 ? (dof == 2 ? 0.5L : 0.0L) : std::pow(t, half - 1) * std::exp(-t / 2) / norm;
    };
    return 1.0L - simpson(density, 0.0L, x, 200000);
}

/// exp(-m) m^k / k! with exp(-m) from its Taylor series.
inline long double poisson_pmf_series(long double m, int k)
{
    long double e = 0.0L, term = 1.0L;
    for (int i = 1; i < 200; ++i) {
        e += term;
        term *= -m / i;
    }
    long double p = e;
    for (int i = 1; i <= k; ++i)
        p *= m / i;
    return p;
}

} // namespace oracle

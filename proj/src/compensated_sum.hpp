#pragma once

#include <cmath>

namespace coincidence::detail {

// Neumaier's variant of Kahan summation in extended precision.
class CompensatedSum {
public:
    void add(long double term) noexcept
    {
        const long double t = sum_ + term;
        if (std::fabs(sum_) >= std::fabs(term))
            compensation_ += (sum_ - t) + term;
        else
            compensation_ += (term - t) + sum_;
        sum_ = t;
    }

    long double value() const noexcept { return sum_ + compensation_; }

private:
    long double sum_ = 0.0L;
    long double compensation_ = 0.0L;
};

} // namespace coincidence::detail

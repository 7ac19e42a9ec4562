#include "coincidence/frequentist.hpp"

#include "coincidence/distributions.hpp"
#include "coincidence/errors.hpp"
#include "compensated_sum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coincidence {

std::string_view to_string(TestMethod method)
{
    switch (method) {
    case TestMethod::elffers_pipeline: return "elffers_pipeline";
    case TestMethod::per_ward_tail: return "per_ward_tail";
    case TestMethod::bonferroni: return "bonferroni";
    case TestMethod::pooled_tail: return "pooled_tail";
    case TestMethod::convolved_sum: return "convolved_sum";
    case TestMethod::fisher_combined: return "fisher_combined";
    case TestMethod::conditional_binomial: return "conditional_binomial";
    }
    return "unknown";
}

double TestResult::p_value() const
{
    if (!is_p_value())
        throw std::logic_error("the multiplied per-ward product is not a p-value; use score()");
    return value;
}

TestResult ward_tail_p(const WardRoster& ward)
{
    ward.validate();
    const double p =
        hypergeom_tail(ward.total_shifts, ward.suspect_shifts, ward.total_incidents, ward.suspect_incidents);
    TestResult result;
    result.method = TestMethod::per_ward_tail;
    result.value = p;
    result.components = {{ward.name, p, 1.0}};
    result.notes = "P(suspect witnesses >= " + std::to_string(ward.suspect_incidents) + " incidents), " +
                   std::string(kConditioningNote);
    return result;
}

TestResult posthoc_multiply(const TestResult& tail, double multiplier)
{
    if (tail.method != TestMethod::per_ward_tail)
        throw DomainError("post hoc multiplication applies to a single-ward tail");
    if (!(multiplier >= 1.0) || !std::isfinite(multiplier))
        throw DomainError("post hoc multiplier must be at least 1");
    TestResult result = tail;
    result.value = std::min(1.0, multiplier * tail.value);
    for (auto& c : result.components)
        c.multiplier *= multiplier;
    result.notes += "; multiplied by " + std::to_string(multiplier) + " as a post hoc correction";
    return result;
}

TestResult elffers_pipeline(const CaseFile& file, std::int64_t multiplier, std::optional<std::string> multiplied_ward)
{
    file.validate();
    const std::string flagged = multiplied_ward.value_or(file.wards.front().name);
    (void)file.ward(flagged);

    TestResult result;
    result.method = TestMethod::elffers_pipeline;
    long double product = 1.0L;
    for (const auto& ward : file.wards) {
        TestResult tail = ward_tail_p(ward);
        if (ward.name == flagged)
            tail = posthoc_multiply(tail, static_cast<double>(multiplier));
        product *= tail.value;
        result.components.push_back(tail.components.front());
    }
    result.value = checked_probability(product);
    result.notes = "NOT A P-VALUE: product of per-ward tail probabilities with a post hoc multiplier of " +
                   std::to_string(multiplier) + " on " + flagged +
                   " only. Multiplying p-values does not yield a p-value and is biased small; each factor is " +
                   std::string(kConditioningNote) + ".";
    return result;
}

TestResult bonferroni_min(std::span<const double> p_values, std::int64_t nurse_count)
{
    if (p_values.empty())
        throw DomainError("Bonferroni correction needs at least one p-value");
    if (nurse_count < static_cast<std::int64_t>(p_values.size()))
        throw DomainError("nurse count is smaller than the number of supplied p-values");
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("p-values must lie in [0, 1]");
    }
    const double smallest = *std::min_element(p_values.begin(), p_values.end());
    TestResult result;
    result.method = TestMethod::bonferroni;
    result.value = std::min(1.0, static_cast<double>(nurse_count) * smallest);
    result.statistic = smallest;
    for (std::size_t i = 0; i < p_values.size(); ++i)
        result.components.push_back({"nurse " + std::to_string(i + 1), p_values[i], static_cast<double>(nurse_count)});
    result.notes = "smallest of the nurses' p-values times the number of nurses (" + std::to_string(nurse_count) +
                   "); nurses without a listed p-value count as p = 1";
    return result;
}

TestResult pooled_test(const CaseFile& file, const std::vector<std::string>& names)
{
    const WardRoster pooled = pool_wards(file, names);
    TestResult result = ward_tail_p(pooled);
    result.method = TestMethod::pooled_tail;
    result.notes += "; wards pooled into a single roster (" + pooled.name + ")";
    return result;
}

TestResult convolved_sum_test(const CaseFile& file, const std::vector<std::string>& names)
{
    if (names.empty())
        throw ValidationError("", "wards", "convolved test needs at least one ward");
    (void)pool_wards(file, names); // rejects unknown and duplicate names

    TestResult result;
    result.method = TestMethod::convolved_sum;
    std::int64_t observed = 0;
    std::optional<DiscreteDist> sum_dist;
    for (const auto& name : names) {
        const WardRoster& w = file.ward(name);
        w.validate();
        observed += w.suspect_incidents;
        DiscreteDist d = DiscreteDist::hypergeometric(w.total_shifts, w.suspect_shifts, w.total_incidents);
        result.components.push_back({w.name, hypergeom_tail(w.total_shifts, w.suspect_shifts, w.total_incidents,
                                                            w.suspect_incidents),
                                     1.0});
        if (!sum_dist) {
            sum_dist = std::move(d);
            continue;
        }
        // Fold into the running distribution of the sum.
        const std::int64_t lo = sum_dist->support_min() + d.support_min();
        const std::int64_t hi = sum_dist->support_max() + d.support_max();
        std::vector<detail::CompensatedSum> acc(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t a = sum_dist->support_min(); a <= sum_dist->support_max(); ++a)
            for (std::int64_t b = d.support_min(); b <= d.support_max(); ++b)
                acc[static_cast<std::size_t>(a + b - lo)].add(static_cast<long double>(sum_dist->pmf(a)) * d.pmf(b));
        std::vector<double> masses;
        for (const auto& s : acc)
            masses.push_back(static_cast<double>(s.value()));
        sum_dist = DiscreteDist(lo, std::move(masses));
    }

    if (names.size() == 1) {
        result.value = result.components.front().p_value;
    } else if (names.size() == 2) {
        const WardRoster& a = file.ward(names[0]);
        const WardRoster& b = file.ward(names[1]);
        result.value = convolve_tail(DiscreteDist::hypergeometric(a.total_shifts, a.suspect_shifts, a.total_incidents),
                                     DiscreteDist::hypergeometric(b.total_shifts, b.suspect_shifts, b.total_incidents),
                                     observed);
    } else {
        detail::CompensatedSum tail;
        for (std::int64_t s = std::max(observed, sum_dist->support_min()); s <= sum_dist->support_max(); ++s)
            tail.add(sum_dist->pmf(s));
        result.value = checked_probability(tail.value());
    }
    result.statistic = static_cast<double>(observed);
    result.notes = "P(sum of independent per-ward hypergeometric counts >= " + std::to_string(observed) +
                   "), each ward " + std::string(kConditioningNote) + " in that ward";
    return result;
}

TestResult fisher_combine(std::span<const double> p_values)
{
    if (p_values.empty())
        throw DomainError("Fisher combination needs at least one p-value");
    detail::CompensatedSum log_sum;
    for (double p : p_values) {
        if (p == 0.0)
            throw DomainError("degenerate component p-value: 0");
        if (!(p > 0.0 && p <= 1.0))
            throw DomainError("p-values must lie in (0, 1]");
        log_sum.add(std::log(static_cast<long double>(p)));
    }
    const double statistic = static_cast<double>(-2.0L * log_sum.value());
    TestResult result;
    result.method = TestMethod::fisher_combined;
    result.statistic = statistic == 0.0 ? 0.0 : statistic; // normalise -0
    result.value = chi2_survival_even(*result.statistic, 2 * static_cast<std::int64_t>(p_values.size()));
    for (std::size_t i = 0; i < p_values.size(); ++i)
        result.components.push_back({"component " + std::to_string(i + 1), p_values[i], 1.0});
    result.notes = "-2 sum ln p referred to chi-squared with " + std::to_string(2 * p_values.size()) +
                   " degrees of freedom; assumes independent components";
    return result;
}

} // namespace coincidence

#pragma once

// Conditional (hypergeometric) tests on roster data, multiplicity corrections
// and ways of combining evidence across wards.

#include "coincidence/case_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coincidence {

enum class TestMethod {
    elffers_pipeline,
    per_ward_tail,
    bonferroni,
    pooled_tail,
    convolved_sum,
    fisher_combined,
    conditional_binomial,
};

std::string_view to_string(TestMethod method);

struct TestComponent {
    std::string ward;
    double p_value = 1.0;
    double multiplier = 1.0;

    friend bool operator==(const TestComponent&, const TestComponent&) = default;
};

/// Outcome of a frequentist procedure.
///
/// The product returned by elffers_pipeline() lives in [0, 1] but is not a
/// p-value; p_value() refuses to hand it out and score() must be used instead.
struct TestResult {
    TestMethod method = TestMethod::per_ward_tail;
    double value = 1.0;
    std::optional<double> statistic;
    std::vector<TestComponent> components;
    std::string notes;

    bool is_p_value() const noexcept { return method != TestMethod::elffers_pipeline; }

    /// Throws std::logic_error for elffers_pipeline results.
    double p_value() const;
    double score() const noexcept { return value; }
};

/// Conditioning statement attached to every hypergeometric result.
inline constexpr std::string_view kConditioningNote =
    "conditional on the total number of incidents and the total number of shifts";

TestResult ward_tail_p(const WardRoster& ward);

/// min(1, multiplier * p) for a single-ward tail. Throws DomainError if multiplier < 1.
TestResult posthoc_multiply(const TestResult& tail, double multiplier);

/// Product of per-ward tails with a post hoc multiplier on one ward only
/// (the first ward unless named). The product is a score, not a p-value.
TestResult elffers_pipeline(const CaseFile& file, std::int64_t multiplier,
                            std::optional<std::string> multiplied_ward = std::nullopt);

/// min(1, nurse_count * min p); nurses without a listed p-value count as p = 1.
TestResult bonferroni_min(std::span<const double> p_values, std::int64_t nurse_count);

TestResult pooled_test(const CaseFile& file, const std::vector<std::string>& names);

/// P(sum of independent per-ward hypergeometric counts >= observed suspect total).
TestResult convolved_sum_test(const CaseFile& file, const std::vector<std::string>& names);

/// Fisher's method: T = -2 sum ln p_i referred to chi2 with 2 * count dof.
TestResult fisher_combine(std::span<const double> p_values);

} // namespace coincidence

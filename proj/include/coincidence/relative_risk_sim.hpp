#pragma once

// Relative risk of a nurse against the pooled rate of the others, and the null
// distribution of the largest relative risk in a ward of equal-shift nurses.

#include "coincidence/case_model.hpp"
#include "coincidence/counter_rng.hpp"
#include "coincidence/poisson_evidence.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coincidence {

struct RelativeRisk {
    double value = 1.0; // may be +inf
    double suspect_rate = 0.0;
    double others_rate = 0.0;
};

/// (k_j / r_j) / (k_others / r_others). +inf when only the suspect has incidents,
/// 1 when nobody has. DomainError on zero shift counts.
RelativeRisk relative_risk(std::int64_t suspect_incidents, std::int64_t suspect_shifts, std::int64_t other_incidents,
                           std::int64_t other_shifts);

/// Relative risk of one nurse when all I nurses worked equally many shifts:
/// k_j (I - 1) / (sum k - k_j). `nurse_incidents` must occur in `all_counts`.
double equal_shift_rr(std::int64_t nurse_incidents, std::span<const std::int64_t> all_counts);

struct SimulationConfig {
    std::int64_t nurse_count = 2;
    std::int64_t shifts_per_nurse = 1;
    double mu = 0.0;
    std::int64_t replicates = 100000;
    std::uint64_t seed = 0;

    void validate() const;
    double mean_per_nurse() const { return mu * static_cast<double>(shifts_per_nurse); }

    friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct SimulationReport {
    SimulationConfig config;
    double threshold = 0.0;
    std::int64_t exceed_count = 0;
    std::int64_t degenerate_count = 0;
    double p_value = 0.0;
    double std_error = 0.0;

    friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

/// Draws one Poisson(mean) variate. Inversion below mean 10, PTRS above.
std::int64_t sample_poisson(PhiloxStream& rng, double mean);

/// Fraction of simulated wards whose largest relative risk reaches `threshold`.
/// Each replicate draws I independent Poisson(mu r) counts from its own
/// Philox stream (seed, replicate index), so the report does not depend on
/// `workers` (0 picks the hardware concurrency).
/// Ties count as exceeding; all-zero wards have every relative risk equal to 1
/// and are tallied in degenerate_count.
SimulationReport simulate_max_rr(const SimulationConfig& config, double threshold, unsigned workers = 0);

/// Exact P(max relative risk >= threshold) by enumerating all count vectors in
/// [0, count_cap]^I, I <= 4. Throws DomainError when the Poisson mass beyond
/// the cap exceeds 1e-10.
double exact_max_rr_tail(std::int64_t nurse_count, std::int64_t shifts_per_nurse, double mu, double threshold,
                         std::int64_t count_cap);

/// Smallest cap satisfying exact_max_rr_tail's truncation bound.
std::int64_t minimal_count_cap(std::int64_t nurse_count, double mean_per_nurse);

struct DerivedSimConfig {
    SimulationConfig config;
    double exact_nurse_ratio = 0.0;      // n / r before rounding
    std::int64_t floor_nurse_count = 0;  // floor(n / r)
    double observed_rr = 0.0;            // the suspect's relative risk, used as threshold
    IntensityEstimate intensity;
};

/// I = round(n / r) equal-shift nurses working the suspect's r shifts each,
/// with mu estimated from the pooled roster of the named wards.
DerivedSimConfig derive_sim_config(const CaseFile& file, const std::vector<std::string>& names, MuBasis basis,
                                   std::int64_t replicates, std::uint64_t seed);

DerivedSimConfig derive_sim_config(const WardRoster& roster, const IntensityEstimate& intensity,
                                   std::int64_t replicates, std::uint64_t seed);

} // namespace coincidence

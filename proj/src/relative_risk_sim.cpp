#include "coincidence/relative_risk_sim.hpp"

#include "coincidence/distributions.hpp"
#include "coincidence/errors.hpp"
#include "compensated_sum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace coincidence {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr long double kTruncationBound = 1e-10L;

struct ReplicateOutcome {
    bool exceeds;
    bool degenerate;
};

// Largest relative risk among equal-shift nurses belongs to the largest count.
ReplicateOutcome classify(std::int64_t max_count, std::int64_t total, std::int64_t nurses, double threshold)
{
    if (total == 0)
        return {1.0 >= threshold, true};
    if (total == max_count)
        return {true, false};
    const long double lhs = static_cast<long double>(max_count) * static_cast<long double>(nurses - 1);
    const long double rhs = static_cast<long double>(threshold) * static_cast<long double>(total - max_count);
    return {lhs >= rhs, false};
}

struct Tally {
    std::int64_t exceed = 0;
    std::int64_t degenerate = 0;
};

Tally run_replicates(const SimulationConfig& config, double threshold, std::int64_t first, std::int64_t last)
{
    Tally tally;
    const double mean = config.mean_per_nurse();
    for (std::int64_t rep = first; rep < last; ++rep) {
        PhiloxStream rng(config.seed, static_cast<std::uint64_t>(rep));
        std::int64_t total = 0;
        std::int64_t max_count = 0;
        for (std::int64_t i = 0; i < config.nurse_count; ++i) {
            const std::int64_t k = sample_poisson(rng, mean);
            total += k;
            max_count = std::max(max_count, k);
        }
        const auto outcome = classify(max_count, total, config.nurse_count, threshold);
        tally.exceed += outcome.exceeds;
        tally.degenerate += outcome.degenerate;
    }
    return tally;
}

} // namespace

RelativeRisk relative_risk(std::int64_t suspect_incidents, std::int64_t suspect_shifts, std::int64_t other_incidents,
                           std::int64_t other_shifts)
{
    if (suspect_shifts < 1 || other_shifts < 1)
        throw DomainError("relative risk needs at least one shift on each side");
    if (suspect_incidents < 0 || other_incidents < 0)
        throw DomainError("incident counts must be non-negative");
    RelativeRisk rr;
    rr.suspect_rate = static_cast<double>(suspect_incidents) / static_cast<double>(suspect_shifts);
    rr.others_rate = static_cast<double>(other_incidents) / static_cast<double>(other_shifts);
    if (other_incidents == 0)
        rr.value = suspect_incidents == 0 ? 1.0 : kInfinity;
    else
        rr.value = static_cast<double>(static_cast<long double>(suspect_incidents) * other_shifts /
                                       (static_cast<long double>(suspect_shifts) * other_incidents));
    return rr;
}

double equal_shift_rr(std::int64_t nurse_incidents, std::span<const std::int64_t> all_counts)
{
    if (all_counts.size() < 2)
        throw DomainError("relative risk needs at least two nurses");
    if (std::find(all_counts.begin(), all_counts.end(), nurse_incidents) == all_counts.end())
        throw DomainError("nurse's incident count does not occur among the ward counts");
    if (std::any_of(all_counts.begin(), all_counts.end(), [](std::int64_t k) { return k < 0; }))
        throw DomainError("incident counts must be non-negative");
    const std::int64_t total = std::accumulate(all_counts.begin(), all_counts.end(), std::int64_t{0});
    const std::int64_t others = total - nurse_incidents;
    if (others == 0)
        return nurse_incidents == 0 ? 1.0 : kInfinity;
    return static_cast<double>(static_cast<long double>(nurse_incidents) * static_cast<long double>(all_counts.size() - 1) /
                               others);
}

void SimulationConfig::validate() const
{
    if (nurse_count < 2)
        throw DomainError("simulation needs at least two nurses");
    if (shifts_per_nurse < 1)
        throw DomainError("simulation needs at least one shift per nurse");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw DomainError("simulation intensity must be positive and finite");
    if (replicates < 1)
        throw DomainError("simulation needs at least one replicate");
}

std::int64_t sample_poisson(PhiloxStream& rng, double mean)
{
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw DomainError("Poisson mean must be finite and non-negative");
    if (mean == 0.0)
        return 0;

    if (mean < 10.0) {
        const double u = rng.uniform();
        double p = std::exp(-mean);
        double cdf = p;
        std::int64_t k = 0;
        while (u > cdf) {
            ++k;
            p *= mean / static_cast<double>(k);
            const double next = cdf + p;
            if (next == cdf)
                break; // remaining mass below double resolution
            cdf = next;
        }
        return k;
    }

    // Hormann's transformed rejection with squeeze (PTRS).
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr)
            return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

SimulationReport simulate_max_rr(const SimulationConfig& config, double threshold, unsigned workers)
{
    config.validate();
    if (!(threshold >= 0.0))
        throw DomainError("relative-risk threshold must be non-negative");
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    const auto worker_count =
        static_cast<std::int64_t>(std::min<std::int64_t>(workers, config.replicates));

    std::vector<Tally> tallies(static_cast<std::size_t>(worker_count));
    if (worker_count == 1) {
        tallies[0] = run_replicates(config, threshold, 0, config.replicates);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(static_cast<std::size_t>(worker_count));
        for (std::int64_t w = 0; w < worker_count; ++w) {
            const std::int64_t first = config.replicates * w / worker_count;
            const std::int64_t last = config.replicates * (w + 1) / worker_count;
            threads.emplace_back([&, w, first, last] {
                tallies[static_cast<std::size_t>(w)] = run_replicates(config, threshold, first, last);
            });
        }
    }

    SimulationReport report;
    report.config = config;
    report.threshold = threshold;
    for (const auto& t : tallies) {
        report.exceed_count += t.exceed;
        report.degenerate_count += t.degenerate;
    }
    const double n = static_cast<double>(config.replicates);
    report.p_value = static_cast<double>(report.exceed_count) / n;
    report.std_error = std::sqrt(report.p_value * (1.0 - report.p_value) / n);
    return report;
}

std::int64_t minimal_count_cap(std::int64_t nurse_count, double mean_per_nurse)
{
    std::int64_t cap = 0;
    while (static_cast<long double>(nurse_count) * poisson_upper_tail(mean_per_nurse, cap) >= kTruncationBound)
        ++cap;
    return cap;
}

double exact_max_rr_tail(std::int64_t nurse_count, std::int64_t shifts_per_nurse, double mu, double threshold,
                         std::int64_t count_cap)
{
    if (nurse_count < 2 || nurse_count > 4)
        throw DomainError("exact enumeration supports 2 to 4 nurses");
    if (shifts_per_nurse < 1 || !(mu > 0.0))
        throw DomainError("exact enumeration needs positive shifts and intensity");
    if (!(threshold >= 0.0))
        throw DomainError("relative-risk threshold must be non-negative");
    if (count_cap < 0)
        throw DomainError("count cap must be non-negative");
    const double mean = mu * static_cast<double>(shifts_per_nurse);
    if (static_cast<long double>(nurse_count) * poisson_upper_tail(mean, count_cap) >= kTruncationBound)
        throw DomainError("count cap " + std::to_string(count_cap) + " leaves Poisson mass above 1e-10");

    std::vector<long double> pmf(static_cast<std::size_t>(count_cap) + 1);
    for (std::int64_t k = 0; k <= count_cap; ++k)
        pmf[static_cast<std::size_t>(k)] = poisson_pmf(mean, k);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(nurse_count), 0);
    detail::CompensatedSum tail;
    for (;;) {
        long double prob = 1.0L;
        std::int64_t total = 0;
        std::int64_t max_count = 0;
        for (std::int64_t k : counts) {
            prob *= pmf[static_cast<std::size_t>(k)];
            total += k;
            max_count = std::max(max_count, k);
        }
        if (classify(max_count, total, nurse_count, threshold).exceeds)
            tail.add(prob);

        std::size_t digit = 0;
        while (digit < counts.size() && counts[digit] == count_cap)
            counts[digit++] = 0;
        if (digit == counts.size())
            break;
        ++counts[digit];
    }
    return checked_probability(tail.value());
}

DerivedSimConfig derive_sim_config(const WardRoster& roster, const IntensityEstimate& intensity,
                                   std::int64_t replicates, std::uint64_t seed)
{
    roster.validate();
    if (roster.suspect_shifts == 0)
        throw DomainError("cannot derive a simulation from a suspect with zero shifts");
    DerivedSimConfig derived;
    derived.exact_nurse_ratio = static_cast<double>(roster.total_shifts) / static_cast<double>(roster.suspect_shifts);
    derived.floor_nurse_count = roster.total_shifts / roster.suspect_shifts;
    derived.config.nurse_count = std::llround(derived.exact_nurse_ratio);
    derived.config.shifts_per_nurse = roster.suspect_shifts;
    derived.config.mu = intensity.mu();
    derived.config.replicates = replicates;
    derived.config.seed = seed;
    derived.config.validate();
    derived.intensity = intensity;
    derived.observed_rr =
        relative_risk(roster.suspect_incidents, roster.suspect_shifts, roster.other_incidents(), roster.other_shifts())
            .value;
    return derived;
}

DerivedSimConfig derive_sim_config(const CaseFile& file, const std::vector<std::string>& names, MuBasis basis,
                                   std::int64_t replicates, std::uint64_t seed)
{
    const WardRoster pooled = pool_wards(file, names);
    return derive_sim_config(pooled, estimate_mu(pooled, basis, file.normal_rate), replicates, seed);
}

} // namespace coincidence

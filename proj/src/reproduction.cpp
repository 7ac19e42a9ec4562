#include "coincidence/reproduction.hpp"

#include "coincidence/bayes_chain.hpp"
#include "coincidence/case_model.hpp"
#include "coincidence/counter_rng.hpp"
#include "coincidence/distributions.hpp"
#include "coincidence/frequentist.hpp"
#include "coincidence/poisson_evidence.hpp"
#include "coincidence/relative_risk_sim.hpp"
#include "coincidence/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace coincidence {

namespace {

constexpr std::int64_t kReplicates = 100000;

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

bool rounds_to(double v, double target) { return std::fabs(round_significant(v, 2) - target) <= 1e-12 * target; }

double max_normalization_error()
{
    double worst = 0.0;
    for (std::int64_t n = 0; n <= 30; ++n)
        for (std::int64_t r = 0; r <= n; ++r)
            for (std::int64_t k = 0; k <= n; ++k) {
                long double total = 0.0L;
                for (std::int64_t x = 0; x <= std::min(r, k); ++x)
                    total += hypergeom_pmf(n, r, k, x);
                worst = std::max(worst, static_cast<double>(std::fabs(total - 1.0L)));
            }
    return worst;
}

double direct_binomial_coefficient(std::int64_t n, std::int64_t k)
{
    double c = 1.0;
    for (std::int64_t i = 0; i < k; ++i)
        c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

// Worst gap between the p-dependent ratio of binomial products and the
// hypergeometric pmf, over n <= 30 and p in {0.1, 0.5, 0.9}.
double max_cancellation_error()
{
    double worst = 0.0;
    for (double p : {0.1, 0.5, 0.9})
        for (std::int64_t n = 1; n <= 30; ++n)
            for (std::int64_t r = 0; r <= n; ++r)
                for (std::int64_t k = 0; k <= n; ++k)
                    for (std::int64_t x = std::max<std::int64_t>(0, k - (n - r)); x <= std::min(r, k); ++x) {
                        const double suspect = direct_binomial_coefficient(r, x) * std::pow(p, double(x)) *
                                               std::pow(1 - p, double(r - x));
                        const double others = direct_binomial_coefficient(n - r, k - x) *
                                              std::pow(p, double(k - x)) * std::pow(1 - p, double(n - r - k + x));
                        const double all = direct_binomial_coefficient(n, k) * std::pow(p, double(k)) *
                                           std::pow(1 - p, double(n - k));
                        worst = std::max(worst, std::fabs(suspect * others / all - hypergeom_pmf(n, r, k, x)));
                    }
    return worst;
}

double fisher_uniformity_ks(std::uint64_t seed)
{
    constexpr std::size_t kTriples = 10000;
    std::vector<double> combined;
    combined.reserve(kTriples);
    for (std::size_t i = 0; i < kTriples; ++i) {
        PhiloxStream rng(seed, i);
        const double triple[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
        combined.push_back(fisher_combine(triple).value);
    }
    std::sort(combined.begin(), combined.end());
    double d = 0.0;
    const double n = static_cast<double>(kTriples);
    for (std::size_t i = 0; i < kTriples; ++i)
        d = std::max({d, (static_cast<double>(i) + 1) / n - combined[i], combined[i] - static_cast<double>(i) / n});
    return d;
}

double max_fisher_single_error()
{
    double worst = 0.0;
    for (double p : {1.0, 0.5, 0.1, 1e-3, 1e-8, 0.987654321})
        worst = std::max(worst, std::fabs(fisher_combine(std::span<const double>(&p, 1)).value - p));
    return worst;
}

// Largest |simulated - exact| in units of the exact binomial standard error.
double max_simulation_z(std::uint64_t seed, unsigned workers)
{
    struct Case {
        std::int64_t nurses, shifts;
        double mu, threshold;
    };
    const Case cases[] = {{2, 10, 0.1, 2.0}, {3, 1, 1.0, 1.0}, {3, 4, 0.5, 3.0}, {3, 2, 1.0, 2.5}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const SimulationConfig config{c.nurses, c.shifts, c.mu, kReplicates, seed};
        const double exact = exact_max_rr_tail(c.nurses, c.shifts, c.mu, c.threshold,
                                               minimal_count_cap(c.nurses, config.mean_per_nurse()));
        const double simulated = simulate_max_rr(config, c.threshold, workers).p_value;
        const double se = std::sqrt(std::max(exact * (1.0 - exact), 1e-12) / kReplicates);
        worst = std::max(worst, std::fabs(simulated - exact) / se);
    }
    return worst;
}

} // namespace

double round_significant(double v, int digits)
{
    if (v == 0.0 || !std::isfinite(v))
        return v;
    const double exponent = std::floor(std::log10(std::fabs(v))) - (digits - 1);
    const double scale = std::pow(10.0, exponent);
    return std::round(v / scale) * scale;
}

std::vector<ReproductionRow> reproduce_paper(std::uint64_t seed, unsigned workers)
{
    std::vector<ReproductionRow> rows;
    auto add = [&](std::string label, std::string published, double computed, std::string tolerance, bool passed) {
        rows.push_back({std::move(label), std::move(published), computed, std::move(tolerance), passed});
    };

    const CaseFile original = builtin_paper_case(DataVariant::original);
    const CaseFile corrected = builtin_paper_case(DataVariant::corrected);
    const std::vector<std::string> rkz = {"RKZ-41", "RKZ-42"};

    const double jkz = posthoc_multiply(ward_tail_p(corrected.ward("JKZ")), 27).value;
    add("JKZ tail x 27 nurses", "< 1/300,000", jkz, "strict bound", jkz < 1.0 / 300000.0);

    const double pooled = pooled_test(corrected, rkz).value;
    add("pooled RKZ tail", "0.0038", pooled, "2 significant figures", rounds_to(pooled, 0.0038));

    const double convolved = convolved_sum_test(corrected, rkz).value;
    add("convolved RKZ sum", "0.022", convolved, "2 significant figures", rounds_to(convolved, 0.022));

    const WardRoster rkz_pool = pool_wards(corrected, rkz);
    const SuspectIntensity observed = SuspectIntensity::observed(6, 61);
    const LikelihoodRatio lr1 = lr_poisson(estimate_mu(rkz_pool, MuBasis::exclude_suspect), observed, 61, 6);
    const LikelihoodRatio lr2 = lr_poisson(estimate_mu(rkz_pool, MuBasis::include_suspect), observed, 61, 6);
    add("LR case I (mu = 13/614)", "90.7", lr1.value, "+/- 0.05", std::fabs(lr1.value - 90.7) <= 0.05);
    add("LR case II (mu = 19/675)", "about 25", lr2.value, "[24.5, 25.5]", within(lr2.value, 24.5, 25.5));
    const bool both_slight = lr1.verbal.band == VerbalBand::slightly_more && lr2.verbal.band == VerbalBand::slightly_more &&
                             lr1.verbal.direction == Direction::favors_prosecution &&
                             lr2.verbal.direction == Direction::favors_prosecution;
    add("LR verbal band", "slightly more likely under H_p", both_slight ? 1.0 : 0.0, "both ratios", both_slight);

    const auto chain = chain_from_prior_probability(kPublishedPriorProbability, published_case_evidence());
    const double odds = chain.shortcut.posterior_odds();
    add("posterior odds", "8.75", odds, "1e-12 relative", std::fabs(odds - 8.75) <= 1e-12 * 8.75);
    const double post = posterior_probability(chain.shortcut);
    add("posterior probability", "close to 90%", post, "[0.897, 0.898]", within(post, 0.897, 0.898));

    const double rr = relative_risk(6, 61, 13, 614).value;
    add("relative risk whole RKZ", "4.65", rr, "[4.64, 4.66]", within(rr, 4.64, 4.66));

    struct SimCell {
        std::vector<std::string> wards;
        MuBasis basis;
        double published;
        const char* label;
    };
    const SimCell cells[] = {
        {rkz, MuBasis::exclude_suspect, 0.121, "simulated p whole RKZ, mu = 13/614"},
        {rkz, MuBasis::include_suspect, 0.042, "simulated p whole RKZ, mu = 19/675"},
        {{"RKZ-41"}, MuBasis::exclude_suspect, 0.787, "simulated p RKZ-41, mu = 4/333"},
        {{"RKZ-41"}, MuBasis::include_suspect, 0.681, "simulated p RKZ-41, mu = 5/336"},
        {{"RKZ-42"}, MuBasis::exclude_suspect, 0.383, "simulated p RKZ-42, mu = 9/281"},
        {{"RKZ-42"}, MuBasis::include_suspect, 0.286, "simulated p RKZ-42, mu = 14/339"},
    };
    double whole_exclude = 0.0, whole_include = 0.0;
    for (const auto& cell : cells) {
        const DerivedSimConfig derived = derive_sim_config(corrected, cell.wards, cell.basis, kReplicates, seed);
        const double p = simulate_max_rr(derived.config, derived.observed_rr, workers).p_value;
        char published[16];
        std::snprintf(published, sizeof published, "%.3f", cell.published);
        add(cell.label, published, p, "+/- 0.05", std::fabs(p - cell.published) <= 0.05);
        if (&cell == &cells[0])
            whole_exclude = p;
        if (&cell == &cells[1])
            whole_include = p;
    }
    add("simulated p ordering whole RKZ", "0.042 < 0.121", whole_include - whole_exclude, "difference < 0",
        whole_include < whole_exclude);

    const double product = elffers_pipeline(original, 27).score();
    add("multiplied product, original data", "< 1 in 342 million (cited)", product, "[1e-10, 1e-7]",
        within(product, 1e-10, 1e-7) && product < 1e-7);

    const double normalization = max_normalization_error();
    add("hypergeometric normalization n <= 30", "1", normalization, "max error <= 1e-12", normalization <= 1e-12);
    const double cancellation = max_cancellation_error();
    add("p cancels from the binomial ratio", "exact", cancellation, "max error <= 1e-10", cancellation <= 1e-10);
    const double ks = fisher_uniformity_ks(seed);
    add("Fisher combination uniform under null", "uniform", ks, "KS < 0.02", ks < 0.02);
    const double single = max_fisher_single_error();
    add("Fisher combination of one p-value", "p", single, "max error <= 1e-12", single <= 1e-12);
    const double z = max_simulation_z(seed, workers);
    add("simulation vs exact enumeration", "agree", z, "within 4 SE", z <= 4.0);

    const DerivedSimConfig derived = derive_sim_config(corrected, rkz, MuBasis::exclude_suspect, kReplicates, seed);
    const SimulationReport one = simulate_max_rr(derived.config, derived.observed_rr, 1);
    const bool identical = one == simulate_max_rr(derived.config, derived.observed_rr, 2) &&
                           one == simulate_max_rr(derived.config, derived.observed_rr, 8);
    add("simulation identical on 1, 2, 8 workers", "identical", identical ? 1.0 : 0.0, "bit-identical", identical);

    const TestResult binomial = conditional_binomial_test(rkz_pool);
    const double ratio = binomial.value / pooled;
    add("conditional binomial / pooled hypergeometric", "almost the same", ratio, "within a factor of 1.5",
        ratio <= 1.5 && ratio >= 1.0 / 1.5);

    return rows;
}

std::string render_reproduction(const std::vector<ReproductionRow>& rows, std::uint64_t seed)
{
    std::ostringstream out;
    out << "seed: " << seed << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-46s %-30s %-24s %-24s %s\n", "label", "published", "computed", "tolerance",
                  "result");
    out << line;
    std::size_t failures = 0;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%-46s %-30s %-24s %-24s %s\n", row.label.c_str(), row.paper_value.c_str(),
                      format_number(row.computed).c_str(), row.tolerance.c_str(), row.passed ? "PASS" : "FAIL");
        out << line;
        failures += !row.passed;
    }
    out << rows.size() - failures << "/" << rows.size() << " rows pass\n";
    return out.str();
}

} // namespace coincidence

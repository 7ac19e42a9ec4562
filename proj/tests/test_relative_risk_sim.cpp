#include "coincidence/distributions.hpp"
#include "coincidence/errors.hpp"
#include "coincidence/relative_risk_sim.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

using namespace coincidence;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute force over [0, cap]^3 with relative risks computed nurse by nurse.
double brute_max_rr_tail3(std::int64_t shifts, double mu, double threshold, int cap)
{
    const long double mean = static_cast<long double>(mu) * shifts;
    long double tail = 0.0L;
    for (int a = 0; a <= cap; ++a)
        for (int b = 0; b <= cap; ++b)
            for (int c = 0; c <= cap; ++c) {
                const std::array<std::int64_t, 3> counts{a, b, c};
                double best = 0.0;
                for (auto k : counts)
                    best = std::max(best, relative_risk(k, shifts, a + b + c - k, 2 * shifts).value);
                if (best >= threshold)
                    tail += oracle::poisson_pmf_series(mean, a) * oracle::poisson_pmf_series(mean, b) *
                            oracle::poisson_pmf_series(mean, c);
            }
    return static_cast<double>(tail);
}

} // namespace

TEST_CASE("relative_risk")
{
    const RelativeRisk rkz = relative_risk(6, 61, 13, 614);
    CHECK(rkz.value >= 4.64);
    CHECK(rkz.value <= 4.66);
    CHECK(rkz.value == doctest::Approx(6.0 * 614 / (61.0 * 13)).epsilon(1e-15));
    CHECK(relative_risk(2, 10, 4, 20).value == 1.0);
    CHECK(relative_risk(1, 3, 4, 333).value == doctest::Approx(27.75).epsilon(1e-15));
    CHECK(relative_risk(3, 10, 0, 20).value == kInf);
    CHECK(relative_risk(0, 10, 0, 20).value == 1.0);
    CHECK(relative_risk(0, 10, 5, 20).value == 0.0);
    CHECK_THROWS_AS(relative_risk(1, 0, 1, 5), DomainError);
    CHECK_THROWS_AS(relative_risk(1, 5, 1, 0), DomainError);
}

TEST_CASE("equal_shift_rr")
{
    const std::int64_t counts[] = {2, 1, 1};
    CHECK(equal_shift_rr(2, counts) == 2.0);
    const std::int64_t flat[] = {4, 4, 4, 4};
    CHECK(equal_shift_rr(4, flat) == 1.0);
    const std::int64_t lone[] = {3, 0, 0};
    CHECK(equal_shift_rr(3, lone) == kInf);
    CHECK(equal_shift_rr(0, lone) == 0.0);
    const std::int64_t one[] = {3};
    CHECK_THROWS_AS(equal_shift_rr(3, one), DomainError);
    CHECK_THROWS_AS(equal_shift_rr(7, counts), DomainError);

    // Agrees with relative_risk on equal shifts.
    const std::int64_t ward[] = {5, 0, 2, 9, 1};
    for (std::int64_t k : ward)
        CHECK(equal_shift_rr(k, ward) == doctest::Approx(relative_risk(k, 30, 17 - k, 4 * 30).value).epsilon(1e-14));
}

TEST_CASE("sample_poisson matches the pmf")
{
    for (double mean : {0.3, 3.0, 9.5, 12.0, 44.0}) {
        PhiloxStream rng(17, static_cast<std::uint64_t>(mean * 10));
        constexpr int kDraws = 200000;
        double sum = 0.0, sq = 0.0;
        std::vector<int> hist(200, 0);
        for (int i = 0; i < kDraws; ++i) {
            const auto k = sample_poisson(rng, mean);
            REQUIRE(k >= 0);
            sum += static_cast<double>(k);
            sq += static_cast<double>(k * k);
            if (k < 200)
                ++hist[static_cast<std::size_t>(k)];
        }
        const double m = sum / kDraws;
        const double var = sq / kDraws - m * m;
        CHECK(std::fabs(m - mean) < 5 * std::sqrt(mean / kDraws));
        CHECK(var == doctest::Approx(mean).epsilon(0.03));
        // Modal cell frequency within 5 SE of the pmf.
        const auto mode = static_cast<std::int64_t>(std::floor(mean));
        const double p = static_cast<double>(poisson_pmf(mean, mode));
        CHECK(std::fabs(hist[static_cast<std::size_t>(mode)] / double(kDraws) - p) < 5 * std::sqrt(p * (1 - p) / kDraws));
    }
    PhiloxStream rng(1, 1);
    CHECK(sample_poisson(rng, 0.0) == 0);
    CHECK_THROWS_AS(sample_poisson(rng, -1.0), DomainError);
}

TEST_CASE("exact_max_rr_tail")
{
    // Threshold zero covers everything up to the truncated mass.
    CHECK(exact_max_rr_tail(3, 2, 0.5, 0.0, minimal_count_cap(3, 1.0)) == doctest::Approx(1.0).epsilon(1e-10));

    // Huge threshold: only the +infinity configurations (one nurse holds every incident) exceed.
    const double m = 0.01;
    const double tail = exact_max_rr_tail(2, 1, m, 1e300, minimal_count_cap(2, m));
    CHECK(tail == doctest::Approx(2 * (1 - std::exp(-m)) * std::exp(-m)).epsilon(1e-9));
    CHECK(tail < 0.02);

    // Nurse-by-nurse brute force at the same cap.
    for (double threshold : {1.0, 1.5, 2.0, 3.0}) {
        const auto cap = minimal_count_cap(3, 1.0);
        CHECK(exact_max_rr_tail(3, 1, 1.0, threshold, cap) ==
              doctest::Approx(brute_max_rr_tail3(1, 1.0, threshold, static_cast<int>(cap))).epsilon(1e-10));
    }
    CHECK(exact_max_rr_tail(3, 4, 0.5, 3.0, minimal_count_cap(3, 2.0)) ==
          doctest::Approx(brute_max_rr_tail3(4, 0.5, 3.0, static_cast<int>(minimal_count_cap(3, 2.0)))).epsilon(1e-10));

    CHECK_THROWS_AS(exact_max_rr_tail(3, 1, 1.0, 1.0, 3), DomainError);
    CHECK_THROWS_AS(exact_max_rr_tail(5, 1, 1.0, 1.0, 30), DomainError);
    CHECK_THROWS_AS(exact_max_rr_tail(1, 1, 1.0, 1.0, 30), DomainError);
}

TEST_CASE("simulate_max_rr agrees with exact enumeration")
{
    struct Case {
        std::int64_t nurses, shifts;
        double mu, threshold;
    };
    for (const Case c : {Case{2, 10, 0.1, 2.0}, Case{3, 1, 1.0, 1.0}, Case{3, 4, 0.5, 3.0}, Case{2, 1, 2.0, 1.5}}) {
        const SimulationConfig config{c.nurses, c.shifts, c.mu, 100000, 99};
        const double exact =
            exact_max_rr_tail(c.nurses, c.shifts, c.mu, c.threshold, minimal_count_cap(c.nurses, config.mean_per_nurse()));
        const SimulationReport sim = simulate_max_rr(config, c.threshold, 4);
        const double se = std::sqrt(exact * (1 - exact) / 100000);
        CHECK(std::fabs(sim.p_value - exact) <= 4 * se);
    }
}

TEST_CASE("simulate_max_rr conventions and determinism")
{
    const SimulationConfig config{11, 61, 13.0 / 614.0, 20000, 7};
    CHECK(simulate_max_rr(config, 0.0, 2).p_value == 1.0);

    const SimulationReport one = simulate_max_rr(config, 4.65, 1);
    CHECK(one == simulate_max_rr(config, 4.65, 2));
    CHECK(one == simulate_max_rr(config, 4.65, 8));
    CHECK(one == simulate_max_rr(config, 4.65, 13));
    CHECK(one.std_error == doctest::Approx(std::sqrt(one.p_value * (1 - one.p_value) / 20000)));
    CHECK(one.config == config);

    // Nonincreasing in the threshold.
    double previous = 1.0;
    for (double threshold : {0.5, 1.0, 2.0, 3.0, 4.65, 6.0, 10.0}) {
        const double p = simulate_max_rr(config, threshold, 3).p_value;
        CHECK(p <= previous);
        previous = p;
    }

    // Tiny means give many all-zero wards; they count only against a threshold <= 1.
    const SimulationConfig sparse{3, 1, 0.05, 20000, 3};
    const SimulationReport sparse_report = simulate_max_rr(sparse, 2.0, 2);
    CHECK(sparse_report.degenerate_count > 15000);
    CHECK(simulate_max_rr(sparse, 1.0, 2).exceed_count == 20000);

    CHECK_THROWS_AS(simulate_max_rr(config, -1.0), DomainError);
    CHECK_THROWS_AS(simulate_max_rr(SimulationConfig{1, 61, 0.1, 10, 1}, 1.0), DomainError);
    CHECK_THROWS_AS(simulate_max_rr(SimulationConfig{3, 61, 0.0, 10, 1}, 1.0), DomainError);
}

TEST_CASE("derive_sim_config")
{
    const CaseFile file = builtin_paper_case(DataVariant::corrected);
    const DerivedSimConfig whole = derive_sim_config(file, {"RKZ-41", "RKZ-42"}, MuBasis::exclude_suspect, 1000, 5);
    CHECK(whole.config.nurse_count == 11);
    CHECK(whole.config.shifts_per_nurse == 61);
    CHECK(whole.floor_nurse_count == 11);
    CHECK(whole.exact_nurse_ratio == doctest::Approx(675.0 / 61.0));
    CHECK(whole.config.mu == 13.0 / 614.0);
    CHECK(whole.observed_rr == doctest::Approx(4.645649).epsilon(1e-6));

    const DerivedSimConfig rkz41 = derive_sim_config(file, {"RKZ-41"}, MuBasis::include_suspect, 1000, 5);
    CHECK(rkz41.config.nurse_count == 112);
    CHECK(rkz41.config.shifts_per_nurse == 3);
    CHECK(rkz41.config.mu == 5.0 / 336.0);

    const DerivedSimConfig rkz42 = derive_sim_config(file, {"RKZ-42"}, MuBasis::exclude_suspect, 1000, 5);
    CHECK(rkz42.config.nurse_count == 6);
    CHECK(rkz42.floor_nurse_count == 5);
    CHECK(rkz42.config.shifts_per_nurse == 58);

    CHECK_THROWS_AS(derive_sim_config(WardRoster{"W", 100, 0, 3, 0, std::nullopt}, IntensityEstimate::fixed(0.1), 10, 1),
                    DomainError);
}

TEST_CASE("simulated p for the whole RKZ falls as mu rises")
{
    const CaseFile file = builtin_paper_case(DataVariant::corrected);
    const auto low = derive_sim_config(file, {"RKZ-41", "RKZ-42"}, MuBasis::exclude_suspect, 100000, 20030324);
    const auto high = derive_sim_config(file, {"RKZ-41", "RKZ-42"}, MuBasis::include_suspect, 100000, 20030324);
    const double p_low = simulate_max_rr(low.config, 4.65).p_value;
    const double p_high = simulate_max_rr(high.config, 4.65).p_value;
    CHECK(p_high < p_low);
    CHECK(std::fabs(p_low - 0.121) <= 0.05);
    CHECK(std::fabs(p_high - 0.042) <= 0.03);
}

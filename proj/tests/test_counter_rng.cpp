#include "coincidence/counter_rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace coincidence;

TEST_CASE("philox4x32_10 known-answer vectors")
{
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("PhiloxStream is reproducible and streams differ")
{
    PhiloxStream a(5, 3), b(5, 3), c(5, 4), d(6, 3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        seen.insert(x);
        seen.insert(c());
        seen.insert(d());
    }
    CHECK(seen.size() == 3000);
}

TEST_CASE("PhiloxStream output is the Philox block read pairwise")
{
    PhiloxStream s(0x0000000200000001ull, 0x0000000400000003ull);
    const PhiloxCounter block0 = philox4x32_10({0, 0, 3, 4}, {1, 2});
    const PhiloxCounter block1 = philox4x32_10({1, 0, 3, 4}, {1, 2});
    CHECK(s() == (std::uint64_t{block0[0]} << 32 | block0[1]));
    CHECK(s() == (std::uint64_t{block0[2]} << 32 | block0[3]));
    CHECK(s() == (std::uint64_t{block1[0]} << 32 | block1[1]));
}

TEST_CASE("uniform stays inside (0, 1) with mean 1/2")
{
    PhiloxStream s(42, 0);
    double sum = 0.0;
    constexpr int kDraws = 200000;
    for (int i = 0; i < kDraws; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // SE of the mean is sqrt(1/12 / n) ~ 6.5e-4.
    CHECK(std::fabs(sum / kDraws - 0.5) < 4 * std::sqrt(1.0 / 12.0 / kDraws));
}

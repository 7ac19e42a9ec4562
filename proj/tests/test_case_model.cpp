#include "coincidence/case_model.hpp"
#include "coincidence/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace coincidence;

namespace {

const char* kJkzCase = R"({
  "case_name": "JKZ only",
  "suspect": "L",
  "variant": "corrected",
  "wards": [
    {"name": "JKZ", "total_shifts": 1029, "suspect_shifts": 142, "total_incidents": 8,
     "suspect_incidents": 8, "nurse_count": 27}
  ]
})";

std::string with_ward(const std::string& ward_json)
{
    return R"({"case_name": "c", "suspect": "s", "variant": "original", "wards": [)" + ward_json + "]}";
}

} // namespace

TEST_CASE("parse_case accepts the published rosters")
{
    const CaseFile jkz = parse_case(kJkzCase);
    REQUIRE(jkz.wards.size() == 1);
    CHECK(jkz.wards[0] == WardRoster{"JKZ", 1029, 142, 8, 8, 27});

    const CaseFile rkz = parse_case(with_ward(
        R"({"name": "RKZ-41", "total_shifts": 336, "suspect_shifts": 3, "total_incidents": 5, "suspect_incidents": 1})"));
    CHECK(rkz.variant == DataVariant::original);
    CHECK(rkz.wards[0] == WardRoster{"RKZ-41", 336, 3, 5, 1, std::nullopt});
}

TEST_CASE("parse_case validation errors name the ward and field")
{
    try {
        parse_case(with_ward(
            R"({"name": "W", "total_shifts": 10, "suspect_shifts": 12, "total_incidents": 1, "suspect_incidents": 0})"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.ward() == "W");
        CHECK(e.field() == "suspect_shifts");
        CHECK(std::string(e.what()).find("suspect_shifts exceeds total_shifts") != std::string::npos);
    }

    auto field_of = [](const std::string& ward) {
        try {
            parse_case(with_ward(ward));
        } catch (const ValidationError& e) {
            return e.field();
        }
        return std::string("<accepted>");
    };
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 3, "suspect_incidents": 4})") ==
          "suspect_incidents");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 11, "suspect_incidents": 1})") ==
          "total_incidents");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 9, "total_incidents": 5, "suspect_incidents": 2})") ==
          "total_incidents"); // 3 incidents left for 1 other shift
    CHECK(field_of(R"({"name": "W", "total_shifts": 0, "suspect_shifts": 0, "total_incidents": 0, "suspect_incidents": 0})") ==
          "total_shifts");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0, "nurse_count": 0})") ==
          "nurse_count");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10.5, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0})") ==
          "total_shifts");
    CHECK(field_of(R"({"name": "W", "total_shifts": -3, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0})") ==
          "total_shifts");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0, "colour": 1})") ==
          "colour");
    CHECK(field_of(R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1})") ==
          "suspect_incidents");
}

TEST_CASE("parse_case rejects malformed syntax with a line number")
{
    try {
        parse_case("{\n  \"case_name\": \"x\",\n  \"suspect\": oops\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_case("[1, 2]"), ParseError);
}

TEST_CASE("parse_case rejects structural problems")
{
    CHECK_THROWS_AS(parse_case(R"({"case_name": "c", "suspect": "s", "variant": "corrected", "wards": []})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_case(R"({"case_name": "c", "suspect": "s", "variant": "other", "wards": []})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_case(R"({"case_name": "c", "suspect": "s", "variant": "corrected", "extra": 1, "wards": []})"),
                    ValidationError);
    const std::string ward =
        R"({"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0})";
    CHECK_THROWS_AS(parse_case(with_ward(ward + "," + ward)), ValidationError);
}

TEST_CASE("optional evidence, prior and normal-rate blocks")
{
    const CaseFile file = parse_case(R"({
      "case_name": "c", "suspect": "s", "variant": "corrected",
      "wards": [{"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0}],
      "evidence": [{"label": "E1", "lr": 0.5, "provenance": "expert"}, {"label": "E2", "lr": 50}],
      "prior_probability": 1e-5,
      "normal_rate": {"extra_shifts": 200, "extra_incidents": 4, "description": "adjacent year"}
    })");
    REQUIRE(file.evidence.size() == 2);
    CHECK(file.evidence[1].lr == 50.0);
    CHECK(file.evidence[1].provenance.empty());
    CHECK(*file.prior_probability == 1e-5);
    CHECK(file.normal_rate->extra_incidents == 4);

    CHECK_THROWS_AS(parse_case(R"({"case_name": "c", "suspect": "s", "variant": "corrected",
      "wards": [{"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0}],
      "evidence": [{"label": "E1", "lr": -2}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_case(R"({"case_name": "c", "suspect": "s", "variant": "corrected",
      "wards": [{"name": "W", "total_shifts": 10, "suspect_shifts": 2, "total_incidents": 1, "suspect_incidents": 0}],
      "normal_rate": {"extra_shifts": 1, "extra_incidents": 11}})"),
                    ValidationError);
}

TEST_CASE("builtin_paper_case variants")
{
    const CaseFile corrected = builtin_paper_case(DataVariant::corrected);
    REQUIRE(corrected.wards.size() == 3);
    CHECK(corrected.wards[0] == WardRoster{"JKZ", 1029, 142, 8, 8, 27});
    CHECK(corrected.wards[1] == WardRoster{"RKZ-41", 336, 3, 5, 1, std::nullopt});
    CHECK(corrected.wards[2] == WardRoster{"RKZ-42", 339, 58, 14, 5, std::nullopt});

    const CaseFile original = builtin_paper_case(DataVariant::original);
    CHECK(original.ward("RKZ-41") == WardRoster{"RKZ-41", 336, 1, 5, 1, std::nullopt});
    CHECK(original.ward("JKZ") == corrected.ward("JKZ"));
    CHECK(original.ward("RKZ-42") == corrected.ward("RKZ-42"));

    const WardRoster pooled = pool_wards(corrected, {"RKZ-41", "RKZ-42"});
    CHECK(pooled.total_shifts == 675);
    CHECK(pooled.suspect_shifts == 61);
    CHECK(pooled.total_incidents == 19);
    CHECK(pooled.suspect_incidents == 6);
    CHECK_FALSE(pooled.nurse_count.has_value());
}

TEST_CASE("pool_wards edge cases")
{
    const CaseFile file = builtin_paper_case(DataVariant::corrected);
    CHECK(pool_wards(file, {"JKZ"}) == file.ward("JKZ"));
    CHECK_THROWS_AS(pool_wards(file, {}), ValidationError);
    CHECK_THROWS_AS(pool_wards(file, {"RKZ-43"}), ValidationError);
    CHECK_THROWS_AS(pool_wards(file, {"JKZ", "JKZ"}), ValidationError);
}

TEST_CASE("pool_wards is order-independent and associative")
{
    const CaseFile file = builtin_paper_case(DataVariant::corrected);
    std::vector<std::string> names = file.ward_names();
    const WardRoster reference = pool_wards(file, names);
    std::sort(names.begin(), names.end());
    do {
        const WardRoster p = pool_wards(file, names);
        CHECK(p.total_shifts == reference.total_shifts);
        CHECK(p.suspect_shifts == reference.suspect_shifts);
        CHECK(p.total_incidents == reference.total_incidents);
        CHECK(p.suspect_incidents == reference.suspect_incidents);
    } while (std::next_permutation(names.begin(), names.end()));

    // (JKZ + RKZ-41) + RKZ-42 as a two-ward case equals the three-ward pool.
    CaseFile nested = file;
    WardRoster left = pool_wards(file, {"JKZ", "RKZ-41"});
    nested.wards = {left, file.ward("RKZ-42")};
    const WardRoster grouped = pool_wards(nested, {left.name, "RKZ-42"});
    CHECK(grouped.total_shifts == reference.total_shifts);
    CHECK(grouped.suspect_incidents == reference.suspect_incidents);
}

TEST_CASE("serialize and parse round-trip random valid case files")
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        CaseFile file;
        file.case_name = "case " + std::to_string(trial);
        file.suspect = "nurse \"" + std::to_string(trial) + "\" \xc3\xa9";
        file.variant = trial % 2 ? DataVariant::original : DataVariant::corrected;
        const int wards = 1 + static_cast<int>(rng() % 4);
        for (int w = 0; w < wards; ++w) {
            WardRoster ward;
            ward.name = "W" + std::to_string(w);
            ward.total_shifts = 1 + static_cast<std::int64_t>(rng() % 2000);
            ward.suspect_shifts = static_cast<std::int64_t>(rng() % (ward.total_shifts + 1));
            ward.suspect_incidents = static_cast<std::int64_t>(rng() % (ward.suspect_shifts + 1));
            ward.total_incidents =
                ward.suspect_incidents + static_cast<std::int64_t>(rng() % (ward.other_shifts() + 1));
            if (rng() % 2)
                ward.nurse_count = 1 + static_cast<std::int64_t>(rng() % 50);
            file.wards.push_back(ward);
        }
        if (rng() % 2) {
            file.evidence.push_back({"E", std::ldexp(static_cast<double>(rng() % 1000 + 1), -7), "p"});
            file.prior_probability = 0.125 / static_cast<double>(1 + rng() % 1000);
        }
        if (rng() % 3 == 0)
            file.normal_rate = NormalRateData{100, static_cast<std::int64_t>(rng() % 100), "extra"};
        file.validate();
        CHECK(parse_case(serialize_case(file)) == file);
    }
}

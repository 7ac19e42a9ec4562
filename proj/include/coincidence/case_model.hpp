#pragma once

// Roster data: per-ward shift and incident counts for one suspect, the JSON
// case-file format, and the built-in data of the published case.

#include "coincidence/bayes_chain.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coincidence {

/// Counts for one ward over the period under study.
struct WardRoster {
    std::string name;
    std::int64_t total_shifts = 0;      // n
    std::int64_t suspect_shifts = 0;    // r
    std::int64_t total_incidents = 0;   // k
    std::int64_t suspect_incidents = 0; // x
    std::optional<std::int64_t> nurse_count;

    std::int64_t other_shifts() const noexcept { return total_shifts - suspect_shifts; }
    std::int64_t other_incidents() const noexcept { return total_incidents - suspect_incidents; }

    /// Throws ValidationError naming the ward and the offending field.
    void validate() const;

    friend bool operator==(const WardRoster&, const WardRoster&) = default;
};

enum class DataVariant { original, corrected };

std::string_view to_string(DataVariant variant);
DataVariant variant_from_string(std::string_view text);

/// Incidents and shifts from comparable periods outside the roster, attributed to other nurses.
struct NormalRateData {
    std::int64_t extra_shifts = 0;
    std::int64_t extra_incidents = 0;
    std::string description;

    void validate() const;

    friend bool operator==(const NormalRateData&, const NormalRateData&) = default;
};

struct CaseFile {
    std::string case_name;
    std::string suspect;
    DataVariant variant = DataVariant::corrected;
    std::vector<WardRoster> wards;
    std::vector<EvidenceItem> evidence;
    std::optional<double> prior_probability;
    std::optional<NormalRateData> normal_rate;

    /// Unique ward names, at least one ward, every roster valid.
    void validate() const;

    const WardRoster& ward(std::string_view name) const;
    std::vector<std::string> ward_names() const;

    friend bool operator==(const CaseFile&, const CaseFile&) = default;
};

/// Parses the JSON case-file format. Syntax errors raise ParseError with the
/// line number; unknown keys, wrong types and invariant violations raise
/// ValidationError.
CaseFile parse_case(std::string_view text);

/// Inverse of parse_case.
std::string serialize_case(const CaseFile& file);

/// Reads and parses a case file from disk.
CaseFile load_case(const std::string& path);

/// The three-ward roster of the published case. The original variant has the
/// suspect on 1 RKZ-41 shift as first reported; corrected uses the later figure of 3.
CaseFile builtin_paper_case(DataVariant variant);

/// Component-wise sum of the named wards. The pooled roster has no nurse count.
WardRoster pool_wards(const CaseFile& file, const std::vector<std::string>& names);

} // namespace coincidence

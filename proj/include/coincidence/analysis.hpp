#pragma once

#include "coincidence/case_model.hpp"
#include "coincidence/poisson_evidence.hpp"
#include "coincidence/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coincidence {

enum class AnalysisMethod {
    elffers,
    per_ward,
    bonferroni,
    pooled,
    convolved,
    fisher,
    poisson_lr,
    binomial_cond,
    bayes,
    relative_risk,
};

AnalysisMethod analysis_method_from_string(std::string_view text);

struct MuChoice {
    MuBasis basis = MuBasis::exclude_suspect;
    double fixed_value = 0.0;
};

/// Parses exclude-suspect, include-suspect, augmented or fixed=<value>.
MuChoice mu_choice_from_string(std::string_view text);

inline constexpr std::uint64_t kDefaultSeed = 20030324;
inline constexpr std::int64_t kDefaultReplicates = 100000;

struct AnalysisOptions {
    AnalysisMethod method = AnalysisMethod::pooled;
    std::optional<std::vector<std::string>> wards;
    std::optional<std::int64_t> jkz_multiplier;
    MuChoice mu;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t replicates = kDefaultReplicates;
    unsigned workers = 0;
    bool builtin = false;
    std::string source;
};

/// Wards analysed when none are named: for the built-in case the methods that
/// revise the original analysis use the two RKZ wards; otherwise every ward.
std::vector<std::string> default_wards(const CaseFile& file, AnalysisMethod method, bool builtin);

AnalysisReport analyze(const CaseFile& file, const AnalysisOptions& options);

} // namespace coincidence

#pragma once

// Poisson incident model: intensity estimates, the likelihood ratio for a
// raised suspect intensity, its verbal description, and the exact test
// conditional on the grand total of incidents.

#include "coincidence/case_model.hpp"
#include "coincidence/frequentist.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace coincidence {

enum class MuBasis { exclude_suspect, include_suspect, fixed, augmented };

std::string_view to_string(MuBasis basis);

/// Background intensity (incidents per shift). Estimated intensities are kept
/// as an exact ratio of counts until evaluated.
struct IntensityEstimate {
    MuBasis basis = MuBasis::exclude_suspect;
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;
    double fixed_value = 0.0;

    double mu() const;
    /// mu * shifts in extended precision.
    long double expected(std::int64_t shifts) const;

    static IntensityEstimate fixed(double mu);
};

enum class SuspectRule { observed_rate, fixed };

struct SuspectIntensity {
    SuspectRule rule = SuspectRule::observed_rate;
    std::int64_t incidents = 0;
    std::int64_t shifts = 1;
    double fixed_value = 0.0;

    double mu() const;
    long double expected(std::int64_t shifts) const;

    /// mu_L chosen so that mu_L * shifts equals the observed incident count.
    static SuspectIntensity observed(std::int64_t incidents, std::int64_t shifts);
    static SuspectIntensity fixed(double mu);
};

enum class Direction { favors_prosecution, favors_defence, neutral };

std::string_view to_string(Direction direction);

enum class VerbalBand { equal, slightly_more, more, much_more, very_much_more };

struct VerbalAssessment {
    VerbalBand band = VerbalBand::equal;
    Direction direction = Direction::neutral;
    std::string text;
};

struct LikelihoodRatio {
    double value = 1.0;
    VerbalAssessment verbal;
    std::string notes;
};

/// Background intensity for the given (typically pooled) roster.
///  exclude_suspect: (k - x) / (n - r)
///  include_suspect: k / n
///  augmented:       exclude_suspect with the extra counts added to both sides
/// Use IntensityEstimate::fixed for a known intensity.
IntensityEstimate estimate_mu(const WardRoster& roster, MuBasis basis,
                              const std::optional<NormalRateData>& extra = std::nullopt);

IntensityEstimate estimate_mu(const CaseFile& file, const std::vector<std::string>& names, MuBasis basis,
                              const std::optional<NormalRateData>& extra = std::nullopt);

/// LR = exp(mu r - mu_L r) (mu_L r / mu r)^k for a suspect with r shifts and k incidents;
/// the other nurses' factors cancel.
LikelihoodRatio lr_poisson(const IntensityEstimate& mu, const SuspectIntensity& mu_suspect, std::int64_t shifts,
                           std::int64_t incidents);

/// Verbal scale with band edges 1, 100, 1000, 10000. Ratios below 1 are
/// described by their reciprocal in favour of the defence.
VerbalAssessment verbal_scale(double lr);

/// Exact test of the suspect's incident count given the grand total N:
/// Binomial(N, p) with p = rho r_L / (rho r_L + r_others), rho = mu_L / mu
/// (rho = 1 under the null). Extra normal-rate data adds to the others' shifts and incidents.
TestResult conditional_binomial_test(const WardRoster& roster, double intensity_ratio = 1.0,
                                     const std::optional<NormalRateData>& extra = std::nullopt);

} // namespace coincidence

#pragma once

// Odds-form Bayesian updating with independent evidence items.

#include <optional>
#include <string>
#include <vector>

namespace coincidence {

struct EvidenceItem {
    std::string label;
    double lr = 1.0;
    std::string provenance;

    /// Throws DomainError unless lr is positive and finite.
    void validate() const;

    friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

/// Prior odds plus the ordered evidence applied so far. Updating returns a new state.
class OddsState {
public:
    explicit OddsState(double prior_odds);

    double prior_odds() const noexcept { return prior_odds_; }
    double posterior_odds() const noexcept { return posterior_odds_; }
    const std::vector<EvidenceItem>& applied() const noexcept { return applied_; }

    friend OddsState update(const OddsState& state, const EvidenceItem& item);

private:
    double prior_odds_;
    double posterior_odds_;
    std::vector<EvidenceItem> applied_;
};

/// p / (1 - p); DomainError for p outside (0, 1).
double odds_from_probability(double p);

/// odds / (1 + odds); inf maps to 1.
double probability_from_odds(double odds);

OddsState update(const OddsState& state, const EvidenceItem& item);
OddsState update_all(OddsState state, const std::vector<EvidenceItem>& items);

double posterior_probability(const OddsState& state);

/// Result of chaining the same evidence from a prior probability under the two
/// conventions in common use: strict odds p/(1-p), and the small-prior shortcut
/// that takes the probability itself as the odds.
struct PriorConventionComparison {
    double prior_probability;
    OddsState strict;
    OddsState shortcut;
};

PriorConventionComparison chain_from_prior_probability(double prior_probability,
                                                       const std::vector<EvidenceItem>& items);

struct FallacyReport {
    std::string statement;
    /// P(H0 | E) when both the prior and P(E) were supplied.
    std::optional<double> posterior_h0;
};

/// Separates P(E | H0) from P(H0 | E): without a prior and P(E) the latter is not
/// computable; with both it follows from P(H0|E) = P(E|H0) P(H0) / P(E).
FallacyReport fallacy_report(double p_e_given_h0, std::optional<double> prior_h0 = std::nullopt,
                             std::optional<double> p_e = std::nullopt);

/// The four items and likelihood ratios from the published Bayesian analysis of the case.
std::vector<EvidenceItem> published_case_evidence();

/// Prior probability of guilt used with published_case_evidence().
inline constexpr double kPublishedPriorProbability = 1e-5;

} // namespace coincidence

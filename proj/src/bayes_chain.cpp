#include "coincidence/bayes_chain.hpp"

#include "coincidence/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coincidence {

void EvidenceItem::validate() const
{
    if (!(lr > 0.0) || !std::isfinite(lr))
        throw DomainError("evidence '" + label + "': likelihood ratio must be positive and finite");
}

OddsState::OddsState(double prior_odds) : prior_odds_(prior_odds), posterior_odds_(prior_odds)
{
    if (!(prior_odds > 0.0) || !std::isfinite(prior_odds))
        throw DomainError("prior odds must be positive and finite");
}

OddsState update(const OddsState& state, const EvidenceItem& item)
{
    item.validate();
    OddsState next = state;
    next.posterior_odds_ = state.posterior_odds_ * item.lr;
    next.applied_.push_back(item);
    return next;
}

OddsState update_all(OddsState state, const std::vector<EvidenceItem>& items)
{
    for (const auto& item : items)
        state = update(state, item);
    return state;
}

double odds_from_probability(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("odds need a probability strictly between 0 and 1");
    return p / (1.0 - p);
}

double probability_from_odds(double odds)
{
    if (!(odds >= 0.0))
        throw DomainError("odds must be non-negative");
    if (std::isinf(odds))
        return 1.0;
    return odds / (1.0 + odds);
}

double posterior_probability(const OddsState& state) { return probability_from_odds(state.posterior_odds()); }

PriorConventionComparison chain_from_prior_probability(double prior_probability,
                                                       const std::vector<EvidenceItem>& items)
{
    const double strict_prior = odds_from_probability(prior_probability);
    return {prior_probability, update_all(OddsState(strict_prior), items),
            update_all(OddsState(prior_probability), items)};
}

FallacyReport fallacy_report(double p_e_given_h0, std::optional<double> prior_h0, std::optional<double> p_e)
{
    if (!(p_e_given_h0 >= 0.0 && p_e_given_h0 <= 1.0))
        throw DomainError("P(E | H0) must lie in [0, 1]");
    if (prior_h0 && !(*prior_h0 >= 0.0 && *prior_h0 <= 1.0))
        throw DomainError("P(H0) must lie in [0, 1]");
    if (p_e) {
        if (*p_e == 0.0)
            throw DomainError("P(E) = 0: the evidence cannot have been observed");
        if (!(*p_e > 0.0 && *p_e <= 1.0))
            throw DomainError("P(E) must lie in (0, 1]");
    }

    std::ostringstream text;
    text.precision(6);
    text << "P(E | H0) = " << p_e_given_h0 << " is the probability of the evidence assuming innocence. ";
    if (!prior_h0 || !p_e) {
        text << "It is not the probability of innocence given the evidence: P(H0 | E) is not computable "
                "without a prior P(H0) and the overall probability P(E).";
        return {text.str(), std::nullopt};
    }

    const double posterior = p_e_given_h0 * *prior_h0 / *p_e;
    if (posterior > 1.0 + 1e-12)
        throw DomainError("inconsistent inputs: P(E | H0) P(H0) exceeds P(E)");
    text << "With P(H0) = " << *prior_h0 << " and P(E) = " << *p_e << ", P(H0 | E) = P(E | H0) P(H0) / P(E) = "
         << posterior << ".";
    return {text.str(), std::min(posterior, 1.0)};
}

std::vector<EvidenceItem> published_case_evidence()
{
    return {
        {"E1: suspect never confessed", 0.5, "published Bayesian analysis of the case (subjective)"},
        {"E2: toxic substances found in two patients", 50.0, "published Bayesian analysis of the case (subjective)"},
        {"E3: 14 incidents during the suspect's shifts", 7000.0,
         "published Bayesian analysis of the case (subjective)"},
        {"E4: diary entry about giving in to a compulsion", 5.0,
         "published Bayesian analysis of the case (subjective)"},
    };
}

} // namespace coincidence

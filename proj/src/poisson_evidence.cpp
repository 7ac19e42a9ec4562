#include "coincidence/poisson_evidence.hpp"

#include "coincidence/distributions.hpp"
#include "coincidence/errors.hpp"

#include <cmath>
#include <sstream>

namespace coincidence {

std::string_view to_string(MuBasis basis)
{
    switch (basis) {
    case MuBasis::exclude_suspect: return "exclude_suspect";
    case MuBasis::include_suspect: return "include_suspect";
    case MuBasis::fixed: return "fixed";
    case MuBasis::augmented: return "augmented";
    }
    return "unknown";
}

std::string_view to_string(Direction direction)
{
    switch (direction) {
    case Direction::favors_prosecution: return "favors_prosecution";
    case Direction::favors_defence: return "favors_defence";
    case Direction::neutral: return "neutral";
    }
    return "unknown";
}

double IntensityEstimate::mu() const
{
    if (basis == MuBasis::fixed)
        return fixed_value;
    return static_cast<double>(static_cast<long double>(numerator) / static_cast<long double>(denominator));
}

long double IntensityEstimate::expected(std::int64_t shifts) const
{
    if (basis == MuBasis::fixed)
        return static_cast<long double>(fixed_value) * shifts;
    return static_cast<long double>(numerator) * shifts / static_cast<long double>(denominator);
}

IntensityEstimate IntensityEstimate::fixed(double mu)
{
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw DomainError("a fixed intensity must be positive and finite");
    IntensityEstimate e;
    e.basis = MuBasis::fixed;
    e.fixed_value = mu;
    return e;
}

double SuspectIntensity::mu() const
{
    if (rule == SuspectRule::fixed)
        return fixed_value;
    return static_cast<double>(static_cast<long double>(incidents) / static_cast<long double>(shifts));
}

long double SuspectIntensity::expected(std::int64_t s) const
{
    if (rule == SuspectRule::fixed)
        return static_cast<long double>(fixed_value) * s;
    return static_cast<long double>(incidents) * s / static_cast<long double>(shifts);
}

SuspectIntensity SuspectIntensity::observed(std::int64_t incidents, std::int64_t shifts)
{
    if (shifts <= 0 || incidents < 0)
        throw DomainError("observed suspect rate needs positive shifts and non-negative incidents");
    SuspectIntensity s;
    s.rule = SuspectRule::observed_rate;
    s.incidents = incidents;
    s.shifts = shifts;
    return s;
}

SuspectIntensity SuspectIntensity::fixed(double mu)
{
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw DomainError("a fixed suspect intensity must be non-negative and finite");
    SuspectIntensity s;
    s.rule = SuspectRule::fixed;
    s.fixed_value = mu;
    return s;
}

IntensityEstimate estimate_mu(const WardRoster& roster, MuBasis basis, const std::optional<NormalRateData>& extra)
{
    IntensityEstimate e;
    e.basis = basis;
    switch (basis) {
    case MuBasis::exclude_suspect:
        e.numerator = roster.other_incidents();
        e.denominator = roster.other_shifts();
        break;
    case MuBasis::include_suspect:
        e.numerator = roster.total_incidents;
        e.denominator = roster.total_shifts;
        break;
    case MuBasis::augmented:
        if (!extra)
            throw DomainError("augmented intensity needs normal-rate data");
        extra->validate();
        e.numerator = roster.other_incidents() + extra->extra_incidents;
        e.denominator = roster.other_shifts() + extra->extra_shifts;
        break;
    case MuBasis::fixed:
        throw DomainError("use IntensityEstimate::fixed for a known intensity");
    }
    if (e.denominator <= 0)
        throw DomainError("cannot estimate intensity from zero shifts");
    if (e.numerator <= 0)
        throw DomainError("cannot fit intensity 0: no incidents in the estimation basis");
    return e;
}

IntensityEstimate estimate_mu(const CaseFile& file, const std::vector<std::string>& names, MuBasis basis,
                              const std::optional<NormalRateData>& extra)
{
    return estimate_mu(pool_wards(file, names), basis, extra);
}

VerbalAssessment verbal_scale(double lr)
{
    if (!(lr > 0.0) || std::isnan(lr))
        throw DomainError("likelihood ratio must be positive");
    VerbalAssessment v;
    if (lr == 1.0) {
        v.band = VerbalBand::equal;
        v.direction = Direction::neutral;
        v.text = "equally likely under H_p as under H_d";
        return v;
    }

    const bool for_prosecution = lr > 1.0;
    const double height = for_prosecution ? lr : 1.0 / lr;
    v.direction = for_prosecution ? Direction::favors_prosecution : Direction::favors_defence;
    const char* favoured = for_prosecution ? "H_p" : "H_d";
    const char* other = for_prosecution ? "H_d" : "H_p";
    const char* degree = nullptr;
    if (height < 100.0) {
        v.band = VerbalBand::slightly_more;
        degree = "slightly more likely";
    } else if (height < 1000.0) {
        v.band = VerbalBand::more;
        degree = "more likely";
    } else if (height < 10000.0) {
        v.band = VerbalBand::much_more;
        degree = "much more likely";
    } else {
        v.band = VerbalBand::very_much_more;
        degree = "very much more likely";
    }
    v.text = std::string(degree) + " under " + favoured + " than under " + other;
    return v;
}

LikelihoodRatio lr_poisson(const IntensityEstimate& mu, const SuspectIntensity& mu_suspect, std::int64_t shifts,
                           std::int64_t incidents)
{
    if (shifts < 1)
        throw DomainError("the suspect needs at least one shift");
    if (incidents < 0)
        throw DomainError("incident count must be non-negative");
    if (!(mu.mu() > 0.0))
        throw DomainError("background intensity must be positive");
    const long double background = mu.expected(shifts);
    const long double suspect = mu_suspect.expected(shifts);
    if (suspect < 0.0L)
        throw DomainError("suspect intensity must be non-negative");
    if (suspect == 0.0L && incidents > 0)
        throw DomainError("suspect intensity 0 cannot produce observed incidents");

    long double log_lr = background - suspect;
    if (incidents > 0)
        log_lr += incidents * (std::log(suspect) - std::log(background));

    LikelihoodRatio lr;
    lr.value = static_cast<double>(std::exp(log_lr));
    lr.verbal = verbal_scale(lr.value);
    std::ostringstream notes;
    notes.precision(10);
    notes << "Poisson model, mu = " << mu.mu() << " (" << to_string(mu.basis) << "), mu_L = " << mu_suspect.mu()
          << ", " << shifts << " suspect shifts, " << incidents
          << " suspect incidents; assumes a constant intensity and independent incidents";
    lr.notes = notes.str();
    return lr;
}

TestResult conditional_binomial_test(const WardRoster& roster, double intensity_ratio,
                                     const std::optional<NormalRateData>& extra)
{
    roster.validate();
    if (!(intensity_ratio > 0.0) || !std::isfinite(intensity_ratio))
        throw DomainError("intensity ratio mu_L / mu must be positive and finite");
    std::int64_t other_shifts = roster.other_shifts();
    std::int64_t other_incidents = roster.other_incidents();
    if (extra) {
        extra->validate();
        other_shifts += extra->extra_shifts;
        other_incidents += extra->extra_incidents;
    }
    const std::int64_t grand_total = roster.suspect_incidents + other_incidents;
    const long double weighted = static_cast<long double>(intensity_ratio) * roster.suspect_shifts;
    const double p = static_cast<double>(weighted / (weighted + other_shifts));

    TestResult result;
    result.method = TestMethod::conditional_binomial;
    result.value = binomial_tail(grand_total, p, roster.suspect_incidents);
    result.statistic = p;
    result.components = {{roster.name, result.value, 1.0}};
    std::ostringstream notes;
    notes.precision(10);
    notes << "P(Binomial(" << grand_total << ", " << p << ") >= " << roster.suspect_incidents
          << "), conditional on the grand total of incidents";
    if (extra)
        notes << "; includes " << extra->extra_shifts << " extra shifts and " << extra->extra_incidents
              << " extra incidents of normal operation";
    result.notes = notes.str();
    return result;
}

} // namespace coincidence

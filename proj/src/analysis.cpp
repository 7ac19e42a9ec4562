#include "coincidence/analysis.hpp"

#include "coincidence/bayes_chain.hpp"
#include "coincidence/errors.hpp"
#include "coincidence/frequentist.hpp"
#include "coincidence/relative_risk_sim.hpp"

#include <charconv>

namespace coincidence {

namespace {

std::string roster_inputs(const CaseFile& file, const std::vector<std::string>& names)
{
    std::string out = "variant=" + std::string(to_string(file.variant));
    for (const auto& n : names)
        out += ";" + describe(file.ward(n));
    return out;
}

IntensityEstimate intensity_for(const WardRoster& pooled, const CaseFile& file, const MuChoice& choice)
{
    if (choice.basis == MuBasis::fixed)
        return IntensityEstimate::fixed(choice.fixed_value);
    if (choice.basis == MuBasis::augmented && !file.normal_rate)
        throw DomainError("mu basis 'augmented' needs a normal_rate block in the case file");
    return estimate_mu(pooled, choice.basis, file.normal_rate);
}

std::string mu_inputs(const MuChoice& choice)
{
    std::string out = ";mu_basis=" + std::string(to_string(choice.basis));
    if (choice.basis == MuBasis::fixed)
        out += "=" + format_number(choice.fixed_value);
    return out;
}

} // namespace

AnalysisMethod analysis_method_from_string(std::string_view text)
{
    if (text == "elffers") return AnalysisMethod::elffers;
    if (text == "per-ward") return AnalysisMethod::per_ward;
    if (text == "bonferroni") return AnalysisMethod::bonferroni;
    if (text == "pooled") return AnalysisMethod::pooled;
    if (text == "convolved") return AnalysisMethod::convolved;
    if (text == "fisher") return AnalysisMethod::fisher;
    if (text == "poisson-lr") return AnalysisMethod::poisson_lr;
    if (text == "binomial-cond") return AnalysisMethod::binomial_cond;
    if (text == "bayes") return AnalysisMethod::bayes;
    if (text == "relative-risk") return AnalysisMethod::relative_risk;
    throw DomainError("unknown method '" + std::string(text) + "'");
}

MuChoice mu_choice_from_string(std::string_view text)
{
    if (text == "exclude-suspect")
        return {MuBasis::exclude_suspect, 0.0};
    if (text == "include-suspect")
        return {MuBasis::include_suspect, 0.0};
    if (text == "augmented")
        return {MuBasis::augmented, 0.0};
    if (text.starts_with("fixed=")) {
        const std::string_view number = text.substr(6);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
        if (ec != std::errc() || ptr != number.data() + number.size() || !(value > 0.0))
            throw DomainError("fixed intensity must be a positive number, got '" + std::string(number) + "'");
        return {MuBasis::fixed, value};
    }
    throw DomainError("unknown mu basis '" + std::string(text) + "'");
}

std::vector<std::string> default_wards(const CaseFile& file, AnalysisMethod method, bool builtin)
{
    switch (method) {
    case AnalysisMethod::elffers:
    case AnalysisMethod::per_ward:
        return file.ward_names();
    case AnalysisMethod::bonferroni: {
        std::vector<std::string> names;
        for (const auto& w : file.wards)
            if (w.nurse_count)
                names.push_back(w.name);
        if (names.empty())
            throw DomainError("Bonferroni correction needs a ward with nurse_count; none in the case file");
        return names;
    }
    default:
        if (builtin)
            return {"RKZ-41", "RKZ-42"};
        return file.ward_names();
    }
}

AnalysisReport analyze(const CaseFile& file, const AnalysisOptions& options)
{
    file.validate();
    AnalysisReport report;
    report.case_name = file.case_name;
    report.suspect = file.suspect;
    report.variant = file.variant;
    report.source = options.source;
    report.wards = file.wards;
    report.caveats = general_caveats();

    const std::vector<std::string> names = options.wards.value_or(default_wards(file, options.method, options.builtin));
    const std::string inputs = roster_inputs(file, names);

    switch (options.method) {
    case AnalysisMethod::elffers: {
        if (!options.jkz_multiplier)
            throw DomainError("--jkz-multiplier is required for the elffers method");
        CaseFile subset = file;
        subset.wards.clear();
        for (const auto& n : names)
            subset.wards.push_back(file.ward(n));
        const TestResult product = elffers_pipeline(subset, *options.jkz_multiplier);
        ReportEntry entry =
            to_entry(product, inputs + ";multiplier=" + std::to_string(*options.jkz_multiplier) + "@" + names.front());
        entry.add("published_bound", 1.0 / 342e6);
        entry.add("published_bound_text", std::string("less than 1 in 342 million (original data)"));
        report.results.push_back(std::move(entry));
        break;
    }
    case AnalysisMethod::per_ward:
        for (const auto& n : names)
            report.results.push_back(to_entry(ward_tail_p(file.ward(n)), roster_inputs(file, {n})));
        break;
    case AnalysisMethod::bonferroni:
        for (const auto& n : names) {
            const WardRoster& w = file.ward(n);
            if (!w.nurse_count)
                throw DomainError("ward '" + n + "' has no nurse_count; Bonferroni correction needs it");
            const double p = ward_tail_p(w).value;
            report.results.push_back(to_entry(bonferroni_min(std::span<const double>(&p, 1), *w.nurse_count),
                                              roster_inputs(file, {n})));
        }
        break;
    case AnalysisMethod::pooled:
        report.results.push_back(to_entry(pooled_test(file, names), inputs));
        break;
    case AnalysisMethod::convolved:
        report.results.push_back(to_entry(convolved_sum_test(file, names), inputs));
        break;
    case AnalysisMethod::fisher: {
        std::vector<double> tails;
        for (const auto& n : names)
            tails.push_back(ward_tail_p(file.ward(n)).value);
        TestResult combined = fisher_combine(tails);
        for (std::size_t i = 0; i < names.size(); ++i)
            combined.components[i].ward = names[i];
        report.results.push_back(to_entry(combined, inputs));
        break;
    }
    case AnalysisMethod::poisson_lr: {
        const WardRoster pooled = pool_wards(file, names);
        const IntensityEstimate mu = intensity_for(pooled, file, options.mu);
        const SuspectIntensity mu_suspect = SuspectIntensity::observed(pooled.suspect_incidents, pooled.suspect_shifts);
        const LikelihoodRatio lr = lr_poisson(mu, mu_suspect, pooled.suspect_shifts, pooled.suspect_incidents);
        report.results.push_back(to_entry(lr, mu, mu_suspect, inputs + mu_inputs(options.mu)));
        break;
    }
    case AnalysisMethod::binomial_cond: {
        const WardRoster pooled = pool_wards(file, names);
        report.results.push_back(to_entry(conditional_binomial_test(pooled), inputs));
        if (file.normal_rate)
            report.results.push_back(
                to_entry(conditional_binomial_test(pooled, 1.0, file.normal_rate), inputs + ";with normal_rate"));
        break;
    }
    case AnalysisMethod::bayes: {
        if (file.evidence.empty())
            throw DomainError("the bayes method needs an evidence list in the case file");
        if (!file.prior_probability)
            throw DomainError("the bayes method needs prior_probability in the case file");
        std::string evidence_inputs = "prior=" + format_number(*file.prior_probability);
        for (const auto& e : file.evidence)
            evidence_inputs += ";" + e.label + "=" + format_number(e.lr);
        report.results.push_back(
            to_entry(chain_from_prior_probability(*file.prior_probability, file.evidence), evidence_inputs));
        break;
    }
    case AnalysisMethod::relative_risk: {
        const WardRoster pooled = pool_wards(file, names);
        report.results.push_back(to_entry(relative_risk(pooled.suspect_incidents, pooled.suspect_shifts,
                                                        pooled.other_incidents(), pooled.other_shifts()),
                                          inputs));
        const IntensityEstimate mu = intensity_for(pooled, file, options.mu);
        const DerivedSimConfig derived = derive_sim_config(pooled, mu, options.replicates, options.seed);
        const SimulationReport sim = simulate_max_rr(derived.config, derived.observed_rr, options.workers);
        report.results.push_back(to_entry(sim, derived, inputs + mu_inputs(options.mu)));
        break;
    }
    }
    return report;
}

} // namespace coincidence

#include "coincidence/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace coincidence {

namespace {

using Json = nlohmann::ordered_json;

std::string caveat_for(TestMethod method)
{
    switch (method) {
    case TestMethod::elffers_pipeline:
        return "This product is not a p-value. Multiplying per-ward p-values shrinks the result regardless of the "
               "evidence, and the post hoc multiplier reuses the data that raised suspicion.";
    case TestMethod::per_ward_tail:
    case TestMethod::pooled_tail:
        return "Hypergeometric model " + std::string(kConditioningNote) +
               ": assumes every shift carries the same incident probability and incidents occur independently.";
    case TestMethod::convolved_sum:
        return "Each ward is modelled by its own hypergeometric distribution " + std::string(kConditioningNote) +
               " in that ward; wards are treated as independent.";
    case TestMethod::bonferroni:
        return "Correction for selecting the most extreme of the nurses; the level at which to correct (ward, "
               "hospital, country) is a subjective choice.";
    case TestMethod::fisher_combined:
        return "Fisher's method requires independent component p-values from data not used to select the suspect.";
    case TestMethod::conditional_binomial:
        return "Poisson model conditional on the grand total of incidents; additional normal-rate data can change "
               "this result substantially.";
    }
    return {};
}

Json value_to_json(const ReportValue& value)
{
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v))
                    return format_number(v);
            }
            return v;
        },
        value);
}

std::string value_to_text(const ReportValue& value)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return format_number(v);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return v;
        },
        value);
}

} // namespace

const ReportValue* ReportEntry::find(std::string_view key) const
{
    for (const auto& f : fields) {
        if (f.key == key)
            return &f.value;
    }
    return nullptr;
}

std::string fingerprint(std::string_view text)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, end);
}

std::string describe(const WardRoster& ward)
{
    std::ostringstream out;
    out << ward.name << "(n=" << ward.total_shifts << ",r=" << ward.suspect_shifts << ",k=" << ward.total_incidents
        << ",x=" << ward.suspect_incidents;
    if (ward.nurse_count)
        out << ",nurses=" << *ward.nurse_count;
    out << ")";
    return out.str();
}

ReportEntry make_entry(std::string method, std::string title, std::string inputs)
{
    ReportEntry entry;
    entry.fingerprint = fingerprint(method + "|" + inputs);
    entry.method = std::move(method);
    entry.title = std::move(title);
    entry.inputs = std::move(inputs);
    return entry;
}

ReportEntry to_entry(const TestResult& result, const std::string& inputs)
{
    std::string title;
    switch (result.method) {
    case TestMethod::elffers_pipeline: title = "Multiplied per-ward product (reproduction, not a p-value)"; break;
    case TestMethod::per_ward_tail: title = "Per-ward hypergeometric tail"; break;
    case TestMethod::bonferroni: title = "Bonferroni-corrected minimum"; break;
    case TestMethod::pooled_tail: title = "Pooled hypergeometric tail"; break;
    case TestMethod::convolved_sum: title = "Sum of independent per-ward hypergeometric counts"; break;
    case TestMethod::fisher_combined: title = "Fisher combination of per-ward tails"; break;
    case TestMethod::conditional_binomial: title = "Conditional binomial test"; break;
    }
    ReportEntry entry = make_entry(std::string(to_string(result.method)), title, inputs);
    if (result.is_p_value())
        entry.add("p_value", result.value);
    else
        entry.add("score", result.value);
    entry.add("is_p_value", result.is_p_value());
    if (result.statistic)
        entry.add("statistic", *result.statistic);
    for (const auto& c : result.components) {
        entry.add("component[" + c.ward + "].p", c.p_value);
        if (c.multiplier != 1.0)
            entry.add("component[" + c.ward + "].multiplier", c.multiplier);
    }
    entry.add("notes", result.notes);
    entry.caveats.push_back(caveat_for(result.method));
    return entry;
}

ReportEntry to_entry(const LikelihoodRatio& lr, const IntensityEstimate& mu, const SuspectIntensity& mu_suspect,
                     const std::string& inputs)
{
    ReportEntry entry = make_entry("poisson_lr", "Poisson likelihood ratio", inputs);
    entry.add("likelihood_ratio", lr.value);
    entry.add("verbal", lr.verbal.text);
    entry.add("direction", std::string(to_string(lr.verbal.direction)));
    entry.add("mu", mu.mu());
    entry.add("mu_basis", std::string(to_string(mu.basis)));
    if (mu.basis != MuBasis::fixed) {
        entry.add("mu_numerator", mu.numerator);
        entry.add("mu_denominator", mu.denominator);
    }
    entry.add("mu_suspect", mu_suspect.mu());
    entry.add("notes", lr.notes);
    entry.caveats.push_back("Both intensities are estimated from the same data that is being evaluated; the verbal "
                            "scale is only meaningful together with prior probabilities when the hypotheses were "
                            "suggested by the data.");
    return entry;
}

ReportEntry to_entry(const PriorConventionComparison& chain, const std::string& inputs)
{
    ReportEntry entry = make_entry("bayes_chain", "Bayesian odds chaining", inputs);
    entry.add("prior_probability", chain.prior_probability);
    for (const auto& item : chain.strict.applied())
        entry.add("lr[" + item.label + "]", item.lr);
    entry.add("prior_odds_strict", chain.strict.prior_odds());
    entry.add("posterior_odds_strict", chain.strict.posterior_odds());
    entry.add("posterior_probability_strict", posterior_probability(chain.strict));
    entry.add("prior_odds_shortcut", chain.shortcut.prior_odds());
    entry.add("posterior_odds_shortcut", chain.shortcut.posterior_odds());
    entry.add("posterior_probability_shortcut", posterior_probability(chain.shortcut));
    entry.caveats.push_back("Evidence items are assumed independent given each hypothesis; the likelihood ratios "
                            "and the prior are subjective and the posterior moves with them.");
    entry.caveats.push_back("'strict' converts the prior probability to odds p/(1-p); 'shortcut' uses the prior "
                            "probability itself as odds, which is the convention behind the published 8.75.");
    return entry;
}

ReportEntry to_entry(const RelativeRisk& rr, const std::string& inputs)
{
    ReportEntry entry = make_entry("relative_risk", "Relative risk of the suspect", inputs);
    entry.add("relative_risk", rr.value);
    entry.add("suspect_rate", rr.suspect_rate);
    entry.add("others_rate", rr.others_rate);
    entry.caveats.push_back("Some nurse always has the highest relative risk; its size alone says little without "
                            "the null distribution of the maximum.");
    return entry;
}

ReportEntry to_entry(const SimulationReport& report, const DerivedSimConfig& derived, const std::string& inputs)
{
    ReportEntry entry = make_entry("max_rr_simulation", "Simulated p-value of the largest relative risk", inputs);
    entry.add("p_value", report.p_value);
    entry.add("std_error", report.std_error);
    entry.add("threshold", report.threshold);
    entry.add("exceed_count", report.exceed_count);
    entry.add("degenerate_count", report.degenerate_count);
    entry.add("nurse_count", report.config.nurse_count);
    entry.add("nurse_ratio_exact", derived.exact_nurse_ratio);
    entry.add("nurse_count_floor", derived.floor_nurse_count);
    entry.add("shifts_per_nurse", report.config.shifts_per_nurse);
    entry.add("mu", report.config.mu);
    entry.add("mu_basis", std::string(to_string(derived.intensity.basis)));
    entry.add("replicates", report.config.replicates);
    entry.add("seed", static_cast<std::int64_t>(report.config.seed));
    entry.caveats.push_back("Simulated ward of equal-shift nurses with Poisson incident counts; ties with the "
                            "observed relative risk count as exceeding, and wards without incidents have relative "
                            "risk 1.");
    return entry;
}

std::vector<std::string> general_caveats()
{
    return {
        "Roster probabilities are computed " + std::string(kConditioningNote) + ".",
        "An unusual concentration of incidents shows association, not causation.",
        "All models assume incident rates do not depend on day or night shifts, case mix or how nurses are "
        "assigned to shifts; any of these can produce the same pattern.",
        "A small probability of the evidence under innocence is not a small probability of innocence given the "
        "evidence.",
    };
}

std::string render_text(const AnalysisReport& report)
{
    std::ostringstream out;
    out << "Case: " << report.case_name << "\n";
    out << "Suspect: " << report.suspect << "\n";
    out << "Data variant: " << to_string(report.variant) << "\n";
    out << "Source: " << report.source << "\n";
    out << "Wards:";
    for (const auto& w : report.wards)
        out << " " << describe(w);
    out << "\n";
    for (const auto& entry : report.results) {
        out << "\n== " << entry.title << " [" << entry.method << "]\n";
        out << "  inputs: " << entry.inputs << "\n";
        out << "  fingerprint: " << entry.fingerprint << "\n";
        for (const auto& f : entry.fields)
            out << "  " << f.key << ": " << value_to_text(f.value) << "\n";
        for (const auto& c : entry.caveats)
            out << "  caveat: " << c << "\n";
    }
    out << "\nCaveats:\n";
    for (const auto& c : report.caveats)
        out << "  - " << c << "\n";
    return out.str();
}

std::string render_machine(const AnalysisReport& report)
{
    Json root;
    root["case_name"] = report.case_name;
    root["suspect"] = report.suspect;
    root["variant"] = std::string(to_string(report.variant));
    root["source"] = report.source;
    root["wards"] = Json::array();
    for (const auto& w : report.wards) {
        Json ward{{"name", w.name},
                  {"total_shifts", w.total_shifts},
                  {"suspect_shifts", w.suspect_shifts},
                  {"total_incidents", w.total_incidents},
                  {"suspect_incidents", w.suspect_incidents}};
        if (w.nurse_count)
            ward["nurse_count"] = *w.nurse_count;
        root["wards"].push_back(std::move(ward));
    }
    root["results"] = Json::array();
    for (const auto& entry : report.results) {
        Json values = Json::object();
        for (const auto& f : entry.fields)
            values[f.key] = value_to_json(f.value);
        root["results"].push_back(Json{{"method", entry.method},
                                       {"title", entry.title},
                                       {"inputs", entry.inputs},
                                       {"fingerprint", entry.fingerprint},
                                       {"values", std::move(values)},
                                       {"caveats", entry.caveats}});
    }
    root["caveats"] = report.caveats;
    return root.dump(2) + "\n";
}

} // namespace coincidence

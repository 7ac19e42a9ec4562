#pragma once

// Report model shared by the human-readable and machine-readable renderers.
// Both renderers read the same field values, so they always agree numerically.

#include "coincidence/bayes_chain.hpp"
#include "coincidence/case_model.hpp"
#include "coincidence/frequentist.hpp"
#include "coincidence/poisson_evidence.hpp"
#include "coincidence/relative_risk_sim.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace coincidence {

using ReportValue = std::variant<double, std::int64_t, std::string, bool>;

struct ReportField {
    std::string key;
    ReportValue value;
};

struct ReportEntry {
    std::string method;
    std::string title;
    std::string inputs;      // canonical description of what was analysed
    std::string fingerprint; // FNV-1a 64 of method + inputs, hex
    std::vector<ReportField> fields;
    std::vector<std::string> caveats;

    void add(std::string key, ReportValue value) { fields.push_back({std::move(key), std::move(value)}); }
    const ReportValue* find(std::string_view key) const;
};

struct AnalysisReport {
    std::string case_name;
    std::string suspect;
    DataVariant variant = DataVariant::corrected;
    std::string source;
    std::vector<WardRoster> wards;
    std::vector<ReportEntry> results;
    std::vector<std::string> caveats;
};

/// Hex FNV-1a 64 digest.
std::string fingerprint(std::string_view text);

/// Shortest round-trip decimal; "inf" / "-inf" / "nan" for non-finite values.
std::string format_number(double value);

std::string describe(const WardRoster& ward);

ReportEntry make_entry(std::string method, std::string title, std::string inputs);

ReportEntry to_entry(const TestResult& result, const std::string& inputs);
ReportEntry to_entry(const LikelihoodRatio& lr, const IntensityEstimate& mu, const SuspectIntensity& mu_suspect,
                     const std::string& inputs);
ReportEntry to_entry(const PriorConventionComparison& chain, const std::string& inputs);
ReportEntry to_entry(const RelativeRisk& rr, const std::string& inputs);
ReportEntry to_entry(const SimulationReport& report, const DerivedSimConfig& derived, const std::string& inputs);

/// Case header, one block per result, caveats.
std::string render_text(const AnalysisReport& report);

/// JSON in the case-file style with a top-level "results" array.
std::string render_machine(const AnalysisReport& report);

/// Caveats that apply to every analysis of roster coincidences.
std::vector<std::string> general_caveats();

} // namespace coincidence

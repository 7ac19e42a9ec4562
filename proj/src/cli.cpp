#include "coincidence/cli.hpp"

#include "coincidence/analysis.hpp"
#include "coincidence/case_model.hpp"
#include "coincidence/reproduction.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

namespace coincidence {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Statistical evaluation of incident coincidences in shift rosters", "coincidence"};
    app.require_subcommand(1);

    std::string case_path;
    std::string builtin;
    std::string method;
    std::vector<std::string> wards;
    std::int64_t multiplier = 0;
    std::string mu_basis = "exclude-suspect";
    std::uint64_t seed = kDefaultSeed;
    std::int64_t replicates = kDefaultReplicates;
    unsigned workers = 0;
    std::string output = "text";

    auto* analyze_cmd = app.add_subcommand("analyze", "Run one analysis on a case file or the built-in case");
    auto* case_opt = analyze_cmd->add_option("--case,case", case_path, "Case file (JSON)");
    auto* builtin_opt = analyze_cmd->add_option("--builtin", builtin, "Built-in case data variant")
                            ->check(CLI::IsMember({"original", "corrected"}));
    case_opt->excludes(builtin_opt);
    analyze_cmd->add_option("--method", method, "Analysis method")
        ->required()
        ->check(CLI::IsMember({"elffers", "per-ward", "bonferroni", "pooled", "convolved", "fisher", "poisson-lr",
                               "binomial-cond", "bayes", "relative-risk"}));
    auto* wards_opt = analyze_cmd->add_option("--wards", wards, "Comma-separated ward names")->delimiter(',');
    auto* multiplier_opt =
        analyze_cmd->add_option("--jkz-multiplier", multiplier, "Post hoc multiplier for the first ward")
            ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--mu-basis", mu_basis,
                            "exclude-suspect | include-suspect | augmented | fixed=<value>");
    analyze_cmd->add_option("--seed", seed, "Simulation seed");
    analyze_cmd->add_option("--replicates", replicates, "Simulation replicates")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--workers", workers, "Simulation threads (0 = all cores)");
    analyze_cmd->add_option("--output", output, "Report format")->check(CLI::IsMember({"text", "machine"}));

    auto* reproduce_cmd = app.add_subcommand("reproduce-paper", "Regenerate the published numbers of the case");
    reproduce_cmd->add_option("--seed", seed, "Seed for every Monte Carlo row");
    reproduce_cmd->add_option("--workers", workers, "Simulation threads (0 = all cores)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
    }

    try {
        if (reproduce_cmd->parsed()) {
            const auto rows = reproduce_paper(seed, workers);
            out << render_reproduction(rows, seed);
            return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.passed; }) ? 0 : 1;
        }

        AnalysisOptions options;
        CaseFile file;
        if (!case_path.empty()) {
            file = load_case(case_path);
            options.source = case_path;
        } else {
            const DataVariant variant = variant_from_string(builtin.empty() ? "corrected" : builtin);
            file = builtin_paper_case(variant);
            options.builtin = true;
            options.source = "builtin:" + std::string(to_string(variant));
        }
        options.method = analysis_method_from_string(method);
        if (*wards_opt)
            options.wards = wards;
        if (*multiplier_opt)
            options.jkz_multiplier = multiplier;
        options.mu = mu_choice_from_string(mu_basis);
        options.seed = seed;
        options.replicates = replicates;
        options.workers = workers;

        const AnalysisReport report = analyze(file, options);
        out << (output == "machine" ? render_machine(report) : render_text(report));
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace coincidence

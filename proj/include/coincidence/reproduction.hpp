#pragma once

// Regenerates the published numbers of the case from the built-in rosters and
// compares each with its published value.

#include <cstdint>
#include <string>
#include <vector>

namespace coincidence {

struct ReproductionRow {
    std::string label;
    std::string paper_value;
    double computed = 0.0;
    std::string tolerance;
    bool passed = false;
};

/// v rounded to `digits` significant figures.
double round_significant(double v, int digits);

std::vector<ReproductionRow> reproduce_paper(std::uint64_t seed, unsigned workers = 0);

std::string render_reproduction(const std::vector<ReproductionRow>& rows, std::uint64_t seed);

} // namespace coincidence

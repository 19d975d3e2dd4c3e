#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace funcoord {

struct CriterionResult {
    std::string name;
    bool passed = false;
    double max_residual = 0.0;  // worst measured quantity for the criterion
    double tolerance = 0.0;     // gate it was held against
    std::string detail;
};

/// Runs the full reproduction suite. Deterministic in the seed.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed);

/// Summary CSV (criterion, passed, max_residual, tolerance, detail) with
/// 17-significant-digit floats; byte-stable for a fixed seed.
std::string acceptance_csv(const std::vector<CriterionResult>& results);

/// %.17g rendering used for every float that reaches a CSV file.
std::string format_float(double v);

/// RFC-4180 quoting: fields with commas, quotes or newlines get quoted,
/// embedded quotes doubled.
std::string csv_escape(const std::string& field);

}  // namespace funcoord

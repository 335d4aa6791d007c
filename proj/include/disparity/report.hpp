#pragma once

#include <optional>
#include <string>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/config.hpp"
#include "disparity/error.hpp"
#include "disparity/inference.hpp"

namespace disparity {

struct RunFailure {
    ErrorKind kind;
    std::string message;
};

struct RunResult {
    RunEntry entry;
    AnalysisSpec spec;
    std::optional<DecompositionEstimate> estimate;
    std::optional<BootstrapSummary> bootstrap;
    std::optional<RunFailure> failure;
    std::vector<std::string> warnings;
};

struct Report {
    std::string input;
    std::size_t n_rows = 0;
    std::vector<RunResult> runs;
};

/// Runs every entry; a failing run is recorded and its siblings continue.
Report execute(const RunConfig& cfg, const Dataset& d);

/// Schema-stable JSON; non-finite numbers become null with a reason.
std::string report_json(const Report& r);

/// Rows initial / residual / % reduction, one column per run.
std::string report_table(const Report& r);

}  // namespace disparity

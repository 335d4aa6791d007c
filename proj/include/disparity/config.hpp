#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"
#include "disparity/synthetic.hpp"

namespace disparity {

struct MissingIndicatorStep {
    std::vector<std::string> columns;
    double fill = 0.0;
};

struct PcaStep {
    std::vector<std::string> columns;
    std::string output;
    std::optional<Role> role;
};

struct DiscretizeStep {
    std::vector<std::string> columns;
    int bins = 5;
};

struct RunEntry {
    Proposition proposition = Proposition::P1;
    Estimator estimator = Estimator::Successive;
    OutcomeFamily family = OutcomeFamily::Continuous;
    std::optional<double> conditioning_value_x;
    bool interactions = false;
    std::string label;
    int line = 0;
};

/// One config = one dataset and many (proposition, estimator) runs.
struct RunConfig {
    std::filesystem::path input;
    RoleMap roles;
    std::vector<MissingIndicatorStep> missing_indicators;
    std::vector<PcaStep> pca;
    std::vector<DiscretizeStep> discretize;
    std::vector<RunEntry> runs;
    AnalysisOptions options;
    /// 0 disables the bootstrap.
    int bootstrap_b = 1000;
    std::optional<std::filesystem::path> json_output;
    std::optional<std::filesystem::path> table_output;

    /// Roles after preprocessing: missing indicators and PCA outputs added.
    RoleMap effective_roles() const;
    AnalysisSpec spec_for(const RunEntry& run) const;
};

/// Parses YAML (JSON is accepted). Relative paths resolve against
/// `base_dir`. Throws Error(Config) with the offending line.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Checks every run against the spec rules before any computation.
void validate_config(const RunConfig& cfg);

/// Loads the input CSV and applies the preprocessing steps in order:
/// missing indicators, principal components, discretization.
Dataset prepare_dataset(const RunConfig& cfg);

struct GenerateConfig {
    StructuralParams params;
    std::size_t n = 1000;
    std::uint64_t seed = 1;
};

GenerateConfig parse_generate_config(const std::string& text);
GenerateConfig load_generate_config(const std::filesystem::path& path);

}  // namespace disparity

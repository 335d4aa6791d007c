#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"

namespace disparity {

enum class ProportionScale { Additive, Relative };

/// Additive: (D - D*) / D. Relative: (R - R*) / (R - 1). Throws DegenerateInitial.
double proportion_reduced(double initial, double residual, ProportionScale scale);

inline constexpr int kDefaultReplicates = 1000;
inline constexpr double kMaxFailureShare = 0.10;

struct BootstrapOptions {
    int replicates = kDefaultReplicates;
    std::uint64_t seed = 20240101;
    /// Resample within each level of this 0/1 column (empty: simple resampling).
    std::string stratify_by;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct QuantitySummary {
    double estimate = 0.0;
    double se = 0.0;
    double lower = 0.0;  // 2.5th percentile
    double upper = 0.0;  // 97.5th percentile
    int replicates_used = 0;
};

struct StatisticSummary {
    int replicates = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> names;
    std::vector<QuantitySummary> quantities;
    int failed = 0;
    std::map<std::string, int> failure_reasons;
};

using Statistic = std::function<std::vector<double>(const Dataset&)>;

/// Row indices for one resample: a pure function of (n, seed, replicate).
std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t replicate);
/// Resample separately within groups, keeping each group's size.
std::vector<std::size_t> resample_indices(const std::vector<std::vector<std::size_t>>& groups, std::uint64_t seed,
                                          std::uint64_t replicate);

/// Generic bootstrap of a vector-valued statistic. Replicates whose statistic
/// throws disparity::Error are counted as failures by error kind.
StatisticSummary bootstrap(const Dataset& d, const Statistic& stat, std::vector<std::string> names,
                           const BootstrapOptions& opt);

struct BootstrapSummary {
    int replicates = 0;
    std::uint64_t seed = 0;
    bool stratified = false;
    QuantitySummary initial;
    QuantitySummary residual;
    QuantitySummary reduction;
    QuantitySummary proportion;
    int failed = 0;
    std::map<std::string, int> failure_reasons;
};

using Decomposer = std::function<DecompositionEstimate(const Dataset&, const AnalysisSpec&)>;

/// Bootstrap of a decomposition run; point estimates come from `full`.
BootstrapSummary bootstrap(const Dataset& d, const AnalysisSpec& spec, const DecompositionEstimate& full,
                           const Decomposer& decompose, int replicates, std::uint64_t seed);

}  // namespace disparity

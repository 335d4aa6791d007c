#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "disparity/inference.hpp"

namespace disparity {

/// Estimators exercised by the self-check; replaceable so a broken
/// implementation can be substituted and caught.
struct EstimatorTable {
    Decomposer successive;
    Decomposer product;
    Decomposer plugin;
    Decomposer saturated;
    Decomposer oaxaca;
    Decomposer interaction;

    static EstimatorTable defaults();
};

struct IdentityCheck {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::vector<IdentityCheck> run_selfcheck(const EstimatorTable& table = EstimatorTable::defaults(),
                                         std::uint64_t seed = 7);

bool all_pass(const std::vector<IdentityCheck>& checks);
std::string format_selfcheck(const std::vector<IdentityCheck>& checks);

/// |a - b| / max(|a|, |b|, 1e-300), or 0 when both are exactly equal.
double relative_gap(double a, double b);

}  // namespace disparity

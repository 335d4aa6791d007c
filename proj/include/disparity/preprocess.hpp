#pragma once

#include <span>
#include <string>
#include <vector>

#include "disparity/dataset.hpp"

namespace disparity {

/// For each named column, append `<name>_miss` (1 = missing, 0 = observed,
/// role MISSING_INDICATOR) and replace missing cells with `fill`.
Dataset add_missing_indicators(const Dataset& d, std::span<const std::string> columns, double fill = 0.0);

/// (v - mean) / sd with the sample sd; missing cells stay missing.
Column standardize(const Column& v);

struct PrincipalComponent {
    Column scores;
    std::vector<double> loadings;
    double eigenvalue = 0.0;
};

/// Leading principal component of the standardized columns. The loading of
/// the first listed column is made nonnegative; scores have mean zero.
PrincipalComponent first_principal_component(const Dataset& d, std::span<const std::string> columns);

/// Replace each value with the index (0..bins-1) of its sample quantile bin.
/// Ties never straddle a boundary, so fewer than `bins` levels may result.
Column quantile_bins(const Column& v, int bins = 5);

}  // namespace disparity

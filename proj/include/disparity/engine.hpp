#pragma once

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"

namespace disparity {

/// Validates the spec and routes it to the estimator it names: plug-in,
/// time-dependent plug-in, Oaxaca-Blinder (interactions on), logistic
/// (rare binary), product of coefficients, or successive models.
DecompositionEstimate decompose(const Dataset& d, const AnalysisSpec& spec);

}  // namespace disparity

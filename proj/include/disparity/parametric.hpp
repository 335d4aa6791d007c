#pragma once

#include <string>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"
#include "disparity/regression.hpp"

namespace disparity {

// Coefficients read off the successive outcome models. Model j (j = 0..K)
// regresses Y on R, the first j early columns and C; the full model adds M.
struct SuccessiveCoefficients {
    std::vector<double> group;                 // coefficient of R in model j
    std::vector<std::vector<double>> early;    // early[j][i]: coefficient of X_{i+1} in model j (i < j)
    double full_group = 0.0;                   // R in the full model
    std::vector<double> full_early;            // X_i in the full model
    bool has_full = false;

    std::size_t k() const { return group.size() - 1; }
};

struct LinearParts {
    double initial = 0.0;
    double residual = 0.0;
    double reduction = 0.0;
};

/// Residual/reduction on the linear-predictor scale for P1..P4.
LinearParts successive_formula(Proposition p, const SuccessiveCoefficients& c);

/// P4 for three early measures, written as the four-term expansion in
/// (model2.r - model3.r), (model1.r - model2.r), (model0.r - model1.r).
LinearParts p4_three_early_expansion(const SuccessiveCoefficients& c);

/// P4 for any K via the implied group gaps d_j of each early measure:
/// d_j = (total - model_j.r - sum_{i<j} model_j.x_i d_i) / model_j.x_j,
/// residual = full.r + sum_j full.x_j d_j.
LinearParts p4_recursion(const SuccessiveCoefficients& c);

struct ProductCoefficients {
    double outcome_group = 0.0;   // Y ~ r,x,m,c: coefficient of r
    double outcome_early = 0.0;   // ... of x
    double outcome_target = 0.0;  // ... of m
    double target_group = 0.0;    // M ~ r,x,c: coefficient of r
    double target_early = 0.0;    // ... of x
    double early_group = 0.0;     // X ~ r,c: coefficient of r
};

LinearParts product_formula(Proposition p, const ProductCoefficients& c);

/// Standardized size below which a coefficient used as a divisor is rejected.
inline constexpr double kNearZero = 1e-8;

DecompositionEstimate decompose_successive_linear(const Dataset& d, const AnalysisSpec& spec);
DecompositionEstimate decompose_successive_multix(const Dataset& d, const AnalysisSpec& spec);
DecompositionEstimate decompose_product_coefficients(const Dataset& d, const AnalysisSpec& spec);
/// Ratio scale, exp of the linear-predictor formulas from logistic outcome
/// fits. SUCCESSIVE: all outcome models logistic; PRODUCT: logistic Y with
/// linear M and X models.
DecompositionEstimate decompose_logistic_rare(const Dataset& d, const AnalysisSpec& spec);

/// Threshold on the outcome mean above which the rare-outcome approximation
/// is flagged.
inline constexpr double kRarePrevalence = 0.10;

/// OLS or logistic fit of `response` on an intercept, R, `regressors` and C.
CoefficientSet fit_model(const Dataset& frame, const std::string& response, const std::vector<std::string>& regressors,
                         const Bindings& b, bool logistic);

}  // namespace disparity

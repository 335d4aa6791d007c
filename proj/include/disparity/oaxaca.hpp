#pragma once

#include <map>
#include <string>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"
#include "disparity/regression.hpp"

namespace disparity {

enum class ObMode { Marginal, Conditional };
enum class ReferenceCoefficients { Group1, Group0 };

struct ObTerm {
    std::string label;
    double value = 0.0;
};

struct ObResult {
    ObMode mode = ObMode::Marginal;
    ReferenceCoefficients reference = ReferenceCoefficients::Group1;
    double total_gap = 0.0;
    double unexplained = 0.0;
    double explained = 0.0;
    /// Intercept gap, then one coefficient-gap term per explanatory column,
    /// then one per conditioning column.
    std::vector<ObTerm> unexplained_terms;
    std::vector<ObTerm> explained_terms;
    /// Conditioning values the decomposition is evaluated at.
    std::map<std::string, double> profile;
    std::map<std::string, double> mean1;
    std::map<std::string, double> mean0;
    CoefficientSet fit1;
    CoefficientSet fit0;

    double explained_for(const std::string& label) const;
};

struct ObOptions {
    ReferenceCoefficients reference = ReferenceCoefficients::Group1;
    /// Overrides of the evaluation profile; unlisted conditioning columns
    /// are set to their R=0 means.
    std::map<std::string, double> profile;
};

/// E[V | R=r, conditioning = profile]: the group mean when there is no
/// conditioning, otherwise the OLS projection V ~ 1 + R + conditioning
/// evaluated at the profile.
double conditional_mean(const Dataset& frame, const std::string& group, const std::string& v,
                        const std::vector<std::string>& conditioning, const std::map<std::string, double>& profile, int r);

/// Group-stratified regressions Y ~ 1 + explanatory + conditioning. An empty
/// conditioning list gives the MARGINAL decomposition.
ObResult oaxaca_decompose(const Dataset& d, const std::string& outcome, const std::string& group,
                          const std::vector<std::string>& explanatory, const std::vector<std::string>& conditioning,
                          const ObOptions& opt = {});

/// P1..P4 from the stratified fits: P1 explains X given C; P2 explains M given
/// X (at the anchor) and C; P3 explains X and M; P4 credits only the M term.
DecompositionEstimate proposition_via_oaxaca(const Dataset& d, const AnalysisSpec& spec);

/// The same four quantities from one pooled model with R x X, R x M and R x C
/// interactions.
DecompositionEstimate decompose_interaction_model(const Dataset& d, const AnalysisSpec& spec);

}  // namespace disparity

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "disparity/design.hpp"

namespace disparity {

/// One fitted model: a coefficient per design column plus fit diagnostics.
struct CoefficientSet {
    std::vector<std::string> labels;
    Eigen::VectorXd beta;
    double residual_variance = 0.0;  // OLS only
    double deviance = 0.0;           // logistic only
    int iterations = 0;
    bool converged = true;
    std::size_t n = 0;

    bool has(std::string_view label) const;
    /// Throws UnknownColumn.
    double operator[](std::string_view label) const;
};

inline constexpr double kRankTolerance = 1e-10;

/// Least squares via column-pivoted QR. Throws RankDeficient naming the
/// columns the pivoting found to be dependent.
CoefficientSet fit_ols(const DesignMatrix& x, const Eigen::VectorXd& y);

struct LogisticControl {
    int max_iterations = 100;
    double coef_tolerance = 1e-10;
    double deviance_tolerance = 1e-12;
    double divergence_norm = 1e3;
};

/// Maximum likelihood logistic regression by IRLS, started at zero slopes
/// and intercept logit(mean y). Throws Separation, NotConverged, RankDeficient.
CoefficientSet fit_logistic(const DesignMatrix& x, const Eigen::VectorXd& y, const LogisticControl& ctl = {});

/// Gradient of the logistic log-likelihood at `beta`.
Eigen::VectorXd logistic_score(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta);

}  // namespace disparity

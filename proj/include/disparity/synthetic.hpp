#pragma once

#include <cstdint>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"

namespace disparity {

/// Linear structural model: R -> X -> M -> Y with direct R and X effects.
///   X = a0 + a1 R (+ ac C) + sx e
///   L = c0 + c1 R + c2 X + sl e                  (optional)
///   M = b0 + b1 R + b2 X (+ bl L + bc C) + sm e
///   Y = t0 + t1 R + t2 X + t3 M (+ tl L + tc C) + sy e
/// In Bernoulli mode X, M (and L) are 0/1 draws whose success probabilities
/// are the linear predictors above, so conditional means stay linear.
struct ExtraEarly {
    double a1 = 0.0;  // group gap
    double b2 = 0.0;  // effect on M
    double t2 = 0.0;  // effect on Y
    double sd = 1.0;
};

struct StructuralParams {
    double p_r = 0.5;

    double a0 = 0.0, a1 = 0.0, ac = 0.0, sigma_x = 1.0;
    double b0 = 0.0, b1 = 0.0, b2 = 0.0, bl = 0.0, bc = 0.0, sigma_m = 1.0;
    double t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0, tl = 0.0, tc = 0.0, sigma_y = 1.0;

    bool with_l = false;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, sigma_l = 1.0;

    bool with_c = false;
    double p_c = 0.5;

    /// Additional early measures x2, x3, ... with independent normal noise.
    std::vector<ExtraEarly> extra_early;

    bool bernoulli_xm = false;

    /// Y ~ Bernoulli(expit(linear predictor)); t0 is replaced by the value
    /// that makes the sample mean of the probabilities equal `prevalence`.
    bool binary_y = false;
    double prevalence = 0.01;

    /// Throws InvalidSpec.
    void validate() const;
};

/// Columns y, r, x (x2, ... for extra early measures), m, and l, c when
/// enabled; roles are tagged.
Dataset generate(const StructuralParams& p, std::size_t n, std::uint64_t seed);

/// Closed-form population decomposition on the additive scale. Throws
/// UnsupportedMode for binary-Y or L variants.
DecompositionEstimate true_values(const StructuralParams& p, Proposition prop);

double true_total_disparity(const StructuralParams& p);

}  // namespace disparity

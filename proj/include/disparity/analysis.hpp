#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "disparity/dataset.hpp"

namespace disparity {

// P1 equalize X; P2 equalize M within levels of X; P3 equalize X and M;
// P4 equalize M marginally. P5..P7 are P2..P4 with a confounder L of M->Y
// that is itself affected by R and X.
enum class Proposition { P1, P2, P3, P4, P5, P6, P7 };
enum class Estimator { Successive, Product, Plugin };
enum class OutcomeFamily { Continuous, RareBinary };
enum class Scale { Additive, Ratio };
/// Weights used to average C-stratum specific quantities.
enum class StratumWeight { Group1, Group0, Pooled };

std::string_view to_string(Proposition p);
std::string_view to_string(Estimator e);
std::string_view to_string(OutcomeFamily f);
std::string_view to_string(Scale s);
std::string_view to_string(StratumWeight w);
std::optional<Proposition> parse_proposition(std::string_view s);
std::optional<Estimator> parse_estimator(std::string_view s);
std::optional<OutcomeFamily> parse_family(std::string_view s);
std::optional<StratumWeight> parse_stratum_weight(std::string_view s);

bool is_timedep(Proposition p);
/// P5/P6/P7 -> P2/P3/P4; identity otherwise.
Proposition base_proposition(Proposition p);

struct Bindings {
    std::string outcome;
    std::string group;
    std::vector<std::string> covariates;  // includes missing indicators
    std::vector<std::string> early;
    std::string target;
    std::optional<std::string> confounder;

    static Bindings from_roles(const Dataset& d);
    /// outcome, group, covariates, early, target, confounder (if any).
    std::vector<std::string> all_columns() const;
};

struct AnalysisOptions {
    int bootstrap_b = 1000;
    std::uint64_t seed = 20240101;
    bool stratified_bootstrap = false;
    /// Adds R x X and R x M (and R x C) interactions; P1-P4 then go through
    /// the Oaxaca-Blinder mapping.
    bool interactions = false;
    StratumWeight stratum_weight = StratumWeight::Group1;
    int max_levels = 20;
};

struct AnalysisSpec {
    Proposition proposition = Proposition::P1;
    Estimator estimator = Estimator::Successive;
    OutcomeFamily family = OutcomeFamily::Continuous;
    Bindings bindings;
    /// P2/P5: the x stratum to condition on. Unset means average over the
    /// R=1 distribution of X (plug-in) or evaluate at the R=1 mean (OB).
    std::optional<double> conditioning_value_x;
    AnalysisOptions options;

    /// Throws InvalidSpec naming the violated constraint.
    void validate() const;
};

struct DecompositionEstimate {
    Proposition proposition = Proposition::P1;
    Scale scale = Scale::Additive;
    Estimator estimator = Estimator::Successive;
    std::string method;
    double initial = 0.0;
    double residual = 0.0;
    double reduction = 0.0;
    /// NaN when the initial disparity is degenerate.
    double proportion = 0.0;
    std::size_t n_used = 0;
    /// "<model>.<column>" -> coefficient.
    std::map<std::string, double> coefficients;
    std::vector<std::string> warnings;
    std::map<std::string, std::string> metadata;
};

/// Rows complete for every bound column, with both groups present.
Dataset analysis_frame(const Dataset& d, const AnalysisSpec& spec);

/// Fill in proportion (or NaN plus a warning when degenerate).
void finish_estimate(DecompositionEstimate& e);

}  // namespace disparity

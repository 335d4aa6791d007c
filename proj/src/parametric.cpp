#include "disparity/parametric.hpp"

#include <cmath>

#include "disparity/design.hpp"
#include "disparity/error.hpp"

namespace disparity {

namespace {

double sample_sd(const Column& v)
{
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void snapshot(DecompositionEstimate& e, const std::string& model, const CoefficientSet& cs)
{
    for (std::size_t j = 0; j < cs.labels.size(); ++j) {
        e.coefficients[model + "." + cs.labels[j]] = cs.beta(static_cast<Eigen::Index>(j));
    }
}

// Divisors must not vanish on the standardized scale (scale-free, so the
// check is unaffected by rescaling X).
void check_divisor(double coef, const Column& x, double y_scale, const std::string& what)
{
    const double sx = sample_sd(x);
    if (!(std::abs(coef) * sx / y_scale >= kNearZero)) {
        throw Error(ErrorKind::NearZeroDenominator, what + " is numerically zero (" + std::to_string(coef) +
                                                        "); the ratio in the P4 formula is undefined");
    }
}

void require_binary_outcome(const Dataset& frame, const std::string& y)
{
    for (double v : frame.column(y)) {
        if (v != 0.0 && v != 1.0) throw Error(ErrorKind::InvalidSpec, "RARE_BINARY outcome '" + y + "' must be 0/1");
    }
}

double mean_of(const Column& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

struct SuccessiveFit {
    SuccessiveCoefficients coef;
    std::vector<CoefficientSet> models;
    CoefficientSet full;
};

SuccessiveFit fit_successive(const Dataset& frame, const AnalysisSpec& spec, bool logistic, bool need_full)
{
    const auto& b = spec.bindings;
    SuccessiveFit fit;
    const std::size_t k = b.early.size();
    for (std::size_t j = 0; j <= k; ++j) {
        std::vector<std::string> regs(b.early.begin(), b.early.begin() + static_cast<long>(j));
        auto cs = fit_model(frame, b.outcome, regs, b, logistic);
        fit.coef.group.push_back(cs[b.group]);
        std::vector<double> xs;
        for (const auto& x : regs) xs.push_back(cs[x]);
        fit.coef.early.push_back(std::move(xs));
        fit.models.push_back(std::move(cs));
    }
    if (need_full) {
        auto regs = b.early;
        regs.push_back(b.target);
        fit.full = fit_model(frame, b.outcome, regs, b, logistic);
        fit.coef.full_group = fit.full[b.group];
        for (const auto& x : b.early) fit.coef.full_early.push_back(fit.full[x]);
        fit.coef.has_full = true;
    }
    return fit;
}

void check_p4_divisors(const Dataset& frame, const AnalysisSpec& spec, const SuccessiveCoefficients& c, bool logistic)
{
    const auto& b = spec.bindings;
    const double ys = logistic ? 1.0 : sample_sd(frame.column(b.outcome));
    for (std::size_t j = 1; j <= c.k(); ++j) {
        check_divisor(c.early[j][j - 1], frame.column(b.early[j - 1]), ys,
                      "coefficient of '" + b.early[j - 1] + "' in outcome model " + std::to_string(j));
    }
}

DecompositionEstimate successive_estimate(const Dataset& d, const AnalysisSpec& spec, bool logistic)
{
    const Dataset frame = analysis_frame(d, spec);
    const auto prop = spec.proposition;
    const bool need_full = prop != Proposition::P1;
    const auto fit = fit_successive(frame, spec, logistic, need_full);
    if (prop == Proposition::P4) check_p4_divisors(frame, spec, fit.coef, logistic);

    LinearParts parts = successive_formula(prop, fit.coef);
    DecompositionEstimate e;
    e.proposition = prop;
    e.estimator = Estimator::Successive;
    e.n_used = frame.n_rows();
    for (std::size_t j = 0; j < fit.models.size(); ++j) snapshot(e, "outcome_" + std::to_string(j), fit.models[j]);
    if (need_full) snapshot(e, "outcome_full", fit.full);

    const std::size_t k = spec.bindings.early.size();
    e.method = k == 1 ? "successive" : "successive_multi_early";
    if (k == 3 && prop == Proposition::P4) {
        parts = p4_three_early_expansion(fit.coef);
        e.metadata["p4_form"] = "three_measure_expansion";
    } else if (k > 1 && prop == Proposition::P4) {
        e.metadata["p4_form"] = "recursion";
    }
    if (prop == Proposition::P2) e.metadata["initial_definition"] = "disparity conditional on early measures";

    if (logistic) {
        e.scale = Scale::Ratio;
        e.method = "successive_logistic";
        e.initial = std::exp(parts.initial);
        e.residual = std::exp(parts.residual);
        e.reduction = std::exp(parts.reduction);
    } else {
        e.scale = Scale::Additive;
        e.initial = parts.initial;
        e.residual = parts.residual;
        e.reduction = parts.reduction;
    }
    return e;
}

DecompositionEstimate product_estimate(const Dataset& d, const AnalysisSpec& spec, bool logistic)
{
    if (spec.bindings.early.size() != 1 || spec.bindings.target.empty()) {
        throw Error(ErrorKind::InvalidSpec, "estimator PRODUCT requires exactly one EARLY column and one TARGET column");
    }
    const Dataset frame = analysis_frame(d, spec);
    const auto& b = spec.bindings;
    const auto& x = b.early.front();
    const auto outcome = fit_model(frame, b.outcome, {x, b.target}, b, logistic);
    const auto target = fit_model(frame, b.target, {x}, b, false);
    const auto early = fit_model(frame, x, {}, b, false);

    ProductCoefficients c;
    c.outcome_group = outcome[b.group];
    c.outcome_early = outcome[x];
    c.outcome_target = outcome[b.target];
    c.target_group = target[b.group];
    c.target_early = target[x];
    c.early_group = early[b.group];
    const LinearParts parts = product_formula(spec.proposition, c);

    DecompositionEstimate e;
    e.proposition = spec.proposition;
    e.estimator = Estimator::Product;
    e.n_used = frame.n_rows();
    snapshot(e, "outcome_full", outcome);
    snapshot(e, "target_model", target);
    snapshot(e, "early_model", early);
    e.metadata["initial_definition"] = spec.proposition == Proposition::P2 ? "implied disparity conditional on early measure"
                                                                            : "implied total disparity";
    if (logistic) {
        e.scale = Scale::Ratio;
        e.method = "product_logistic";
        e.residual = std::exp(parts.residual);
        e.reduction = std::exp(parts.reduction);
        e.initial = std::exp(parts.residual + parts.reduction);
    } else {
        e.scale = Scale::Additive;
        e.method = "product";
        e.residual = parts.residual;
        e.reduction = parts.reduction;
        e.initial = parts.residual + parts.reduction;
    }
    return e;
}

}  // namespace

CoefficientSet fit_model(const Dataset& frame, const std::string& response, const std::vector<std::string>& regressors,
                         const Bindings& b, bool logistic)
{
    DesignBuilder db(frame.n_rows());
    db.add(b.group, frame.column(b.group));
    for (const auto& r : regressors) db.add(r, frame.column(r));
    for (const auto& c : b.covariates) db.add(c, frame.column(c));
    const DesignMatrix x = db.build();
    const Eigen::VectorXd y = to_vector(frame.column(response));
    return logistic ? fit_logistic(x, y) : fit_ols(x, y);
}

LinearParts successive_formula(Proposition p, const SuccessiveCoefficients& c)
{
    const std::size_t k = c.k();
    const double total = c.group[0];
    const double early_adj = c.group[k];
    LinearParts out;
    switch (p) {
    case Proposition::P1:
        out.initial = total;
        out.residual = early_adj;
        out.reduction = total - early_adj;
        break;
    case Proposition::P2:
        out.initial = early_adj;
        out.residual = c.full_group;
        out.reduction = early_adj - c.full_group;
        break;
    case Proposition::P3:
        out.initial = total;
        out.residual = c.full_group;
        out.reduction = total - c.full_group;
        break;
    case Proposition::P4:
        if (k == 1) {
            const double ratio = c.full_early[0] / c.early[1][0];
            out.initial = total;
            out.residual = c.full_group + ratio * (total - c.group[1]);
            out.reduction = (c.group[1] - c.full_group) + (1.0 - ratio) * (total - c.group[1]);
        } else {
            out = p4_recursion(c);
        }
        break;
    default:
        throw Error(ErrorKind::UnsupportedMode, std::string(to_string(p)) + " has no parametric form");
    }
    return out;
}

LinearParts p4_three_early_expansion(const SuccessiveCoefficients& c)
{
    if (c.k() != 3) throw Error(ErrorKind::InvalidSpec, "three-measure expansion needs exactly three early columns");
    // Model j coefficients: group[j]; early[j][i] for X_{i+1}.
    const double phi1 = c.group[0];
    const double gam1 = c.group[1], gam2 = c.early[1][0];
    const double eta1 = c.group[2], eta2 = c.early[2][0], eta3 = c.early[2][1];
    const double del1 = c.group[3], del2 = c.early[3][0], del3 = c.early[3][1], del4 = c.early[3][2];
    const double th1 = c.full_group, th2 = c.full_early[0], th3 = c.full_early[1], th4 = c.full_early[2];

    const double r4 = th4 / del4;
    const double a = 1.0 - del3 / eta3;
    const double b = 1.0 - eta2 / gam2;
    const double bracket = (eta2 - del2) / gam2 + a * b;

    LinearParts out;
    out.initial = phi1;
    out.residual = th1 + r4 * (eta1 - del1) + (th3 / eta3 + r4 * a) * (gam1 - eta1) +
                   (th2 / gam2 + (th3 / eta3) * b + r4 * bracket) * (phi1 - gam1);
    out.reduction = (del1 - th1) + (1.0 - r4) * (eta1 - del1) +
                    ((del3 - th3) / eta3 + (1.0 - r4) * a) * (gam1 - eta1) +
                    ((del2 - th2) / gam2 + ((del3 - th3) / eta3) * b + (1.0 - r4) * bracket) * (phi1 - gam1);
    return out;
}

LinearParts p4_recursion(const SuccessiveCoefficients& c)
{
    const std::size_t k = c.k();
    const double total = c.group[0];
    std::vector<double> gap(k);
    for (std::size_t j = 1; j <= k; ++j) {
        double num = total - c.group[j];
        for (std::size_t i = 0; i + 1 < j; ++i) num -= c.early[j][i] * gap[i];
        gap[j - 1] = num / c.early[j][j - 1];
    }
    LinearParts out;
    out.initial = total;
    out.residual = c.full_group;
    for (std::size_t j = 0; j < k; ++j) out.residual += c.full_early[j] * gap[j];
    out.reduction = total - out.residual;
    return out;
}

LinearParts product_formula(Proposition p, const ProductCoefficients& c)
{
    const double th1 = c.outcome_group, th2 = c.outcome_early, th3 = c.outcome_target;
    const double b1 = c.target_group, b2 = c.target_early, a1 = c.early_group;
    LinearParts out;
    switch (p) {
    case Proposition::P1:
        out.residual = th1 + b1 * th3;
        out.reduction = a1 * th2 + a1 * b2 * th3;
        break;
    case Proposition::P2:
        out.residual = th1;
        out.reduction = b1 * th3;
        break;
    case Proposition::P3:
        out.residual = th1;
        out.reduction = a1 * th2 + b1 * th3 + a1 * b2 * th3;
        break;
    case Proposition::P4:
        out.residual = th1 + a1 * th2;
        out.reduction = b1 * th3 + a1 * b2 * th3;
        break;
    default:
        throw Error(ErrorKind::UnsupportedMode, std::string(to_string(p)) + " has no parametric form");
    }
    out.initial = out.residual + out.reduction;
    return out;
}

DecompositionEstimate decompose_successive_linear(const Dataset& d, const AnalysisSpec& spec)
{
    if (spec.bindings.early.size() != 1) {
        throw Error(ErrorKind::InvalidSpec, "single-measure successive models need exactly one EARLY column");
    }
    auto e = successive_estimate(d, spec, false);
    finish_estimate(e);
    return e;
}

DecompositionEstimate decompose_successive_multix(const Dataset& d, const AnalysisSpec& spec)
{
    if (spec.bindings.early.size() < 2) {
        throw Error(ErrorKind::InvalidSpec, "multi-measure successive models need at least two EARLY columns");
    }
    auto e = successive_estimate(d, spec, false);
    finish_estimate(e);
    return e;
}

DecompositionEstimate decompose_product_coefficients(const Dataset& d, const AnalysisSpec& spec)
{
    auto e = product_estimate(d, spec, false);
    finish_estimate(e);
    return e;
}

DecompositionEstimate decompose_logistic_rare(const Dataset& d, const AnalysisSpec& spec)
{
    const Dataset frame = analysis_frame(d, spec);
    require_binary_outcome(frame, spec.bindings.outcome);
    DecompositionEstimate e = spec.estimator == Estimator::Product ? product_estimate(d, spec, true)
                                                                   : successive_estimate(d, spec, true);
    const double prevalence = mean_of(frame.column(spec.bindings.outcome));
    e.metadata["outcome_prevalence"] = std::to_string(prevalence);
    if (prevalence > kRarePrevalence) {
        e.warnings.push_back("PrevalenceWarning: outcome prevalence " + std::to_string(prevalence) +
                             " exceeds 0.10; the odds-ratio approximation to risk ratios is degraded");
    }
    finish_estimate(e);
    return e;
}

}  // namespace disparity

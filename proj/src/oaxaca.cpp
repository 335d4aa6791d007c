#include "disparity/oaxaca.hpp"

#include <algorithm>

#include "disparity/design.hpp"
#include "disparity/error.hpp"

namespace disparity {

double ObResult::explained_for(const std::string& label) const
{
    for (const auto& t : explained_terms) {
        if (t.label == label) return t.value;
    }
    throw Error(ErrorKind::UnknownColumn, "no explained term for '" + label + "'");
}

namespace {

double group_mean(const Column& v, const Column& g, int r)
{
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (g[i] == static_cast<double>(r)) {
            s += v[i];
            ++n;
        }
    }
    if (n == 0) throw Error(ErrorKind::EmptyGroup, "no rows with R=" + std::to_string(r));
    return s / static_cast<double>(n);
}

Dataset group_rows(const Dataset& d, const std::string& group, int r)
{
    std::vector<std::size_t> rows;
    const Column& g = d.column(group);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == static_cast<double>(r)) rows.push_back(i);
    }
    if (rows.empty()) throw Error(ErrorKind::EmptyGroup, "no rows with R=" + std::to_string(r));
    return d.take_rows(rows);
}

CoefficientSet stratum_fit(const Dataset& g, const std::string& outcome, const std::vector<std::string>& regs, int r)
{
    DesignBuilder db(g.n_rows());
    for (const auto& v : regs) db.add(v, g.column(v));
    try {
        return fit_ols(db.build(), to_vector(g.column(outcome)));
    } catch (const Error& e) {
        throw Error(e.kind(), "R=" + std::to_string(r) + " stratum: " + e.what());
    }
}

std::map<std::string, double> resolve_profile(const Dataset& frame, const std::string& group,
                                              const std::vector<std::string>& conditioning,
                                              const std::map<std::string, double>& overrides)
{
    std::map<std::string, double> profile;
    for (const auto& c : conditioning) {
        const auto it = overrides.find(c);
        profile[c] = it != overrides.end() ? it->second : group_mean(frame.column(c), frame.column(group), 0);
    }
    return profile;
}

struct PropositionSets {
    std::vector<std::string> explanatory;
    std::vector<std::string> conditioning;
    std::map<std::string, double> overrides;
};

PropositionSets proposition_sets(const Dataset& frame, const AnalysisSpec& spec)
{
    const auto& b = spec.bindings;
    PropositionSets s;
    switch (spec.proposition) {
    case Proposition::P1:
        s.explanatory = b.early;
        s.conditioning = b.covariates;
        break;
    case Proposition::P2:
        s.explanatory = {b.target};
        s.conditioning = b.early;
        s.conditioning.insert(s.conditioning.end(), b.covariates.begin(), b.covariates.end());
        for (const auto& x : b.early) {
            s.overrides[x] = spec.conditioning_value_x ? *spec.conditioning_value_x
                                                       : group_mean(frame.column(x), frame.column(b.group), 1);
        }
        break;
    case Proposition::P3:
    case Proposition::P4:
        s.explanatory = b.early;
        s.explanatory.push_back(b.target);
        s.conditioning = b.covariates;
        break;
    default:
        throw Error(ErrorKind::UnsupportedMode, "the Oaxaca-Blinder mapping covers P1-P4 only");
    }
    return s;
}

void require_ob_mode(const AnalysisSpec& spec)
{
    if (spec.bindings.confounder) {
        throw Error(ErrorKind::UnsupportedMode,
                    "Oaxaca-Blinder decompositions are not valid with a time-dependent confounder L; use the plug-in "
                    "estimator with P5-P7");
    }
    if (spec.family != OutcomeFamily::Continuous) {
        throw Error(ErrorKind::UnsupportedMode, "Oaxaca-Blinder mapping needs a CONTINUOUS outcome");
    }
}

DecompositionEstimate from_parts(const AnalysisSpec& spec, double initial, double residual, double reduction,
                                 std::size_t n, std::string method)
{
    DecompositionEstimate e;
    e.proposition = spec.proposition;
    e.estimator = Estimator::Successive;
    e.scale = Scale::Additive;
    e.method = std::move(method);
    e.initial = initial;
    e.residual = residual;
    e.reduction = reduction;
    e.n_used = n;
    return e;
}

}  // namespace

double conditional_mean(const Dataset& frame, const std::string& group, const std::string& v,
                        const std::vector<std::string>& conditioning, const std::map<std::string, double>& profile, int r)
{
    if (conditioning.empty()) return group_mean(frame.column(v), frame.column(group), r);
    DesignBuilder db(frame.n_rows());
    db.add(group, frame.column(group));
    for (const auto& c : conditioning) db.add(c, frame.column(c));
    const auto cs = fit_ols(db.build(), to_vector(frame.column(v)));
    double value = cs[kIntercept] + cs[group] * r;
    for (const auto& c : conditioning) value += cs[c] * profile.at(c);
    return value;
}

ObResult oaxaca_decompose(const Dataset& d, const std::string& outcome, const std::string& group,
                          const std::vector<std::string>& explanatory, const std::vector<std::string>& conditioning,
                          const ObOptions& opt)
{
    std::vector<std::string> cols{outcome, group};
    cols.insert(cols.end(), explanatory.begin(), explanatory.end());
    cols.insert(cols.end(), conditioning.begin(), conditioning.end());
    for (const auto& c : cols) {
        if (!d.has_column(c)) throw Error(ErrorKind::MissingColumn, "no column named '" + c + "'");
    }
    const Dataset frame = d.take_rows(complete_rows(d, cols));

    std::vector<std::string> regs = explanatory;
    regs.insert(regs.end(), conditioning.begin(), conditioning.end());
    const Dataset g1 = group_rows(frame, group, 1);
    const Dataset g0 = group_rows(frame, group, 0);

    ObResult res;
    res.mode = conditioning.empty() ? ObMode::Marginal : ObMode::Conditional;
    res.reference = opt.reference;
    res.fit1 = stratum_fit(g1, outcome, regs, 1);
    res.fit0 = stratum_fit(g0, outcome, regs, 0);
    res.profile = resolve_profile(frame, group, conditioning, opt.profile);

    const bool ref1 = opt.reference == ReferenceCoefficients::Group1;
    const double icpt = res.fit1[kIntercept] - res.fit0[kIntercept];
    res.unexplained_terms.push_back({std::string(kIntercept), icpt});
    res.unexplained = icpt;
    for (const auto& v : explanatory) {
        const double m1 = conditional_mean(frame, group, v, conditioning, res.profile, 1);
        const double m0 = conditional_mean(frame, group, v, conditioning, res.profile, 0);
        res.mean1[v] = m1;
        res.mean0[v] = m0;
        const double b1 = res.fit1[v], b0 = res.fit0[v];
        const double ex = (ref1 ? b1 : b0) * (m1 - m0);
        const double un = (b1 - b0) * (ref1 ? m0 : m1);
        res.explained_terms.push_back({v, ex});
        res.unexplained_terms.push_back({v, un});
        res.explained += ex;
        res.unexplained += un;
    }
    for (const auto& c : conditioning) {
        const double un = (res.fit1[c] - res.fit0[c]) * res.profile.at(c);
        res.unexplained_terms.push_back({c, un});
        res.unexplained += un;
    }
    res.total_gap = res.unexplained + res.explained;
    return res;
}

DecompositionEstimate proposition_via_oaxaca(const Dataset& d, const AnalysisSpec& spec)
{
    require_ob_mode(spec);
    const Dataset frame = analysis_frame(d, spec);
    const auto sets = proposition_sets(frame, spec);
    ObOptions opt;
    opt.profile = sets.overrides;
    const auto ob = oaxaca_decompose(frame, spec.bindings.outcome, spec.bindings.group, sets.explanatory,
                                     sets.conditioning, opt);

    double residual = ob.unexplained;
    double reduction = ob.explained;
    if (spec.proposition == Proposition::P4) {
        reduction = ob.explained_for(spec.bindings.target);
        residual = ob.total_gap - reduction;
    }
    auto e = from_parts(spec, ob.total_gap, residual, reduction, frame.n_rows(), "oaxaca_blinder");
    for (const auto& t : ob.explained_terms) e.coefficients["explained." + t.label] = t.value;
    for (const auto& t : ob.unexplained_terms) e.coefficients["unexplained." + t.label] = t.value;
    for (std::size_t j = 0; j < ob.fit1.labels.size(); ++j) {
        e.coefficients["group1_model." + ob.fit1.labels[j]] = ob.fit1.beta(static_cast<Eigen::Index>(j));
        e.coefficients["group0_model." + ob.fit0.labels[j]] = ob.fit0.beta(static_cast<Eigen::Index>(j));
    }
    for (const auto& [k, v] : ob.profile) e.metadata["profile." + k] = std::to_string(v);
    e.metadata["ob_mode"] = ob.mode == ObMode::Marginal ? "marginal" : "conditional";
    e.metadata["reference_coefficients"] = "group1";
    finish_estimate(e);
    return e;
}

DecompositionEstimate decompose_interaction_model(const Dataset& d, const AnalysisSpec& spec)
{
    require_ob_mode(spec);
    const Dataset frame = analysis_frame(d, spec);
    const auto sets = proposition_sets(frame, spec);
    const auto& r = spec.bindings.group;
    const auto profile = resolve_profile(frame, r, sets.conditioning, sets.overrides);

    DesignBuilder db(frame.n_rows());
    db.add(r, frame.column(r));
    for (const auto& v : sets.explanatory) db.add(v, frame.column(v));
    for (const auto& c : sets.conditioning) db.add(c, frame.column(c));
    for (const auto& v : sets.explanatory) db.add_product(r + ":" + v, frame.column(r), frame.column(v));
    for (const auto& c : sets.conditioning) db.add_product(r + ":" + c, frame.column(r), frame.column(c));
    const auto fit = fit_ols(db.build(), to_vector(frame.column(spec.bindings.outcome)));

    // Group-gap at the profile: R main effect plus each interaction at the
    // R=0 conditional mean (explanatory) or profile value (conditioning).
    double unexplained = fit[r];
    double explained_all = 0.0;
    double explained_target = 0.0;
    for (const auto& v : sets.explanatory) {
        const double m1 = conditional_mean(frame, r, v, sets.conditioning, profile, 1);
        const double m0 = conditional_mean(frame, r, v, sets.conditioning, profile, 0);
        unexplained += fit[r + ":" + v] * m0;
        const double ex = (fit[v] + fit[r + ":" + v]) * (m1 - m0);
        explained_all += ex;
        if (v == spec.bindings.target) explained_target = ex;
    }
    for (const auto& c : sets.conditioning) unexplained += fit[r + ":" + c] * profile.at(c);

    const double initial = unexplained + explained_all;
    double residual = unexplained;
    double reduction = explained_all;
    if (spec.proposition == Proposition::P4) {
        reduction = explained_target;
        residual = initial - reduction;
    }
    auto e = from_parts(spec, initial, residual, reduction, frame.n_rows(), "interaction_model");
    for (std::size_t j = 0; j < fit.labels.size(); ++j) {
        e.coefficients["interaction_model." + fit.labels[j]] = fit.beta(static_cast<Eigen::Index>(j));
    }
    finish_estimate(e);
    return e;
}

}  // namespace disparity

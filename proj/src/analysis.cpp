#include "disparity/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "disparity/error.hpp"
#include "disparity/inference.hpp"

namespace disparity {

std::string_view to_string(Proposition p)
{
    static constexpr std::string_view names[] = {"P1", "P2", "P3", "P4", "P5", "P6", "P7"};
    return names[static_cast<int>(p)];
}

std::string_view to_string(Estimator e)
{
    switch (e) {
    case Estimator::Successive: return "successive";
    case Estimator::Product: return "product";
    case Estimator::Plugin: return "plugin";
    }
    return "unknown";
}

std::string_view to_string(OutcomeFamily f)
{
    return f == OutcomeFamily::Continuous ? "continuous" : "rare_binary";
}

std::string_view to_string(Scale s) { return s == Scale::Additive ? "additive" : "ratio"; }

std::string_view to_string(StratumWeight w)
{
    switch (w) {
    case StratumWeight::Group1: return "group1";
    case StratumWeight::Group0: return "group0";
    case StratumWeight::Pooled: return "pooled";
    }
    return "unknown";
}

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

}  // namespace

std::optional<Proposition> parse_proposition(std::string_view s)
{
    const auto t = lower(s);
    for (int k = 0; k < 7; ++k) {
        const auto p = static_cast<Proposition>(k);
        if (t == lower(to_string(p)) || t == std::to_string(k + 1)) return p;
    }
    return std::nullopt;
}

std::optional<Estimator> parse_estimator(std::string_view s)
{
    const auto t = lower(s);
    for (auto e : {Estimator::Successive, Estimator::Product, Estimator::Plugin}) {
        if (t == to_string(e)) return e;
    }
    return std::nullopt;
}

std::optional<OutcomeFamily> parse_family(std::string_view s)
{
    const auto t = lower(s);
    if (t == "continuous") return OutcomeFamily::Continuous;
    if (t == "rare_binary" || t == "binary") return OutcomeFamily::RareBinary;
    return std::nullopt;
}

std::optional<StratumWeight> parse_stratum_weight(std::string_view s)
{
    const auto t = lower(s);
    for (auto w : {StratumWeight::Group1, StratumWeight::Group0, StratumWeight::Pooled}) {
        if (t == to_string(w)) return w;
    }
    return std::nullopt;
}

bool is_timedep(Proposition p)
{
    return p == Proposition::P5 || p == Proposition::P6 || p == Proposition::P7;
}

Proposition base_proposition(Proposition p)
{
    switch (p) {
    case Proposition::P5: return Proposition::P2;
    case Proposition::P6: return Proposition::P3;
    case Proposition::P7: return Proposition::P4;
    default: return p;
    }
}

Bindings Bindings::from_roles(const Dataset& d)
{
    Bindings b;
    if (auto y = d.single(Role::Outcome)) b.outcome = *y;
    if (auto r = d.single(Role::Group)) b.group = *r;
    b.covariates = d.role(Role::Covariate);
    for (const auto& c : d.role(Role::MissingIndicator)) b.covariates.push_back(c);
    b.early = d.role(Role::Early);
    if (auto m = d.single(Role::Target)) b.target = *m;
    if (auto l = d.single(Role::ConfounderL)) b.confounder = *l;
    return b;
}

std::vector<std::string> Bindings::all_columns() const
{
    std::vector<std::string> cols{outcome, group};
    cols.insert(cols.end(), covariates.begin(), covariates.end());
    cols.insert(cols.end(), early.begin(), early.end());
    if (!target.empty()) cols.push_back(target);
    if (confounder) cols.push_back(*confounder);
    return cols;
}

void AnalysisSpec::validate() const
{
    const auto prop = std::string(to_string(proposition));
    if (bindings.outcome.empty()) throw Error(ErrorKind::InvalidSpec, "no OUTCOME column bound");
    if (bindings.group.empty()) throw Error(ErrorKind::InvalidSpec, "no GROUP column bound");
    if (is_timedep(proposition)) {
        if (estimator != Estimator::Plugin || !bindings.confounder) {
            throw Error(ErrorKind::InvalidSpec,
                        prop + " requires estimator PLUGIN and a CONFOUNDER_L binding (got estimator " +
                            std::string(to_string(estimator)) + (bindings.confounder ? "" : ", no confounder") + ")");
        }
    }
    if (bindings.early.empty()) throw Error(ErrorKind::InvalidSpec, prop + " requires at least one EARLY column");
    const bool needs_target = proposition != Proposition::P1 || estimator == Estimator::Product;
    if (needs_target && bindings.target.empty()) {
        throw Error(ErrorKind::InvalidSpec, prop + " with estimator " + std::string(to_string(estimator)) +
                                                " requires a TARGET column");
    }
    if (estimator == Estimator::Product && bindings.early.size() != 1) {
        throw Error(ErrorKind::InvalidSpec, "estimator PRODUCT requires exactly one EARLY column and one TARGET column");
    }
    if (options.interactions && estimator == Estimator::Product) {
        throw Error(ErrorKind::InvalidSpec, "interactions are supported with estimator SUCCESSIVE only");
    }
    if (options.max_levels < 2) throw Error(ErrorKind::InvalidSpec, "max_levels must be at least 2");
    if (conditioning_value_x && !(proposition == Proposition::P2 || proposition == Proposition::P5)) {
        throw Error(ErrorKind::InvalidSpec, "conditioning_value_x applies to P2 and P5 only");
    }
    if (conditioning_value_x && bindings.early.size() != 1) {
        throw Error(ErrorKind::InvalidSpec, "conditioning_value_x needs exactly one EARLY column");
    }
}

Dataset analysis_frame(const Dataset& d, const AnalysisSpec& spec)
{
    auto cols = spec.bindings.all_columns();
    if (!(spec.estimator == Estimator::Plugin && is_timedep(spec.proposition)) && spec.bindings.confounder) {
        cols.pop_back();
    }
    if (spec.proposition == Proposition::P1 && spec.estimator != Estimator::Product && !spec.bindings.target.empty()) {
        // P1 never touches M; keep rows that only miss M.
        cols.erase(std::find(cols.begin(), cols.end(), spec.bindings.target));
    }
    for (const auto& c : cols) {
        if (!d.has_column(c)) throw Error(ErrorKind::MissingColumn, "bound column '" + c + "' is not in the dataset");
    }
    const auto rows = complete_rows(d, cols);
    const Dataset frame = d.take_rows(rows);
    const Column& r = frame.column(spec.bindings.group);
    std::size_t n1 = 0;
    for (double v : r) {
        if (v != 0.0 && v != 1.0) {
            throw Error(ErrorKind::NonBinaryGroup, "group column '" + spec.bindings.group + "' is not 0/1");
        }
        n1 += v == 1.0;
    }
    if (n1 == 0 || n1 == r.size()) {
        throw Error(ErrorKind::EmptyGroup, "analysis rows contain only one group (" + std::to_string(n1) + " of " +
                                               std::to_string(r.size()) + " in R=1)");
    }
    return frame;
}

void finish_estimate(DecompositionEstimate& e)
{
    try {
        e.proportion = proportion_reduced(e.initial, e.residual,
                                          e.scale == Scale::Additive ? ProportionScale::Additive : ProportionScale::Relative);
    } catch (const Error& err) {
        e.proportion = std::nan("");
        e.warnings.push_back(std::string(err.what()));
    }
}

}  // namespace disparity

#include "disparity/plugin.hpp"

#include <array>
#include <cmath>
#include <map>

#include "disparity/csv.hpp"
#include "disparity/design.hpp"
#include "disparity/error.hpp"
#include "disparity/regression.hpp"

namespace disparity {

namespace {

struct GroupCodes {
    std::vector<int> code;
    std::vector<std::vector<double>> values;
};

GroupCodes encode_group(const Dataset& frame, const std::vector<std::string>& cols, int max_levels)
{
    const std::size_t n = frame.n_rows();
    GroupCodes g;
    if (cols.empty()) {
        g.code.assign(n, 0);
        g.values.push_back({});
        return g;
    }
    for (const auto& c : cols) {
        const auto lv = levels_of(frame.column(c));
        if (static_cast<int>(lv.size()) > max_levels) {
            throw Error(ErrorKind::TooManyLevels, "column '" + c + "' has " + std::to_string(lv.size()) +
                                                      " distinct values (limit " + std::to_string(max_levels) +
                                                      "); discretize it first");
        }
    }
    std::map<std::vector<double>, int> index;
    std::vector<std::vector<double>> tuples(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& c : cols) tuples[i].push_back(frame.column(c)[i]);
        index.emplace(tuples[i], 0);
    }
    int k = 0;
    for (auto& [tuple, code] : index) {
        code = k++;
        g.values.push_back(tuple);
    }
    g.code.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.code[i] = index.at(tuples[i]);
    return g;
}

std::string tuple_text(const std::vector<double>& v)
{
    if (v.size() == 1) return format_number(v.front());
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s + ")";
}

}  // namespace

std::string StratumCodes::describe(int r_, int c_, int x_, int m_, int l_) const
{
    auto part = [](const char* name, int code, const std::vector<std::vector<double>>& vals) {
        if (code == kAny || vals.front().empty()) return std::string();
        return std::string(", ") + name + "=" + tuple_text(vals[static_cast<std::size_t>(code)]);
    };
    return "(r=" + std::to_string(r_) + part("c", c_, c_values) + part("x", x_, x_values) + part("m", m_, m_values) +
           part("l", l_, l_values) + ")";
}

StratumCodes encode_strata(const Dataset& frame, const Bindings& b, bool with_target, bool with_confounder,
                           int max_levels)
{
    StratumCodes s;
    const std::size_t n = frame.n_rows();
    const Column& r = frame.column(b.group);
    s.r.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.r[i] = r[i] == 1.0 ? 1 : 0;
    s.y = frame.column(b.outcome);

    auto c = encode_group(frame, b.covariates, max_levels);
    auto x = encode_group(frame, b.early, max_levels);
    auto m = encode_group(frame, with_target ? std::vector<std::string>{b.target} : std::vector<std::string>{}, max_levels);
    auto l = encode_group(frame,
                          with_confounder && b.confounder ? std::vector<std::string>{*b.confounder} : std::vector<std::string>{},
                          max_levels);
    s.c = std::move(c.code);
    s.x = std::move(x.code);
    s.m = std::move(m.code);
    s.l = std::move(l.code);
    s.c_values = std::move(c.values);
    s.x_values = std::move(x.values);
    s.m_values = std::move(m.values);
    s.l_values = std::move(l.values);
    s.nc = static_cast<int>(s.c_values.size());
    s.nx = static_cast<int>(s.x_values.size());
    s.nm = static_cast<int>(s.m_values.size());
    s.nl = static_cast<int>(s.l_values.size());
    return s;
}

std::uint64_t StratumTable::key(int r, int c, int x, int m, int l)
{
    std::uint64_t k = static_cast<std::uint64_t>(r + 1);
    for (int v : {c, x, m, l}) k = (k << 15) | static_cast<std::uint64_t>(v + 1);
    return k;
}

void StratumTable::insert(int r, int c, int x, int m, int l, double y)
{
    Cell& cell = cells_[key(r, c, x, m, l)];
    ++cell.count;
    cell.sum += y;
}

StratumTable::StratumTable(StratumCodes codes) : codes_(std::move(codes))
{
    for (int v : {codes_.nc, codes_.nx, codes_.nm, codes_.nl}) {
        if (v >= 0x7FFF) throw Error(ErrorKind::TooManyLevels, "too many joint strata");
    }
    for (std::size_t i = 0; i < codes_.size(); ++i) {
        const int r = codes_.r[i], c = codes_.c[i], x = codes_.x[i], m = codes_.m[i], l = codes_.l[i];
        const double y = codes_.y[i];
        insert(r, kAny, kAny, kAny, kAny, y);
        insert(r, c, kAny, kAny, kAny, y);
        insert(r, c, x, kAny, kAny, y);
        insert(r, c, x, m, kAny, y);
        insert(r, c, kAny, m, kAny, y);
        insert(r, c, x, kAny, l, y);
        insert(r, c, x, m, l, y);
    }
}

const StratumTable::Cell* StratumTable::find(int r, int c, int x, int m, int l) const
{
    const auto it = cells_.find(key(r, c, x, m, l));
    return it == cells_.end() ? nullptr : &it->second;
}

std::size_t StratumTable::count(int r, int c, int x, int m, int l) const
{
    const Cell* cell = find(r, c, x, m, l);
    return cell ? cell->count : 0;
}

double StratumTable::mean(int r, int c, int x, int m, int l) const
{
    const Cell* cell = find(r, c, x, m, l);
    if (!cell || cell->count == 0) {
        throw Error(ErrorKind::EmptyStratum, "no observations in cell " + codes_.describe(r, c, x, m, l) +
                                                 " whose outcome mean the standardization needs");
    }
    return cell->sum / static_cast<double>(cell->count);
}

double StratumTable::prob(int r, int c, int x, int m, int l, int r0, int c0, int x0, int m0, int l0) const
{
    const std::size_t den = count(r0, c0, x0, m0, l0);
    if (den == 0) {
        throw Error(ErrorKind::EmptyStratum, "no observations in conditioning cell " + codes_.describe(r0, c0, x0, m0, l0));
    }
    return static_cast<double>(count(r, c, x, m, l)) / static_cast<double>(den);
}

namespace {

struct TableSource {
    const StratumTable& t;

    double mean(int r, int c, int x = kAny, int m = kAny) const { return t.mean(r, c, x, m, kAny); }
    double mean_l(int r, int c, int x, int m, int l) const { return t.mean(r, c, x, m, l); }
    double px(int r, int x, int c) const { return t.prob(r, c, x, kAny, kAny, r, c, kAny, kAny, kAny); }
    double pm_x(int r, int m, int x, int c) const { return t.prob(r, c, x, m, kAny, r, c, x, kAny, kAny); }
    double pm(int r, int m, int c) const { return t.prob(r, c, kAny, m, kAny, r, c, kAny, kAny, kAny); }
    double pl(int r, int l, int x, int c) const { return t.prob(r, c, x, kAny, l, r, c, x, kAny, kAny); }
};

// Shared summation for every standardization, so plug-in estimates with and
// without a single-level confounder run through identical arithmetic.
template <class Source>
struct Standardizer {
    const Source& s;
    const StratumCodes& codes;
    bool timedep;

    double outcome(int c, int x, int m) const
    {
        if (!timedep) return s.mean(1, c, x, m);
        double acc = 0.0;
        for (int l = 0; l < codes.nl; ++l) {
            const double p = s.pl(1, l, x, c);
            if (p == 0.0) continue;
            acc += s.mean_l(1, c, x, m, l) * p;
        }
        return acc;
    }

    double given_x(int c, int x, int r_m) const
    {
        double acc = 0.0;
        for (int m = 0; m < codes.nm; ++m) {
            const double p = s.pm_x(r_m, m, x, c);
            if (p == 0.0) continue;
            acc += outcome(c, x, m) * p;
        }
        return acc;
    }

    // mu, group-1 mean, group-0 mean within stratum c.
    std::array<double, 3> stratum(Proposition p, int c, std::optional<int> x_anchor) const
    {
        double mu = 0.0;
        double e1 = s.mean(1, c);
        double e0 = s.mean(0, c);
        switch (p) {
        case Proposition::P1:
            for (int x = 0; x < codes.nx; ++x) {
                const double px = s.px(0, x, c);
                if (px == 0.0) continue;
                mu += s.mean(1, c, x) * px;
            }
            break;
        case Proposition::P2:
            if (x_anchor) {
                mu = given_x(c, *x_anchor, 0);
                e1 = s.mean(1, c, *x_anchor);
                e0 = s.mean(0, c, *x_anchor);
            } else {
                e1 = 0.0;
                e0 = 0.0;
                for (int x = 0; x < codes.nx; ++x) {
                    const double px = s.px(1, x, c);
                    if (px == 0.0) continue;
                    mu += given_x(c, x, 0) * px;
                    e1 += s.mean(1, c, x) * px;
                    e0 += s.mean(0, c, x) * px;
                }
            }
            break;
        case Proposition::P3:
            for (int x = 0; x < codes.nx; ++x) {
                const double px = s.px(0, x, c);
                if (px == 0.0) continue;
                mu += given_x(c, x, 0) * px;
            }
            break;
        case Proposition::P4:
            for (int x = 0; x < codes.nx; ++x) {
                const double px = s.px(1, x, c);
                if (px == 0.0) continue;
                double inner = 0.0;
                for (int m = 0; m < codes.nm; ++m) {
                    const double pm = s.pm(0, m, c);
                    if (pm == 0.0) continue;
                    inner += outcome(c, x, m) * pm;
                }
                mu += inner * px;
            }
            break;
        default:
            throw Error(ErrorKind::UnsupportedMode, "unexpected proposition");
        }
        return {mu, e1, e0};
    }
};

template <class Source>
PluginMeans standardize(const Source& src, const StratumTable& t, Proposition p, std::optional<int> x_anchor,
                        StratumWeight w)
{
    const auto& codes = t.codes();
    const Standardizer<Source> st{src, codes, is_timedep(p)};
    const Proposition base = base_proposition(p);
    const double n1 = static_cast<double>(t.count(1, kAny));
    const double n0 = static_cast<double>(t.count(0, kAny));

    PluginMeans out;
    for (int c = 0; c < codes.nc; ++c) {
        const double c1 = static_cast<double>(t.count(1, c));
        const double c0 = static_cast<double>(t.count(0, c));
        double wc = 0.0;
        switch (w) {
        case StratumWeight::Group1: wc = c1 / n1; break;
        case StratumWeight::Group0: wc = c0 / n0; break;
        case StratumWeight::Pooled: wc = (c0 + c1) / (n0 + n1); break;
        }
        if (wc == 0.0) continue;
        const auto [mu, e1, e0] = st.stratum(base, c, x_anchor);
        out.mu += wc * mu;
        out.group1 += wc * e1;
        out.group0 += wc * e0;
        ++out.strata_used;
    }
    return out;
}

std::optional<int> anchor_code(const StratumCodes& codes, const AnalysisSpec& spec)
{
    const Proposition base = base_proposition(spec.proposition);
    if (base != Proposition::P2 || !spec.conditioning_value_x) return std::nullopt;
    for (int k = 0; k < codes.nx; ++k) {
        if (codes.x_values[static_cast<std::size_t>(k)].front() == *spec.conditioning_value_x) return k;
    }
    throw Error(ErrorKind::EmptyStratum, "conditioning value x=" + format_number(*spec.conditioning_value_x) +
                                             " is not an observed level of '" + spec.bindings.early.front() + "'");
}

DecompositionEstimate assemble(const AnalysisSpec& spec, const PluginMeans& pm, std::size_t n, std::string method)
{
    DecompositionEstimate e;
    e.proposition = spec.proposition;
    e.estimator = Estimator::Plugin;
    e.method = std::move(method);
    e.n_used = n;
    if (spec.family == OutcomeFamily::RareBinary) {
        e.scale = Scale::Ratio;
        e.initial = pm.group1 / pm.group0;
        e.residual = pm.mu / pm.group0;
        e.reduction = pm.group1 / pm.mu;
    } else {
        e.scale = Scale::Additive;
        e.initial = pm.group1 - pm.group0;
        e.residual = pm.mu - pm.group0;
        e.reduction = pm.group1 - pm.mu;
    }
    e.coefficients["standardized.mu"] = pm.mu;
    e.coefficients["standardized.group1_mean"] = pm.group1;
    e.coefficients["standardized.group0_mean"] = pm.group0;
    e.metadata["stratum_weight"] = std::string(to_string(spec.options.stratum_weight));
    e.metadata["strata"] = std::to_string(pm.strata_used);
    if (base_proposition(spec.proposition) == Proposition::P2) {
        e.metadata["initial_definition"] = spec.conditioning_value_x
                                               ? "disparity within the conditioning stratum of the early measure"
                                               : "disparity conditional on early measures, averaged over the R=1 distribution";
    }
    finish_estimate(e);
    return e;
}

DecompositionEstimate plugin_impl(const Dataset& d, const AnalysisSpec& spec, bool timedep)
{
    const Dataset frame = analysis_frame(d, spec);
    const bool needs_m = base_proposition(spec.proposition) != Proposition::P1;
    const StratumTable table(encode_strata(frame, spec.bindings, needs_m, timedep, spec.options.max_levels));
    const PluginMeans pm = standardize(TableSource{table}, table, spec.proposition, anchor_code(table.codes(), spec),
                                       spec.options.stratum_weight);
    return assemble(spec, pm, frame.n_rows(), timedep ? "plugin_timedep" : "plugin");
}

// Fitted values of a saturated model, read back per cell.
class CellFits {
public:
    void put(std::uint64_t k, double v) { fits_.emplace(k, v); }
    std::optional<double> get(std::uint64_t k) const
    {
        const auto it = fits_.find(k);
        if (it == fits_.end()) return std::nullopt;
        return it->second;
    }

private:
    std::map<std::uint64_t, double> fits_;
};

std::uint64_t cell_key(int a, int b = kAny, int c = kAny, int d = kAny)
{
    std::uint64_t k = 0;
    for (int v : {a, b, c, d}) k = (k << 16) | static_cast<std::uint64_t>(v + 1);
    return k;
}

Column as_column(const std::vector<int>& v) { return Column(v.begin(), v.end()); }

// OLS of `response` on full-factorial dummies of `factors`; fitted values
// stored under the row's factor codes.
CellFits saturated_fit(const Column& response, const std::vector<const std::vector<int>*>& factors)
{
    const std::size_t n = response.size();
    std::vector<std::pair<std::string, Column>> fs;
    for (std::size_t j = 0; j < factors.size(); ++j) fs.emplace_back("f" + std::to_string(j), as_column(*factors[j]));
    DesignBuilder db(n);
    db.add_factorial(fs);
    const DesignMatrix x = db.build();
    const auto cs = fit_ols(x, to_vector(response));
    const Eigen::VectorXd fitted = x.x * cs.beta;
    CellFits out;
    for (std::size_t i = 0; i < n; ++i) {
        int k[4] = {kAny, kAny, kAny, kAny};
        for (std::size_t j = 0; j < factors.size(); ++j) k[j] = (*factors[j])[i];
        out.put(cell_key(k[0], k[1], k[2], k[3]), fitted(static_cast<Eigen::Index>(i)));
    }
    return out;
}

struct SaturatedSource {
    const StratumCodes& codes;
    CellFits y_rc, y_rcx, y_rcxm;
    std::vector<CellFits> x_rc;    // per x level: P(x|r,c)
    std::vector<CellFits> m_rcx;   // per m level: P(m|r,c,x)
    std::vector<CellFits> m_rc;    // per m level: P(m|r,c)

    static double need(const std::optional<double>& v, const StratumCodes& codes, int r, int c, int x, int m)
    {
        if (!v) {
            throw Error(ErrorKind::EmptyStratum, "saturated model has no support in cell " + codes.describe(r, c, x, m, kAny));
        }
        return *v;
    }
    static double prob(const std::optional<double>& v)
    {
        // Unsupported cells carry zero probability; round-off below 1e-12 too.
        if (!v || std::abs(*v) < 1e-12) return 0.0;
        return *v;
    }

    double mean(int r, int c, int x = kAny, int m = kAny) const
    {
        if (x == kAny) return need(y_rc.get(cell_key(r, c)), codes, r, c, x, m);
        if (m == kAny) return need(y_rcx.get(cell_key(r, c, x)), codes, r, c, x, m);
        return need(y_rcxm.get(cell_key(r, c, x, m)), codes, r, c, x, m);
    }
    double mean_l(int, int, int, int, int) const
    {
        throw Error(ErrorKind::UnsupportedMode, "saturated route does not handle a confounder");
    }
    double px(int r, int x, int c) const { return prob(x_rc[static_cast<std::size_t>(x)].get(cell_key(r, c))); }
    double pm_x(int r, int m, int x, int c) const { return prob(m_rcx[static_cast<std::size_t>(m)].get(cell_key(r, c, x))); }
    double pm(int r, int m, int c) const { return prob(m_rc[static_cast<std::size_t>(m)].get(cell_key(r, c))); }
    double pl(int, int, int, int) const { return 1.0; }
};

Column indicator(const std::vector<int>& codes, int level)
{
    Column out(codes.size());
    for (std::size_t i = 0; i < codes.size(); ++i) out[i] = codes[i] == level ? 1.0 : 0.0;
    return out;
}

}  // namespace

PluginMeans plugin_means(const StratumTable& t, Proposition p, std::optional<int> x_code, StratumWeight w)
{
    return standardize(TableSource{t}, t, p, x_code, w);
}

DecompositionEstimate plugin_mu(const Dataset& d, const AnalysisSpec& spec)
{
    if (is_timedep(spec.proposition)) return plugin_mu_timedep(d, spec);
    return plugin_impl(d, spec, false);
}

DecompositionEstimate plugin_mu_timedep(const Dataset& d, const AnalysisSpec& spec)
{
    if (!is_timedep(spec.proposition)) {
        throw Error(ErrorKind::InvalidSpec, "time-dependent plug-in handles P5, P6 and P7 only");
    }
    if (!spec.bindings.confounder) throw Error(ErrorKind::InvalidSpec, "P5-P7 require a CONFOUNDER_L binding");
    return plugin_impl(d, spec, true);
}

DecompositionEstimate decompose_saturated_gformula(const Dataset& d, const AnalysisSpec& spec)
{
    if (is_timedep(spec.proposition)) {
        throw Error(ErrorKind::UnsupportedMode, "saturated route covers P1-P4 only");
    }
    const Dataset frame = analysis_frame(d, spec);
    const bool needs_m = spec.proposition != Proposition::P1;
    const StratumTable table(encode_strata(frame, spec.bindings, needs_m, false, spec.options.max_levels));
    const StratumCodes& k = table.codes();

    SaturatedSource src{k, {}, {}, {}, {}, {}, {}};
    src.y_rc = saturated_fit(k.y, {&k.r, &k.c});
    src.y_rcx = saturated_fit(k.y, {&k.r, &k.c, &k.x});
    for (int x = 0; x < k.nx; ++x) src.x_rc.push_back(saturated_fit(indicator(k.x, x), {&k.r, &k.c}));
    if (needs_m) {
        src.y_rcxm = saturated_fit(k.y, {&k.r, &k.c, &k.x, &k.m});
        for (int m = 0; m < k.nm; ++m) {
            src.m_rcx.push_back(saturated_fit(indicator(k.m, m), {&k.r, &k.c, &k.x}));
            src.m_rc.push_back(saturated_fit(indicator(k.m, m), {&k.r, &k.c}));
        }
    }
    const PluginMeans pm =
        standardize(src, table, spec.proposition, anchor_code(k, spec), spec.options.stratum_weight);
    auto e = assemble(spec, pm, frame.n_rows(), "saturated_gformula");
    e.estimator = Estimator::Successive;
    return e;
}

}  // namespace disparity

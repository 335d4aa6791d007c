#include "disparity/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "disparity/error.hpp"
#include "disparity/oaxaca.hpp"
#include "disparity/parametric.hpp"
#include "disparity/plugin.hpp"
#include "disparity/synthetic.hpp"

namespace disparity {

EstimatorTable EstimatorTable::defaults()
{
    EstimatorTable t;
    t.successive = [](const Dataset& d, const AnalysisSpec& s) {
        return s.bindings.early.size() == 1 ? decompose_successive_linear(d, s) : decompose_successive_multix(d, s);
    };
    t.product = decompose_product_coefficients;
    t.plugin = [](const Dataset& d, const AnalysisSpec& s) {
        return is_timedep(s.proposition) ? plugin_mu_timedep(d, s) : plugin_mu(d, s);
    };
    t.saturated = decompose_saturated_gformula;
    t.oaxaca = proposition_via_oaxaca;
    t.interaction = decompose_interaction_model;
    return t;
}

double relative_gap(double a, double b)
{
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

namespace {

constexpr Proposition kBase[] = {Proposition::P1, Proposition::P2, Proposition::P3, Proposition::P4};

AnalysisSpec spec_for(const Dataset& d, Proposition p, Estimator e)
{
    AnalysisSpec s;
    s.proposition = p;
    s.estimator = e;
    s.bindings = Bindings::from_roles(d);
    return s;
}

struct Tracker {
    std::vector<IdentityCheck>& out;
    IdentityCheck cur;

    Tracker(std::vector<IdentityCheck>& o, std::string name, double tol) : out(o)
    {
        cur.name = std::move(name);
        cur.tolerance = tol;
    }
    void see(double dev) { cur.deviation = std::max(cur.deviation, std::isnan(dev) ? INFINITY : dev); }
    void fail() { cur.deviation = INFINITY; }
    ~Tracker()
    {
        cur.pass = cur.deviation <= cur.tolerance;
        out.push_back(cur);
    }
};

StructuralParams normal_params(int k)
{
    StructuralParams p;
    p.a1 = -0.6 + 0.1 * k;
    p.b1 = 0.4;
    p.b2 = 0.5 - 0.05 * k;
    p.t1 = -0.3;
    p.t2 = 0.7;
    p.t3 = 0.45 + 0.02 * k;
    p.with_c = true;
    p.ac = 0.3;
    p.bc = -0.2;
    p.tc = 0.25;
    return p;
}

StructuralParams discrete_params()
{
    StructuralParams p;
    p.bernoulli_xm = true;
    p.a0 = 0.35;
    p.a1 = 0.25;
    p.b0 = 0.2;
    p.b1 = 0.2;
    p.b2 = 0.3;
    p.t1 = 0.4;
    p.t2 = 0.6;
    p.t3 = 0.8;
    p.with_c = true;
    p.ac = 0.1;
    p.bc = 0.1;
    p.tc = -0.3;
    return p;
}

}  // namespace

std::vector<IdentityCheck> run_selfcheck(const EstimatorTable& table, std::uint64_t seed)
{
    std::vector<IdentityCheck> checks;
    std::vector<Dataset> normal;
    for (int k = 0; k < 5; ++k) normal.push_back(generate(normal_params(k), 500, seed + static_cast<std::uint64_t>(k)));
    const Dataset discrete = generate(discrete_params(), 2000, seed + 100);

    {
        Tracker t(checks, "nested_ols_omitted_variable", 1e-8);
        for (const auto& d : normal) {
            const Bindings b = Bindings::from_roles(d);
            const auto reduced = fit_model(d, b.outcome, {b.early[0]}, b, false);
            const auto full = fit_model(d, b.outcome, {b.early[0], b.target}, b, false);
            const auto aux = fit_model(d, b.target, {b.early[0]}, b, false);
            t.see(relative_gap(reduced[b.group], full[b.group] + full[b.target] * aux[b.group]));
        }
    }
    {
        Tracker t(checks, "additivity", 1e-10);
        for (const auto& d : normal) {
            for (auto p : kBase) {
                for (const auto* f : {&table.successive, &table.product, &table.oaxaca}) {
                    try {
                        const auto e = (*f)(d, spec_for(d, p, Estimator::Successive));
                        t.see(std::abs(e.residual + e.reduction - e.initial));
                    } catch (const Error&) {
                        t.fail();
                    }
                }
            }
        }
    }
    {
        Tracker t(checks, "successive_vs_product", 1e-8);
        for (const auto& d : normal) {
            for (auto p : kBase) {
                try {
                    const auto a = table.successive(d, spec_for(d, p, Estimator::Successive));
                    const auto b = table.product(d, spec_for(d, p, Estimator::Product));
                    t.see(relative_gap(a.residual, b.residual));
                    t.see(relative_gap(a.reduction, b.reduction));
                    t.see(relative_gap(a.initial, b.initial));
                } catch (const Error&) {
                    t.fail();
                }
            }
        }
    }
    {
        Tracker t(checks, "oaxaca_vs_interaction_model", 1e-8);
        for (const auto& d : normal) {
            for (auto p : kBase) {
                try {
                    const auto a = table.oaxaca(d, spec_for(d, p, Estimator::Successive));
                    const auto b = table.interaction(d, spec_for(d, p, Estimator::Successive));
                    t.see(relative_gap(a.residual, b.residual));
                    t.see(relative_gap(a.reduction, b.reduction));
                } catch (const Error&) {
                    t.fail();
                }
            }
        }
    }
    {
        Tracker t(checks, "plugin_vs_saturated_models", 1e-8);
        for (auto p : {Proposition::P1, Proposition::P2, Proposition::P3}) {
            try {
                const auto a = table.plugin(discrete, spec_for(discrete, p, Estimator::Plugin));
                const auto b = table.saturated(discrete, spec_for(discrete, p, Estimator::Plugin));
                t.see(std::abs(a.residual - b.residual));
                t.see(std::abs(a.reduction - b.reduction));
            } catch (const Error&) {
                t.fail();
            }
        }
    }
    {
        Tracker t(checks, "timedep_collapse_constant_confounder", 0.0);
        const Dataset with_l = discrete.with_column("l", Column(discrete.n_rows(), 1.0), Role::ConfounderL);
        const std::pair<Proposition, Proposition> pairs[] = {
            {Proposition::P5, Proposition::P2}, {Proposition::P6, Proposition::P3}, {Proposition::P7, Proposition::P4}};
        for (const auto& [td, base] : pairs) {
            try {
                const auto a = table.plugin(with_l, spec_for(with_l, td, Estimator::Plugin));
                const auto b = table.plugin(discrete, spec_for(discrete, base, Estimator::Plugin));
                t.see(std::abs(a.residual - b.residual));
                t.see(std::abs(a.reduction - b.reduction));
            } catch (const Error&) {
                t.fail();
            }
        }
    }
    {
        Tracker t(checks, "multi_early_expansion_vs_recursion", 1e-8);
        StructuralParams p = normal_params(1);
        p.extra_early = {{0.3, 0.2, -0.4, 1.0}, {-0.2, 0.35, 0.5, 1.5}};
        for (int k = 0; k < 3; ++k) {
            const Dataset d = generate(p, 500, seed + 200 + static_cast<std::uint64_t>(k));
            const Bindings b = Bindings::from_roles(d);
            SuccessiveCoefficients c;
            for (std::size_t j = 0; j <= 3; ++j) {
                std::vector<std::string> regs(b.early.begin(), b.early.begin() + static_cast<long>(j));
                const auto cs = fit_model(d, b.outcome, regs, b, false);
                c.group.push_back(cs[b.group]);
                std::vector<double> xs;
                for (const auto& x : regs) xs.push_back(cs[x]);
                c.early.push_back(xs);
            }
            auto regs = b.early;
            regs.push_back(b.target);
            const auto full = fit_model(d, b.outcome, regs, b, false);
            c.full_group = full[b.group];
            for (const auto& x : b.early) c.full_early.push_back(full[x]);
            c.has_full = true;
            const auto a = p4_three_early_expansion(c);
            const auto r = p4_recursion(c);
            t.see(relative_gap(a.residual, r.residual));
            t.see(relative_gap(a.reduction, r.reduction));
        }
    }
    return checks;
}

bool all_pass(const std::vector<IdentityCheck>& checks)
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

std::string format_selfcheck(const std::vector<IdentityCheck>& checks)
{
    std::ostringstream out;
    for (const auto& c : checks) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-4s %-40s max deviation %.3e (tolerance %.1e)\n", c.pass ? "ok" : "FAIL",
                      c.name.c_str(), c.deviation, c.tolerance);
        out << buf;
    }
    out << (all_pass(checks) ? "all identities hold\n" : "identity violations found\n");
    return out.str();
}

}  // namespace disparity

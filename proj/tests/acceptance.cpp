// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"

#include "disparity/config.hpp"
#include "disparity/engine.hpp"
#include "disparity/inference.hpp"
#include "disparity/oaxaca.hpp"
#include "disparity/parametric.hpp"
#include "disparity/plugin.hpp"
#include "disparity/preprocess.hpp"
#include "disparity/report.hpp"

using namespace disparity;
using fixture::kBase;
using fixture::rel;
using fixture::spec;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double unit(std::uint64_t k, int slot)
{
    std::uint64_t z = (k + 7) * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(slot) * 0xD1B54A32D192ED03ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
}

/// Bernoulli-mode setting whose success probabilities stay inside [0, 1].
StructuralParams random_discrete(std::uint64_t k, bool with_l)
{
    StructuralParams p;
    p.bernoulli_xm = true;
    p.p_r = 0.4 + 0.1 * unit(k, 0);
    p.a0 = 0.45 + 0.1 * unit(k, 1);
    p.a1 = 0.2 * unit(k, 2);
    p.ac = 0.1 * unit(k, 3);
    p.b0 = 0.45;
    p.b1 = 0.1 * unit(k, 4);
    p.b2 = 0.15 * unit(k, 5);
    p.bc = 0.1 * unit(k, 6);
    p.t1 = unit(k, 7);
    p.t2 = unit(k, 8);
    p.t3 = unit(k, 9);
    p.tc = unit(k, 10);
    p.with_c = true;
    if (with_l) {
        p.with_l = true;
        p.c0 = 0.4;
        p.c1 = 0.1 * unit(k, 11);
        p.c2 = 0.15 * unit(k, 12);
        p.bl = 0.1 * unit(k, 13);
        p.tl = unit(k, 14);
    }
    return p;
}

// 1 --------------------------------------------------------------------------
Verdict additivity()
{
    const auto t0 = Clock::now();
    double worst_add = 0.0, worst_ratio = 0.0;
    int estimates = 0;
    auto see_add = [&](const DecompositionEstimate& e) {
        worst_add = std::max(worst_add, std::abs(e.residual + e.reduction - e.initial));
        ++estimates;
    };
    auto see_ratio = [&](const DecompositionEstimate& e) {
        worst_ratio = std::max(worst_ratio, std::abs(e.residual * e.reduction / e.initial - 1.0));
        ++estimates;
    };
    for (std::uint64_t k = 0; k < 50; ++k) {
        StructuralParams np = fixture::random_params(k);
        if (k % 5 == 0) np.extra_early = {{0.3 * unit(k, 20), 0.2, 0.3 * unit(k, 21), 1.0}, {0.2, -0.1, 0.25, 1.0}};
        const Dataset dn = generate(np, 500, k);
        for (auto p : kBase) {
            see_add(decompose(dn, spec(dn, p)));
            if (np.extra_early.empty()) see_add(decompose(dn, spec(dn, p, Estimator::Product)));
            AnalysisSpec ob = spec(dn, p);
            ob.options.interactions = true;
            see_add(decompose(dn, ob));
            see_add(decompose_interaction_model(dn, spec(dn, p)));
        }

        const Dataset dd = generate(random_discrete(k, true), 4000, k);
        for (int p = 0; p < 7; ++p) see_add(decompose(dd, spec(dd, static_cast<Proposition>(p), Estimator::Plugin)));
        for (auto p : kBase) see_add(decompose_saturated_gformula(dd, spec(dd, p, Estimator::Plugin)));

        StructuralParams bp = fixture::random_params(k);
        bp.binary_y = true;
        bp.prevalence = 0.05;
        const Dataset db = generate(bp, 2000, k);
        StructuralParams dp = random_discrete(k, false);
        dp.binary_y = true;
        dp.prevalence = 0.05;
        const Dataset dbd = generate(dp, 4000, k);
        for (auto p : kBase) {
            see_ratio(decompose(db, spec(db, p, Estimator::Successive, OutcomeFamily::RareBinary)));
            see_ratio(decompose(db, spec(db, p, Estimator::Product, OutcomeFamily::RareBinary)));
            see_ratio(decompose(dbd, spec(dbd, p, Estimator::Plugin, OutcomeFamily::RareBinary)));
        }
    }
    const double secs = seconds_since(t0);
    return {worst_add <= 1e-10 && worst_ratio <= 1e-10 && secs < 10.0,
            std::to_string(estimates) + " estimates; max additive gap " + fmt(worst_add) + ", max ratio gap " +
                fmt(worst_ratio) + ", " + fmt(secs) + " s"};
}

// 2 --------------------------------------------------------------------------
Verdict successive_vs_product()
{
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const Dataset d = generate(fixture::random_params(k + 1000), 500, k + 1000);
        for (auto p : kBase) {
            const auto a = decompose_successive_linear(d, spec(d, p));
            const auto b = decompose_product_coefficients(d, spec(d, p, Estimator::Product));
            worst = std::max({worst, rel(a.initial, b.initial), rel(a.residual, b.residual), rel(a.reduction, b.reduction)});
        }
    }
    return {worst <= 1e-8, "50 datasets x P1-P4; max relative gap " + fmt(worst)};
}

// 3 --------------------------------------------------------------------------
Verdict plugin_oracle()
{
    double worst_enum = 0.0, worst_sat = 0.0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        const Dataset d = generate(random_discrete(k + 300, false), 2000, k + 300);
        for (int kind = 1; kind <= 3; ++kind) {
            const auto p = kBase[kind - 1];
            const auto e = plugin_mu(d, spec(d, p, Estimator::Plugin));
            worst_enum = std::max(worst_enum, std::abs(e.coefficients.at("standardized.mu") - fixture::oracle_mu(d, kind, false)));
            const auto s = decompose_saturated_gformula(d, spec(d, p, Estimator::Plugin));
            worst_sat = std::max({worst_sat, rel(e.residual, s.residual), rel(e.reduction, s.reduction)});
        }
    }
    return {worst_enum <= 1e-12 && worst_sat <= 1e-8,
            "20 datasets x P1-P3; max |plugin - enumeration| " + fmt(worst_enum) + ", max relative gap to saturated " +
                fmt(worst_sat)};
}

// 4 --------------------------------------------------------------------------
Verdict timedep_collapse()
{
    int mismatches = 0, compared = 0;
    for (std::uint64_t k = 0; k < 20; ++k) {
        Dataset d = generate(random_discrete(k + 400, true), 2000, k + 400);
        d = d.with_column("l", Column(d.n_rows(), 0.0));
        const std::pair<Proposition, Proposition> pairs[] = {
            {Proposition::P5, Proposition::P2}, {Proposition::P6, Proposition::P3}, {Proposition::P7, Proposition::P4}};
        for (const auto& [td, base] : pairs) {
            const auto a = plugin_mu_timedep(d, spec(d, td, Estimator::Plugin));
            const auto b = plugin_mu(d, spec(d, base, Estimator::Plugin));
            ++compared;
            if (a.initial != b.initial || a.residual != b.residual || a.reduction != b.reduction) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(compared) + " pairs compared bitwise; " + std::to_string(mismatches) + " differ"};
}

// 5 --------------------------------------------------------------------------
Verdict oaxaca_equivalence()
{
    double worst = 0.0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const Dataset d = generate(fixture::random_params(k + 500), 500, k + 500);
        for (auto p : kBase) {
            const auto a = proposition_via_oaxaca(d, spec(d, p));
            const auto b = decompose_interaction_model(d, spec(d, p));
            worst = std::max({worst, rel(a.initial, b.initial), rel(a.residual, b.residual), rel(a.reduction, b.reduction)});
        }
    }
    return {worst <= 1e-8, "50 datasets x P1-P4; max relative gap " + fmt(worst)};
}

// 6 --------------------------------------------------------------------------
Verdict oracle_recovery()
{
    const auto t0 = Clock::now();
    constexpr int kSeeds = 20;
    constexpr std::size_t kN = 100000;
    struct Setting {
        StructuralParams params;
        bool discrete;
    };
    std::vector<Setting> settings;
    for (std::uint64_t k = 0; k < 5; ++k) settings.push_back({fixture::random_params(600 + k), false});
    for (std::uint64_t k = 0; k < 5; ++k) settings.push_back({random_discrete(700 + k, false), true});

    const std::vector<std::string> families{"successive", "product", "oaxaca", "plugin", "saturated"};
    // reductions[setting][family][proposition] -> one value per seed
    using Draws = std::map<std::string, std::array<std::vector<double>, 4>>;
    std::vector<Draws> draws(settings.size());

    auto one = [&](std::size_t s, int seed) {
        const Dataset d = generate(settings[s].params, kN, 10000 + 100 * s + static_cast<std::uint64_t>(seed));
        std::map<std::string, std::array<double, 4>> out;
        for (int p = 0; p < 4; ++p) {
            const auto prop = kBase[p];
            out["successive"][p] = decompose_successive_linear(d, spec(d, prop)).reduction;
            out["product"][p] = decompose_product_coefficients(d, spec(d, prop, Estimator::Product)).reduction;
            out["oaxaca"][p] = proposition_via_oaxaca(d, spec(d, prop)).reduction;
            if (settings[s].discrete) {
                out["plugin"][p] = plugin_mu(d, spec(d, prop, Estimator::Plugin)).reduction;
                out["saturated"][p] = decompose_saturated_gformula(d, spec(d, prop, Estimator::Plugin)).reduction;
            }
        }
        return out;
    };
    std::vector<std::pair<std::size_t, std::future<std::map<std::string, std::array<double, 4>>>>> jobs;
    for (std::size_t s = 0; s < settings.size(); ++s)
        for (int seed = 0; seed < kSeeds; ++seed) jobs.emplace_back(s, std::async(std::launch::async, one, s, seed));
    for (auto& [s, f] : jobs) {
        for (const auto& [fam, vals] : f.get())
            for (int p = 0; p < 4; ++p) draws[s][fam][p].push_back(vals[p]);
    }

    int checks = 0, misses = 0;
    double worst_z = 0.0;
    std::string where;
    for (std::size_t s = 0; s < settings.size(); ++s) {
        for (const auto& [fam, per_prop] : draws[s]) {
            for (int p = 0; p < 4; ++p) {
                const auto& v = per_prop[p];
                const double truth = true_values(settings[s].params, kBase[p]).reduction;
                double mean = 0.0, ss = 0.0;
                for (double x : v) mean += x / kSeeds;
                for (double x : v) ss += (x - mean) * (x - mean);
                const double se = std::sqrt(ss / (kSeeds - 1)) / std::sqrt(double(kSeeds));
                const double z = std::abs(mean - truth) / se;
                ++checks;
                if (!(z <= 3.0)) ++misses;
                if (z > worst_z) {
                    worst_z = z;
                    where = "setting " + std::to_string(s) + " " + fam + " P" + std::to_string(p + 1);
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {misses == 0 && secs < 300.0,
            std::to_string(checks) + " (setting, family, proposition) cells; " + std::to_string(misses) +
                " outside 3 MC SE; largest |bias|/SE " + fmt(worst_z) + " at " + where + "; " + fmt(secs) + " s"};
}

// 7 --------------------------------------------------------------------------
Verdict rare_binary()
{
    StructuralParams p;
    p.a1 = 0.5;
    p.b1 = 0.3;
    p.b2 = 0.4;
    p.t1 = 0.4;
    p.t2 = 0.3;
    p.t3 = 0.5;
    p.binary_y = true;
    p.prevalence = 0.01;
    const Dataset d = generate(p, 200000, 77);
    const auto succ = decompose(d, spec(d, Proposition::P4, Estimator::Successive, OutcomeFamily::RareBinary));

    const Dataset binned = d.with_column("x", quantile_bins(d.column("x"), 5)).with_column("m", quantile_bins(d.column("m"), 5));
    const auto plug = decompose(binned, spec(binned, Proposition::P4, Estimator::Plugin, OutcomeFamily::RareBinary));
    const double gap = rel(succ.residual, plug.residual);

    p.prevalence = 0.2;
    const Dataset common = generate(p, 20000, 78);
    const auto warned = decompose(common, spec(common, Proposition::P4, Estimator::Successive, OutcomeFamily::RareBinary));
    bool fired = false;
    for (const auto& w : warned.warnings) fired = fired || w.find("PrevalenceWarning") != std::string::npos;
    bool quiet = true;
    for (const auto& w : succ.warnings) quiet = quiet && w.find("PrevalenceWarning") == std::string::npos;

    return {gap <= 0.10 && fired && quiet, "P4 residual ratio successive " + fmt(succ.residual) + " vs plug-in " +
                                               fmt(plug.residual) + " (relative gap " + fmt(gap) +
                                               "); warning at 20% " + (fired ? "fired" : "missing") +
                                               ", at 1% " + (quiet ? "silent" : "fired")};
}

// 8 --------------------------------------------------------------------------
Verdict published_arithmetic()
{
    struct Row {
        const char* what;
        double initial, residual;
        int percent;
        ProportionScale scale;
        bool required;
    };
    // Printed two-decimal initial/residual pairs with the printed % reduction;
    // incarceration is reported as odds ratios.
    constexpr auto add = ProportionScale::Additive;
    constexpr auto ratio = ProportionScale::Relative;
    const Row rows[] = {
        {"wages P1", -0.41, -0.30, 26, add, true},
        {"wages P2", -0.30, -0.11, 65, add, false},
        {"wages P3", -0.41, -0.11, 74, add, false},
        {"wages P4", -0.41, -0.14, 66, add, false},
        {"wages alt", -0.41, -0.13, 69, add, false},
        {"incarceration P1", 3.54, 2.39, 45, ratio, false},
        {"incarceration P2", 2.39, 1.49, 65, ratio, false},
        {"incarceration P3", 3.54, 1.49, 81, ratio, false},
        {"incarceration P4", 3.54, 1.86, 65, ratio, false},
        {"incarceration alt", 3.54, 1.76, 70, ratio, false},
        {"health P1", -0.14, -0.04, 75, add, false},
        {"health P2", -0.04, 0.05, 251, add, true},
        {"health P3", -0.14, 0.05, 137, add, false},
        {"health P4", -0.14, -0.02, 85, add, true},
        {"health alt", -0.14, 0.02, 112, add, false},
    };
    int ok = 0, required_ok = 0, required = 0;
    std::string bad;
    for (const auto& r : rows) {
        // Every (initial, residual) consistent with the two-decimal rounding.
        double lo = 1e300, hi = -1e300;
        for (double di : {-0.005, 0.005})
            for (double dr : {-0.005, 0.005}) {
                const double v = 100.0 * proportion_reduced(r.initial + di, r.residual + dr, r.scale);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        // The printed integer percent covers [percent - 0.5, percent + 0.5).
        const bool hit = hi >= r.percent - 0.5 && lo < r.percent + 0.5;
        required += r.required;
        required_ok += r.required && hit;
        if (hit) {
            ++ok;
        } else {
            bad += std::string(" ") + r.what + " (printed " + std::to_string(r.percent) + ", inputs allow " + fmt(lo) +
                   "-" + fmt(hi) + ")";
        }
    }
    const double health = proportion_reduced(-0.04, 0.05, ProportionScale::Additive);
    const bool above_one = std::isfinite(health) && health > 1.0;
    return {required_ok == required && above_one,
            std::to_string(required_ok) + "/" + std::to_string(required) + " required rows and " + std::to_string(ok) +
                "/15 printed rows reproduced within rounding" + (bad.empty() ? "" : "; inconsistent in print:" + bad) +
                "; proportion above 100% " +
                (above_one ? "representable (" + fmt(100 * health) + "% at printed values)" : "rejected")};
}

// 9 --------------------------------------------------------------------------
Verdict bootstrap_properties()
{
    const Dataset d = generate(fixture::random_params(900), 600, 900);
    RunConfig cfg;
    cfg.input = "in-memory";
    cfg.roles = d.roles();
    cfg.bootstrap_b = 200;
    cfg.options.seed = 4242;
    for (auto p : kBase) {
        RunEntry e;
        e.proposition = p;
        e.label = std::string(to_string(p));
        cfg.runs.push_back(e);
    }
    const bool identical = report_json(execute(cfg, d)) == report_json(execute(cfg, d));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> z(0.0, 2.0);
    Column y(10000);
    for (auto& v : y) v = z(rng);
    const Dataset sample({{"y", y}});
    const Statistic mean = [](const Dataset& s) {
        double acc = 0.0;
        for (double v : s.column("y")) acc += v;
        return std::vector<double>{acc / static_cast<double>(s.n_rows())};
    };
    const auto summary = bootstrap(sample, mean, {"mean"}, BootstrapOptions{});
    const double target = 2.0 / std::sqrt(10000.0);
    const double ratio = summary.quantities[0].se / target;
    const bool defaults = BootstrapOptions{}.replicates == 1000 && RunConfig{}.bootstrap_b == 1000 &&
                          AnalysisOptions{}.bootstrap_b == 1000 && summary.replicates == 1000;
    return {identical && std::abs(ratio - 1.0) <= 0.15 && defaults,
            std::string("reports ") + (identical ? "bit-identical" : "DIFFER") + "; SE / (sigma/sqrt n) = " + fmt(ratio) +
                "; default B " + (defaults ? "1000" : "not 1000")};
}

// 10 -------------------------------------------------------------------------
Verdict affine_invariance()
{
    double worst = 0.0;
    const std::vector<std::pair<const char*, Decomposer>> families{
        {"successive", decompose_successive_linear},
        {"product", decompose_product_coefficients},
        {"oaxaca", proposition_via_oaxaca},
        {"interaction", decompose_interaction_model}};
    for (std::uint64_t k = 0; k < 5; ++k) {
        const Dataset d = generate(fixture::random_params(950 + k), 800, 950 + k);
        for (const auto& [name, f] : families) {
            const auto base = f(d, spec(d, Proposition::P4));
            for (double a : {0.1, 10.0})
                for (double b : {-5.0, 7.0}) {
                    Column x = d.column("x");
                    for (auto& v : x) v = a * v + b;
                    const Dataset t = d.with_column("x", x);
                    const auto e = f(t, spec(t, Proposition::P4));
                    worst = std::max({worst, rel(e.residual, base.residual), rel(e.reduction, base.reduction)});
                }
        }
    }
    return {worst < 1e-8, "5 datasets x 4 families x 4 transforms; max relative change " + fmt(worst)};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"additivity", additivity},
        {"successive/product equivalence", successive_vs_product},
        {"plug-in oracle", plugin_oracle},
        {"time-dependent collapse", timedep_collapse},
        {"Oaxaca-Blinder equivalence", oaxaca_equivalence},
        {"oracle recovery", oracle_recovery},
        {"rare-binary approximation", rare_binary},
        {"published arithmetic", published_arithmetic},
        {"bootstrap", bootstrap_properties},
        {"P4 affine invariance", affine_invariance},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}

#include "disparity/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "disparity/engine.hpp"

namespace disparity {

using nlohmann::ordered_json;

Report execute(const RunConfig& cfg, const Dataset& d)
{
    Report rep;
    rep.input = cfg.input.generic_string();
    rep.n_rows = d.n_rows();
    for (const auto& entry : cfg.runs) {
        RunResult rr;
        rr.entry = entry;
        rr.spec = cfg.spec_for(entry);
        try {
            rr.estimate = decompose(d, rr.spec);
            rr.warnings = rr.estimate->warnings;
            if (cfg.bootstrap_b > 0) {
                try {
                    rr.bootstrap = bootstrap(d, rr.spec, *rr.estimate, decompose, cfg.bootstrap_b, cfg.options.seed);
                    if (rr.bootstrap->failed > 0) {
                        rr.warnings.push_back(std::to_string(rr.bootstrap->failed) + " of " +
                                              std::to_string(rr.bootstrap->replicates) +
                                              " bootstrap replicates failed and were excluded");
                    }
                } catch (const Error& e) {
                    rr.warnings.push_back(std::string("bootstrap unavailable: ") + e.what());
                }
            }
            if (rr.spec.estimator == Estimator::Plugin) {
                rr.warnings.push_back("C strata averaged with weights " +
                                      std::string(to_string(rr.spec.options.stratum_weight)));
            }
        } catch (const Error& e) {
            rr.failure = RunFailure{e.kind(), e.what()};
        }
        rep.runs.push_back(std::move(rr));
    }
    return rep;
}

namespace {

void put_number(ordered_json& obj, const std::string& key, double v, const std::string& reason)
{
    if (std::isfinite(v)) {
        obj[key] = v;
    } else {
        obj[key] = nullptr;
        obj[key + "_null_reason"] = reason;
    }
}

ordered_json quantity(const QuantitySummary& q)
{
    ordered_json o;
    put_number(o, "estimate", q.estimate, "undefined for the full sample");
    put_number(o, "se", q.se, "fewer than two usable replicates");
    put_number(o, "percentile_2_5", q.lower, "fewer than two usable replicates");
    put_number(o, "percentile_97_5", q.upper, "fewer than two usable replicates");
    o["replicates_used"] = q.replicates_used;
    return o;
}

ordered_json run_json(const RunResult& rr)
{
    ordered_json o;
    o["label"] = rr.entry.label;
    o["proposition"] = std::string(to_string(rr.spec.proposition));
    o["estimator"] = std::string(to_string(rr.spec.estimator));
    o["family"] = std::string(to_string(rr.spec.family));
    o["interactions"] = rr.spec.options.interactions;
    if (rr.spec.conditioning_value_x) {
        o["conditioning_value_x"] = *rr.spec.conditioning_value_x;
    } else {
        o["conditioning_value_x"] = nullptr;
    }
    o["status"] = rr.failure ? "error" : "ok";
    if (rr.failure) {
        o["error"] = {{"kind", std::string(to_string(rr.failure->kind))}, {"message", rr.failure->message}};
    } else {
        o["error"] = nullptr;
    }

    if (rr.estimate) {
        const auto& e = *rr.estimate;
        ordered_json est;
        est["method"] = e.method;
        est["scale"] = std::string(to_string(e.scale));
        put_number(est, "initial", e.initial, "not computable");
        put_number(est, "residual", e.residual, "not computable");
        put_number(est, "reduction", e.reduction, "not computable");
        put_number(est, "proportion_reduced", e.proportion, "initial disparity is degenerate");
        est["n_used"] = e.n_used;
        o["estimate"] = est;
        ordered_json coef = ordered_json::object();
        for (const auto& [k, v] : e.coefficients) put_number(coef, k, v, "not finite");
        o["coefficients"] = coef;
        ordered_json meta = ordered_json::object();
        for (const auto& [k, v] : e.metadata) meta[k] = v;
        o["metadata"] = meta;
    } else {
        o["estimate"] = nullptr;
        o["coefficients"] = ordered_json::object();
        o["metadata"] = ordered_json::object();
    }

    if (rr.bootstrap) {
        const auto& b = *rr.bootstrap;
        ordered_json bs;
        bs["B"] = b.replicates;
        bs["seed"] = b.seed;
        bs["stratified"] = b.stratified;
        bs["initial"] = quantity(b.initial);
        bs["residual"] = quantity(b.residual);
        bs["reduction"] = quantity(b.reduction);
        bs["proportion_reduced"] = quantity(b.proportion);
        bs["failed"] = b.failed;
        ordered_json reasons = ordered_json::object();
        for (const auto& [k, v] : b.failure_reasons) reasons[k] = v;
        bs["failure_reasons"] = reasons;
        bs["intervals"] = "percentile (reported in addition to standard errors)";
        o["bootstrap"] = bs;
    } else {
        o["bootstrap"] = nullptr;
    }
    o["warnings"] = rr.warnings;
    return o;
}

std::string fixed(double v, int digits)
{
    if (!std::isfinite(v)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string report_json(const Report& r)
{
    ordered_json root;
    root["schema"] = "disparity-report/1";
    root["input"] = r.input;
    root["n_rows"] = r.n_rows;
    root["runs"] = ordered_json::array();
    for (const auto& rr : r.runs) root["runs"].push_back(run_json(rr));
    return root.dump(2) + "\n";
}

std::string report_table(const Report& r)
{
    std::vector<std::string> header{""};
    std::vector<std::string> init{"Initial disparity"}, resid{"Residual disparity"}, pct{"% reduction"};
    for (const auto& rr : r.runs) {
        header.push_back(rr.entry.label);
        if (rr.estimate) {
            init.push_back(fixed(rr.estimate->initial, 3));
            resid.push_back(fixed(rr.estimate->residual, 3));
            pct.push_back(std::isfinite(rr.estimate->proportion)
                              ? std::to_string(static_cast<long long>(std::llround(100.0 * rr.estimate->proportion)))
                              : "NA");
        } else {
            init.push_back("error");
            resid.push_back("error");
            pct.push_back("error");
        }
    }
    std::vector<std::vector<std::string>> rows{header, init, resid, pct};
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto pad = std::string(width[j] - row[j].size(), ' ');
            out << (j ? "  " + pad + row[j] : row[j] + pad);
        }
        out << '\n';
    }
    for (const auto& rr : r.runs) {
        if (rr.failure) out << rr.entry.label << ": " << rr.failure->message << '\n';
        for (const auto& w : rr.warnings) out << rr.entry.label << ": " << w << '\n';
    }
    return out.str();
}

}  // namespace disparity

#include "disparity/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "disparity/csv.hpp"
#include "disparity/error.hpp"
#include "disparity/preprocess.hpp"

namespace disparity {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& msg)
{
    const auto mark = node.Mark();
    const std::string where = mark.line >= 0 ? "line " + std::to_string(mark.line + 1) + ": " : "";
    throw Error(ErrorKind::Config, where + msg);
}

void allow_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where)
{
    if (!node.IsMap()) fail(node, where + " must be a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail(kv.first, "unknown key '" + key + "' in " + where + " (expected one of: " + list + ")");
        }
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& what)
{
    if (!node.IsScalar()) fail(node, what + " must be a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, "cannot read " + what + " from '" + node.Scalar() + "'");
    }
}

std::vector<std::string> names(const YAML::Node& node, const std::string& what)
{
    std::vector<std::string> out;
    if (node.IsScalar()) {
        out.push_back(node.as<std::string>());
    } else if (node.IsSequence()) {
        for (const auto& n : node) out.push_back(scalar<std::string>(n, what));
    } else {
        fail(node, what + " must be a column name or a list of names");
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

template <class F>
void each_step(const YAML::Node& node, const std::string& what, F&& f)
{
    if (node.IsMap()) {
        f(node);
    } else if (node.IsSequence()) {
        for (const auto& n : node) f(n);
    } else {
        fail(node, what + " must be a mapping or a list of mappings");
    }
}

void parse_roles(const YAML::Node& node, RunConfig& cfg)
{
    allow_keys(node, {"outcome", "group", "covariates", "early", "target", "confounder"}, "roles");
    const std::pair<const char*, Role> keys[] = {{"outcome", Role::Outcome},     {"group", Role::Group},
                                                 {"covariates", Role::Covariate}, {"early", Role::Early},
                                                 {"target", Role::Target},        {"confounder", Role::ConfounderL}};
    for (const auto& [key, role] : keys) {
        if (node[key]) cfg.roles[role] = names(node[key], std::string("roles.") + key);
    }
    for (const char* single : {"outcome", "group", "target", "confounder"}) {
        if (node[single] && !node[single].IsScalar()) fail(node[single], std::string("roles.") + single + " takes one column");
    }
    if (!node["outcome"]) fail(node, "roles.outcome is required");
    if (!node["group"]) fail(node, "roles.group is required");
}

void parse_preprocess(const YAML::Node& node, RunConfig& cfg)
{
    allow_keys(node, {"missing_indicators", "pca", "discretize"}, "preprocess");
    if (const auto mi = node["missing_indicators"]) {
        each_step(mi, "preprocess.missing_indicators", [&](const YAML::Node& s) {
            allow_keys(s, {"columns", "fill"}, "missing_indicators step");
            if (!s["columns"]) fail(s, "missing_indicators step needs 'columns'");
            MissingIndicatorStep step;
            step.columns = names(s["columns"], "columns");
            if (s["fill"]) step.fill = scalar<double>(s["fill"], "fill");
            cfg.missing_indicators.push_back(std::move(step));
        });
    }
    if (const auto pca = node["pca"]) {
        each_step(pca, "preprocess.pca", [&](const YAML::Node& s) {
            allow_keys(s, {"columns", "output", "role"}, "pca step");
            if (!s["columns"] || !s["output"]) fail(s, "pca step needs 'columns' and 'output'");
            PcaStep step;
            step.columns = names(s["columns"], "columns");
            step.output = scalar<std::string>(s["output"], "output");
            if (s["role"]) {
                const auto r = parse_role(scalar<std::string>(s["role"], "role"));
                if (!r) fail(s["role"], "unknown role '" + s["role"].Scalar() + "'");
                step.role = r;
            }
            cfg.pca.push_back(std::move(step));
        });
    }
    if (const auto disc = node["discretize"]) {
        each_step(disc, "preprocess.discretize", [&](const YAML::Node& s) {
            allow_keys(s, {"columns", "bins"}, "discretize step");
            if (!s["columns"]) fail(s, "discretize step needs 'columns'");
            DiscretizeStep step;
            step.columns = names(s["columns"], "columns");
            if (s["bins"]) step.bins = scalar<int>(s["bins"], "bins");
            if (step.bins < 1) fail(s["bins"], "bins must be positive");
            cfg.discretize.push_back(std::move(step));
        });
    }
}

OutcomeFamily family_of(const YAML::Node& n)
{
    const auto f = parse_family(scalar<std::string>(n, "family"));
    if (!f) fail(n, "unknown outcome family '" + n.Scalar() + "' (continuous or rare_binary)");
    return *f;
}

}  // namespace

RoleMap RunConfig::effective_roles() const
{
    RoleMap roles = this->roles;
    for (const auto& step : missing_indicators) {
        for (const auto& c : step.columns) roles[Role::MissingIndicator].push_back(c + "_miss");
    }
    for (const auto& step : pca) {
        if (step.role) roles[*step.role].push_back(step.output);
    }
    return roles;
}

AnalysisSpec RunConfig::spec_for(const RunEntry& run) const
{
    AnalysisSpec spec;
    spec.proposition = run.proposition;
    spec.estimator = run.estimator;
    spec.family = run.family;
    spec.conditioning_value_x = run.conditioning_value_x;
    spec.options = options;
    spec.options.interactions = run.interactions;
    spec.options.bootstrap_b = bootstrap_b;
    const RoleMap roles = effective_roles();
    auto single = [&](Role r) {
        const auto it = roles.find(r);
        return it == roles.end() || it->second.empty() ? std::string() : it->second.front();
    };
    auto list = [&](Role r) {
        const auto it = roles.find(r);
        return it == roles.end() ? std::vector<std::string>{} : it->second;
    };
    spec.bindings.outcome = single(Role::Outcome);
    spec.bindings.group = single(Role::Group);
    spec.bindings.covariates = list(Role::Covariate);
    for (const auto& c : list(Role::MissingIndicator)) spec.bindings.covariates.push_back(c);
    spec.bindings.early = list(Role::Early);
    spec.bindings.target = single(Role::Target);
    if (auto l = single(Role::ConfounderL); !l.empty()) spec.bindings.confounder = l;
    return spec;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorKind::Config, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root || root.IsNull()) throw Error(ErrorKind::Config, "config is empty");
    allow_keys(root, {"input", "roles", "preprocess", "family", "options", "bootstrap", "runs", "output"}, "config");

    RunConfig cfg;
    if (!root["input"]) fail(root, "'input' (CSV path) is required");
    cfg.input = resolve(base_dir, scalar<std::string>(root["input"], "input"));
    if (!root["roles"]) fail(root, "'roles' is required");
    parse_roles(root["roles"], cfg);
    if (root["preprocess"]) parse_preprocess(root["preprocess"], cfg);

    OutcomeFamily family = OutcomeFamily::Continuous;
    if (root["family"]) family = family_of(root["family"]);

    if (const auto o = root["options"]) {
        allow_keys(o, {"interactions", "stratum_weight", "max_levels"}, "options");
        if (o["interactions"]) cfg.options.interactions = scalar<bool>(o["interactions"], "interactions");
        if (o["stratum_weight"]) {
            const auto w = parse_stratum_weight(scalar<std::string>(o["stratum_weight"], "stratum_weight"));
            if (!w) fail(o["stratum_weight"], "stratum_weight must be group1, group0 or pooled");
            cfg.options.stratum_weight = *w;
        }
        if (o["max_levels"]) cfg.options.max_levels = scalar<int>(o["max_levels"], "max_levels");
    }
    if (const auto b = root["bootstrap"]) {
        allow_keys(b, {"B", "seed", "stratified"}, "bootstrap");
        if (b["B"]) cfg.bootstrap_b = scalar<int>(b["B"], "B");
        if (b["seed"]) cfg.options.seed = scalar<std::uint64_t>(b["seed"], "seed");
        if (b["stratified"]) cfg.options.stratified_bootstrap = scalar<bool>(b["stratified"], "stratified");
        if (cfg.bootstrap_b == 1 || cfg.bootstrap_b < 0) fail(b["B"], "B must be 0 (off) or at least 2");
    }
    cfg.options.bootstrap_b = cfg.bootstrap_b;

    const auto runs = root["runs"];
    if (!runs || !runs.IsSequence() || runs.size() == 0) fail(runs ? runs : root, "'runs' must be a non-empty list");
    for (const auto& r : runs) {
        allow_keys(r, {"proposition", "estimator", "family", "conditioning_value_x", "interactions", "label"}, "run");
        RunEntry run;
        run.line = r.Mark().line + 1;
        run.family = family;
        run.interactions = cfg.options.interactions;
        if (!r["proposition"]) fail(r, "run needs 'proposition'");
        const auto p = parse_proposition(scalar<std::string>(r["proposition"], "proposition"));
        if (!p) fail(r["proposition"], "unknown proposition '" + r["proposition"].Scalar() + "' (P1..P7)");
        run.proposition = *p;
        if (r["estimator"]) {
            const auto e = parse_estimator(scalar<std::string>(r["estimator"], "estimator"));
            if (!e) fail(r["estimator"], "unknown estimator '" + r["estimator"].Scalar() + "' (successive, product, plugin)");
            run.estimator = *e;
        }
        if (r["family"]) run.family = family_of(r["family"]);
        if (r["conditioning_value_x"]) run.conditioning_value_x = scalar<double>(r["conditioning_value_x"], "conditioning_value_x");
        if (r["interactions"]) run.interactions = scalar<bool>(r["interactions"], "interactions");
        run.label = r["label"] ? scalar<std::string>(r["label"], "label")
                               : std::string(to_string(run.proposition)) + " " + std::string(to_string(run.estimator));
        cfg.runs.push_back(std::move(run));
    }

    if (const auto out = root["output"]) {
        allow_keys(out, {"json", "table"}, "output");
        if (out["json"]) cfg.json_output = resolve(base_dir, scalar<std::string>(out["json"], "output.json"));
        if (out["table"]) cfg.table_output = resolve(base_dir, scalar<std::string>(out["table"], "output.table"));
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

void validate_config(const RunConfig& cfg)
{
    for (const auto& run : cfg.runs) {
        try {
            cfg.spec_for(run).validate();
        } catch (const Error& e) {
            throw Error(ErrorKind::Config, "line " + std::to_string(run.line) + ": run '" + run.label + "': " + e.what());
        }
    }
}

Dataset prepare_dataset(const RunConfig& cfg)
{
    Dataset d = load_csv(cfg.input, cfg.roles);
    for (const auto& step : cfg.missing_indicators) d = add_missing_indicators(d, step.columns, step.fill);
    for (const auto& step : cfg.pca) {
        auto pc = first_principal_component(d, step.columns);
        d = d.with_column(step.output, std::move(pc.scores), step.role);
    }
    for (const auto& step : cfg.discretize) {
        for (const auto& c : step.columns) {
            if (!d.has_column(c)) throw Error(ErrorKind::UnknownColumn, "cannot discretize unknown column '" + c + "'");
            d = d.with_column(c, quantile_bins(d.column(c), step.bins));
        }
    }
    return d.with_roles(cfg.effective_roles());
}

GenerateConfig parse_generate_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw Error(ErrorKind::Config, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root || !root.IsMap()) throw Error(ErrorKind::Config, "generator parameters must be a mapping");

    GenerateConfig g;
    auto& p = g.params;
    const std::pair<const char*, double*> reals[] = {
        {"p_r", &p.p_r},     {"a0", &p.a0},         {"a1", &p.a1},           {"ac", &p.ac},
        {"sigma_x", &p.sigma_x}, {"b0", &p.b0},     {"b1", &p.b1},           {"b2", &p.b2},
        {"bl", &p.bl},       {"bc", &p.bc},         {"sigma_m", &p.sigma_m}, {"t0", &p.t0},
        {"t1", &p.t1},       {"t2", &p.t2},         {"t3", &p.t3},           {"tl", &p.tl},
        {"tc", &p.tc},       {"sigma_y", &p.sigma_y}, {"c0", &p.c0},         {"c1", &p.c1},
        {"c2", &p.c2},       {"sigma_l", &p.sigma_l}, {"p_c", &p.p_c},       {"prevalence", &p.prevalence}};
    const std::pair<const char*, bool*> flags[] = {
        {"with_l", &p.with_l}, {"with_c", &p.with_c}, {"bernoulli_xm", &p.bernoulli_xm}, {"binary_y", &p.binary_y}};

    std::set<std::string> allowed{"n", "seed", "extra_early"};
    for (const auto& [k, _] : reals) allowed.insert(k);
    for (const auto& [k, _] : flags) allowed.insert(k);
    allow_keys(root, allowed, "generator parameters");

    for (const auto& [k, dst] : reals) {
        if (root[k]) *dst = scalar<double>(root[k], k);
    }
    for (const auto& [k, dst] : flags) {
        if (root[k]) *dst = scalar<bool>(root[k], k);
    }
    if (root["n"]) g.n = scalar<std::size_t>(root["n"], "n");
    if (root["seed"]) g.seed = scalar<std::uint64_t>(root["seed"], "seed");
    if (const auto ex = root["extra_early"]) {
        if (!ex.IsSequence()) fail(ex, "extra_early must be a list");
        for (const auto& e : ex) {
            allow_keys(e, {"a1", "b2", "t2", "sd"}, "extra_early entry");
            ExtraEarly x;
            if (e["a1"]) x.a1 = scalar<double>(e["a1"], "a1");
            if (e["b2"]) x.b2 = scalar<double>(e["b2"], "b2");
            if (e["t2"]) x.t2 = scalar<double>(e["t2"], "t2");
            if (e["sd"]) x.sd = scalar<double>(e["sd"], "sd");
            p.extra_early.push_back(x);
        }
    }
    try {
        p.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Config, e.what());
    }
    return g;
}

GenerateConfig load_generate_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open parameter file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_generate_config(ss.str());
}

}  // namespace disparity

#include "disparity/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "disparity/error.hpp"

namespace disparity {

double proportion_reduced(double initial, double residual, ProportionScale scale)
{
    if (scale == ProportionScale::Additive) {
        if (!(std::abs(initial) > 1e-12)) {
            throw Error(ErrorKind::DegenerateInitial, "initial disparity is zero; proportion reduced undefined");
        }
        return (initial - residual) / initial;
    }
    if (!(std::abs(initial - 1.0) > 1e-12)) {
        throw Error(ErrorKind::DegenerateInitial, "initial ratio is one; proportion reduced undefined");
    }
    return (initial - residual) / (initial - 1.0);
}

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Counter-based stream: draw k of replicate b depends only on (seed, b, k).
struct ReplicateStream {
    std::uint64_t key;
    std::uint64_t counter = 0;

    ReplicateStream(std::uint64_t seed, std::uint64_t replicate) : key(mix(seed ^ mix(replicate + kGamma))) {}

    std::size_t below(std::size_t n)
    {
        const std::uint64_t x = mix(key + (++counter) * kGamma);
        return static_cast<std::size_t>((static_cast<unsigned __int128>(x) * n) >> 64);
    }
};

double percentile(std::vector<double> v, double q)
{
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

QuantitySummary summarize(double estimate, const std::vector<double>& draws)
{
    QuantitySummary s;
    s.estimate = estimate;
    std::vector<double> ok;
    for (double v : draws) {
        if (std::isfinite(v)) ok.push_back(v);
    }
    s.replicates_used = static_cast<int>(ok.size());
    if (ok.size() < 2) {
        s.se = s.lower = s.upper = std::nan("");
        return s;
    }
    double mean = 0.0;
    for (double v : ok) mean += v;
    mean /= static_cast<double>(ok.size());
    double ss = 0.0;
    for (double v : ok) ss += (v - mean) * (v - mean);
    s.se = std::sqrt(ss / static_cast<double>(ok.size() - 1));
    s.lower = percentile(ok, 0.025);
    s.upper = percentile(ok, 0.975);
    return s;
}

struct ReplicateResults {
    std::vector<std::optional<std::vector<double>>> values;
    std::vector<std::string> failure;
};

ReplicateResults run_replicates(const Dataset& d, const Statistic& stat, const BootstrapOptions& opt)
{
    if (opt.replicates < 2) {
        throw Error(ErrorKind::InvalidB, "bootstrap needs at least 2 replicates (got " + std::to_string(opt.replicates) + ")");
    }
    std::vector<std::vector<std::size_t>> groups;
    if (!opt.stratify_by.empty()) {
        const Column& g = d.column(opt.stratify_by);
        groups.resize(2);
        for (std::size_t i = 0; i < g.size(); ++i) groups[g[i] == 1.0 ? 1 : 0].push_back(i);
    }

    const auto b = static_cast<std::size_t>(opt.replicates);
    ReplicateResults out;
    out.values.resize(b);
    out.failure.resize(b);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < b; k = next++) {
            const auto rows = groups.empty() ? resample_indices(d.n_rows(), opt.seed, k)
                                             : resample_indices(groups, opt.seed, k);
            try {
                out.values[k] = stat(d.take_rows(rows));
            } catch (const Error& e) {
                out.failure[k] = std::string(to_string(e.kind()));
            }
        }
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(b));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

void count_failures(const ReplicateResults& res, int replicates, int& failed, std::map<std::string, int>& reasons)
{
    failed = 0;
    for (const auto& f : res.failure) {
        if (!f.empty()) {
            ++failed;
            ++reasons[f];
        }
    }
    if (failed > kMaxFailureShare * replicates) {
        std::string why;
        for (const auto& [k, v] : reasons) why += (why.empty() ? "" : ", ") + k + " x" + std::to_string(v);
        throw Error(ErrorKind::TooManyFailures, std::to_string(failed) + " of " + std::to_string(replicates) +
                                                    " bootstrap replicates failed (" + why + ")");
    }
}

}  // namespace

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t replicate)
{
    ReplicateStream rng(seed, replicate);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = rng.below(n);
    return rows;
}

std::vector<std::size_t> resample_indices(const std::vector<std::vector<std::size_t>>& groups, std::uint64_t seed,
                                          std::uint64_t replicate)
{
    ReplicateStream rng(seed, replicate);
    std::vector<std::size_t> rows;
    for (const auto& g : groups) {
        for (std::size_t k = 0; k < g.size(); ++k) rows.push_back(g[rng.below(g.size())]);
    }
    return rows;
}

StatisticSummary bootstrap(const Dataset& d, const Statistic& stat, std::vector<std::string> names,
                           const BootstrapOptions& opt)
{
    const std::vector<double> full = stat(d);
    const auto res = run_replicates(d, stat, opt);
    StatisticSummary s;
    s.replicates = opt.replicates;
    s.seed = opt.seed;
    count_failures(res, opt.replicates, s.failed, s.failure_reasons);
    names.resize(full.size());
    s.names = std::move(names);
    for (std::size_t q = 0; q < full.size(); ++q) {
        std::vector<double> draws;
        for (const auto& v : res.values) {
            if (v) draws.push_back((*v)[q]);
        }
        s.quantities.push_back(summarize(full[q], draws));
    }
    return s;
}

BootstrapSummary bootstrap(const Dataset& d, const AnalysisSpec& spec, const DecompositionEstimate& full,
                           const Decomposer& decompose, int replicates, std::uint64_t seed)
{
    BootstrapOptions opt;
    opt.replicates = replicates;
    opt.seed = seed;
    if (spec.options.stratified_bootstrap) opt.stratify_by = spec.bindings.group;

    const Statistic stat = [&](const Dataset& sample) {
        const auto e = decompose(sample, spec);
        return std::vector<double>{e.initial, e.residual, e.reduction, e.proportion};
    };
    const auto res = run_replicates(d, stat, opt);

    BootstrapSummary s;
    s.replicates = replicates;
    s.seed = seed;
    s.stratified = spec.options.stratified_bootstrap;
    count_failures(res, replicates, s.failed, s.failure_reasons);
    auto column = [&](std::size_t q) {
        std::vector<double> draws;
        for (const auto& v : res.values) {
            if (v) draws.push_back((*v)[q]);
        }
        return draws;
    };
    s.initial = summarize(full.initial, column(0));
    s.residual = summarize(full.residual, column(1));
    s.reduction = summarize(full.reduction, column(2));
    s.proportion = summarize(full.proportion, column(3));
    return s;
}

}  // namespace disparity

#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"
#include "disparity/error.hpp"
#include "disparity/synthetic.hpp"

namespace fixture {

using namespace disparity;

inline AnalysisSpec spec(const Dataset& d, Proposition p, Estimator e = Estimator::Successive,
                         OutcomeFamily f = OutcomeFamily::Continuous)
{
    AnalysisSpec s;
    s.proposition = p;
    s.estimator = e;
    s.family = f;
    s.bindings = Bindings::from_roles(d);
    return s;
}

inline constexpr Proposition kBase[] = {Proposition::P1, Proposition::P2, Proposition::P3, Proposition::P4};

/// Residual of `v` after least-squares projection on [1, against...],
/// computed with a normal-equations solve independent of the library fit.
inline Column orthogonalize(const Dataset& d, const Column& v, const std::vector<std::string>& against)
{
    const auto n = static_cast<Eigen::Index>(d.n_rows());
    Eigen::MatrixXd a(n, static_cast<Eigen::Index>(against.size() + 1));
    a.col(0).setOnes();
    for (std::size_t j = 0; j < against.size(); ++j) {
        const Column& c = d.column(against[j]);
        for (Eigen::Index i = 0; i < n; ++i) a(i, static_cast<Eigen::Index>(j + 1)) = c[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(v.data(), n);
    const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * y);
    const Eigen::VectorXd r = y - a * beta;
    return Column(r.data(), r.data() + n);
}

/// A random linear structural setting for property tests.
inline StructuralParams random_params(std::uint64_t k, bool with_c = true)
{
    auto u = [&](int slot) {
        // Deterministic pseudo-uniform in [-1, 1].
        std::uint64_t z = (k + 1) * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(slot) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 31)) * 0x94D049BB133111EBULL;
        z ^= z >> 29;
        return static_cast<double>(z >> 11) / static_cast<double>(1ULL << 53) * 2.0 - 1.0;
    };
    StructuralParams p;
    p.p_r = 0.3 + 0.2 * (u(0) + 1.0);
    p.a0 = u(1);
    p.a1 = u(2);
    p.sigma_x = 0.5 + std::abs(u(3));
    p.b0 = u(4);
    p.b1 = u(5);
    p.b2 = u(6);
    p.sigma_m = 0.5 + std::abs(u(7));
    p.t0 = u(8);
    p.t1 = u(9);
    p.t2 = u(10);
    p.t3 = u(11);
    p.sigma_y = 0.5 + std::abs(u(12));
    p.with_c = with_c;
    p.ac = u(13);
    p.bc = u(14);
    p.tc = u(15);
    return p;
}

inline double rel(double a, double b)
{
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

inline ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;
}

}  // namespace fixture

#include "oracles.hpp"

namespace fixture {

/// Binary-coded rows for the brute-force standardization oracle.
inline std::vector<oracle::Row> rows_of(const disparity::Dataset& d)
{
    std::vector<oracle::Row> out(d.n_rows());
    auto col = [&](const char* n, std::size_t i) { return d.has_column(n) ? static_cast<int>(d.column(n)[i]) : 0; };
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        out[i] = {col("r", i), col("x", i), col("m", i), col("c", i), col("l", i), d.column("y")[i]};
    }
    return out;
}

/// Oracle mu aggregated over c with group-1 weights.
inline double oracle_mu(const disparity::Dataset& d, int kind, bool timedep)
{
    const auto rows = rows_of(d);
    double mu = 0.0;
    for (int c = 0; c <= 1; ++c) {
        const double w = oracle::share(rows, [&](const oracle::Row& o) { return o.c == c; },
                                       [](const oracle::Row& o) { return o.r == 1; });
        if (w == 0.0) continue;
        mu += w * oracle::standardized_mean(rows, kind, c, timedep);
    }
    return mu;
}

inline disparity::StructuralParams discrete_params(bool with_l = false)
{
    disparity::StructuralParams p;
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
    if (with_l) {
        p.with_l = true;
        p.c0 = 0.3;
        p.c1 = 0.2;
        p.c2 = 0.25;
        p.bl = 0.15;
        p.tl = 0.5;
    }
    return p;
}

}  // namespace fixture

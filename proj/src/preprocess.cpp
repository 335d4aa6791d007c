#include "disparity/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "disparity/error.hpp"

namespace disparity {

Dataset add_missing_indicators(const Dataset& d, std::span<const std::string> columns, double fill)
{
    Dataset out = d;
    for (const auto& name : columns) {
        if (!d.has_column(name)) throw Error(ErrorKind::UnknownColumn, "no column named '" + name + "'");
        Column values = d.column(name);
        Column flag(values.size(), 0.0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (is_missing(values[i])) {
                flag[i] = 1.0;
                values[i] = fill;
            }
        }
        out = out.with_column(name, std::move(values));
        out = out.with_column(name + "_miss", std::move(flag), Role::MissingIndicator);
    }
    return out;
}

Column standardize(const Column& v)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (double x : v) {
        if (!is_missing(x)) {
            sum += x;
            ++n;
        }
    }
    if (n < 2) throw Error(ErrorKind::ZeroVariance, "fewer than two observed values");
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) {
        if (!is_missing(x)) ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) throw Error(ErrorKind::ZeroVariance, "column has zero variance");
    Column out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = is_missing(v[i]) ? kMissing : (v[i] - mean) / sd;
    return out;
}

PrincipalComponent first_principal_component(const Dataset& d, std::span<const std::string> columns)
{
    if (columns.size() < 2) throw Error(ErrorKind::TooFewColumns, "need at least two columns");
    const auto n = static_cast<Eigen::Index>(d.n_rows());
    const auto k = static_cast<Eigen::Index>(columns.size());
    Eigen::MatrixXd z(n, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto& name = columns[static_cast<std::size_t>(j)];
        if (!d.has_column(name)) throw Error(ErrorKind::UnknownColumn, "no column named '" + name + "'");
        if (d.missing_count(name) > 0) {
            throw Error(ErrorKind::MissingValue, "column '" + name + "' has missing cells; add missing indicators first");
        }
        Column s;
        try {
            s = standardize(d.column(name));
        } catch (const Error&) {
            throw Error(ErrorKind::ZeroVariance, "column '" + name + "' has zero variance");
        }
        for (Eigen::Index i = 0; i < n; ++i) z(i, j) = s[static_cast<std::size_t>(i)];
    }

    const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // Eigenvalues come back in increasing order.
    Eigen::VectorXd load = eig.eigenvectors().col(k - 1);
    if (load(0) < 0.0) load = -load;

    PrincipalComponent pc;
    pc.eigenvalue = eig.eigenvalues()(k - 1);
    pc.loadings.assign(load.data(), load.data() + k);
    const Eigen::VectorXd scores = z * load;
    const double mean = scores.mean();
    pc.scores.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) pc.scores[static_cast<std::size_t>(i)] = scores(i) - mean;
    return pc;
}

Column quantile_bins(const Column& v, int bins)
{
    if (bins < 1) throw Error(ErrorKind::InvalidSpec, "bins must be positive");
    std::vector<double> sorted;
    for (double x : v) {
        if (!is_missing(x)) sorted.push_back(x);
    }
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty()) return Column(v.size(), kMissing);

    // Upper cut points at the k/bins quantiles (type 7).
    std::vector<double> cuts;
    for (int k = 1; k < bins; ++k) {
        const double h = static_cast<double>(sorted.size() - 1) * k / bins;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        cuts.push_back(sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
    }
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Column out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (is_missing(v[i])) {
            out[i] = kMissing;
            continue;
        }
        const auto pos = std::lower_bound(cuts.begin(), cuts.end(), v[i]) - cuts.begin();
        out[i] = static_cast<double>(pos);
    }
    return out;
}

}  // namespace disparity

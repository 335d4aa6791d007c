#pragma once

// Independent reference computations for the tests. None of these touch the
// library's own algorithms: plain loops, closed forms and brute force only.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 inverse3(const Mat3& a)
{
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    Mat3 inv{};
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    return inv;
}

/// OLS for y on [1, x1, x2] via (X'X)^{-1} X'y with an explicit 3x3 inverse.
inline std::array<double, 3> ols3(const std::vector<double>& x1, const std::vector<double>& x2,
                                  const std::vector<double>& y)
{
    Mat3 xtx{};
    std::array<double, 3> xty{};
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double row[3] = {1.0, x1[i], x2[i]};
        for (int a = 0; a < 3; ++a) {
            xty[a] += row[a] * y[i];
            for (int b = 0; b < 3; ++b) xtx[a][b] += row[a] * row[b];
        }
    }
    const Mat3 inv = inverse3(xtx);
    std::array<double, 3> beta{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) beta[a] += inv[a][b] * xty[b];
    }
    return beta;
}

/// Largest eigenvalue of a symmetric 3x3 matrix from its characteristic
/// polynomial (trigonometric form of the cubic roots) and its eigenvector
/// from a cross product of two rows of (A - lambda I).
inline std::pair<double, std::array<double, 3>> leading_eigen3(const Mat3& a)
{
    const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) +
                      2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
    }
    const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    const double lambda = q + 2.0 * p * std::cos(phi);

    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - (i == j ? lambda : 0.0);
    }
    std::array<double, 3> best{};
    double best_norm = -1.0;
    for (int u = 0; u < 3; ++u) {
        for (int w = u + 1; w < 3; ++w) {
            const std::array<double, 3> c{m[u][1] * m[w][2] - m[u][2] * m[w][1], m[u][2] * m[w][0] - m[u][0] * m[w][2],
                                          m[u][0] * m[w][1] - m[u][1] * m[w][0]};
            const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
            if (n > best_norm) {
                best_norm = n;
                best = {c[0] / n, c[1] / n, c[2] / n};
            }
        }
    }
    return {lambda, best};
}

/// log odds ratio of a 2x2 table: a,b = (y=1,y=0 | r=1); c,d = (y=1,y=0 | r=0).
inline double log_odds_ratio(double a, double b, double c, double d) { return std::log((a * d) / (b * c)); }

struct Row {
    int r;
    int x;
    int m;
    int c;
    int l;
    double y;
};

/// Mean of y over rows satisfying `keep`.
inline double mean_if(const std::vector<Row>& rows, const std::function<bool(const Row&)>& keep)
{
    double s = 0.0;
    int n = 0;
    for (const auto& row : rows) {
        if (keep(row)) {
            s += row.y;
            ++n;
        }
    }
    return s / n;
}

/// Share of rows in `given` that also satisfy `event`.
inline double share(const std::vector<Row>& rows, const std::function<bool(const Row&)>& event,
                    const std::function<bool(const Row&)>& given)
{
    int num = 0, den = 0;
    for (const auto& row : rows) {
        if (given(row)) {
            ++den;
            if (event(row)) ++num;
        }
    }
    return static_cast<double>(num) / den;
}

/// Brute-force standardized mean within one covariate level c for binary
/// x, m (and l when `timedep`), following the definitions term by term.
/// kind: 1 = equalize X, 2 = M given X averaged over P(x|R=1), 3 = X and M,
/// 4 = M marginally.
inline double standardized_mean(const std::vector<Row>& rows, int kind, int c, bool timedep)
{
    auto ey = [&](int x, int m) {
        if (!timedep) return mean_if(rows, [&](const Row& o) { return o.r == 1 && o.c == c && o.x == x && o.m == m; });
        double acc = 0.0;
        for (int l = 0; l <= 1; ++l) {
            const double pl = share(rows, [&](const Row& o) { return o.l == l; },
                                    [&](const Row& o) { return o.r == 1 && o.c == c && o.x == x; });
            if (pl == 0.0) continue;
            acc += mean_if(rows, [&](const Row& o) { return o.r == 1 && o.c == c && o.x == x && o.m == m && o.l == l; }) * pl;
        }
        return acc;
    };
    auto px = [&](int r, int x) {
        return share(rows, [&](const Row& o) { return o.x == x; }, [&](const Row& o) { return o.r == r && o.c == c; });
    };
    auto pmx = [&](int r, int m, int x) {
        return share(rows, [&](const Row& o) { return o.m == m; },
                     [&](const Row& o) { return o.r == r && o.c == c && o.x == x; });
    };
    auto pm = [&](int r, int m) {
        return share(rows, [&](const Row& o) { return o.m == m; }, [&](const Row& o) { return o.r == r && o.c == c; });
    };
    // Terms with zero weight are skipped: their cell means may be undefined.
    auto add = [](double& acc, double w, const std::function<double()>& v) {
        if (w != 0.0) acc += v() * w;
    };
    double mu = 0.0;
    for (int x = 0; x <= 1; ++x) {
        if (kind == 1) {
            add(mu, px(0, x), [&] { return mean_if(rows, [&](const Row& o) { return o.r == 1 && o.c == c && o.x == x; }); });
            continue;
        }
        for (int m = 0; m <= 1; ++m) {
            if (kind == 2) add(mu, pmx(0, m, x) * px(1, x), [&] { return ey(x, m); });
            if (kind == 3) add(mu, pmx(0, m, x) * px(0, x), [&] { return ey(x, m); });
            if (kind == 4) add(mu, pm(0, m) * px(1, x), [&] { return ey(x, m); });
        }
    }
    return mu;
}

}  // namespace oracle

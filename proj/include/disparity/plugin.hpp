#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "disparity/analysis.hpp"
#include "disparity/dataset.hpp"

namespace disparity {

/// Rows of the analysis frame mapped to integer stratum codes. Each of C, X
/// (jointly over all early columns), M and L gets codes 0..levels-1 in
/// lexicographic order of the observed value tuples.
struct StratumCodes {
    std::vector<int> r, c, x, m, l;
    std::vector<double> y;
    int nc = 1, nx = 1, nm = 1, nl = 1;
    std::vector<std::vector<double>> c_values, x_values, m_values, l_values;

    std::size_t size() const { return r.size(); }
    std::string describe(int r, int c, int x, int m, int l) const;
};

/// Throws TooManyLevels if any single column has more than `max_levels`
/// distinct values. Missing variable groups get a single level.
StratumCodes encode_strata(const Dataset& frame, const Bindings& b, bool with_target, bool with_confounder,
                           int max_levels);

inline constexpr int kAny = -1;

/// Counts and outcome sums per (r, c, x, m, l) cell, with kAny marking a
/// marginalized position.
class StratumTable {
public:
    explicit StratumTable(StratumCodes codes);

    const StratumCodes& codes() const { return codes_; }
    std::size_t count(int r, int c, int x = kAny, int m = kAny, int l = kAny) const;
    /// Outcome mean in the cell; throws EmptyStratum naming the cell.
    double mean(int r, int c, int x = kAny, int m = kAny, int l = kAny) const;
    /// P(numerator cell | denominator cell); throws EmptyStratum if the
    /// conditioning cell is empty.
    double prob(int r, int c, int x, int m, int l, int r0, int c0, int x0, int m0, int l0) const;

private:
    struct Cell {
        std::size_t count = 0;
        double sum = 0.0;
    };
    static std::uint64_t key(int r, int c, int x, int m, int l);
    void insert(int r, int c, int x, int m, int l, double y);
    const Cell* find(int r, int c, int x, int m, int l) const;

    StratumCodes codes_;
    std::unordered_map<std::uint64_t, Cell> cells_;
};

/// Aggregated standardized quantities behind one plug-in estimate.
struct PluginMeans {
    double mu = 0.0;
    double group1 = 0.0;
    double group0 = 0.0;
    int strata_used = 0;
};

/// Standardized mean for P1..P7 from an already built table. P5..P7 read the
/// confounder codes; P1..P4 ignore them. `x_code` anchors P2/P5.
PluginMeans plugin_means(const StratumTable& t, Proposition p, std::optional<int> x_code, StratumWeight w);

DecompositionEstimate plugin_mu(const Dataset& d, const AnalysisSpec& spec);
DecompositionEstimate plugin_mu_timedep(const Dataset& d, const AnalysisSpec& spec);

/// Regression g-formula with saturated models: full-factorial OLS for the
/// outcome means and linear-probability models for P(x|r,c), P(m|r,x,c),
/// P(m|r,c). P1..P4 only.
DecompositionEstimate decompose_saturated_gformula(const Dataset& d, const AnalysisSpec& spec);

}  // namespace disparity

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace disparity {

/// Column cells are doubles; a missing cell is stored as quiet NaN.
using Column = std::vector<double>;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class Role {
    Outcome,
    Group,
    Covariate,
    Early,
    Target,
    ConfounderL,
    MissingIndicator,
};

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

using RoleMap = std::map<Role, std::vector<std::string>>;

/// Immutable column-oriented table with declared column roles.
///
/// Construction validates that all columns share one length, that every
/// role refers to an existing column, and that the GROUP column (when
/// declared) is a complete 0/1 indicator with 1 marking the disadvantaged
/// group. All transformations return a new Dataset.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<std::pair<std::string, Column>> columns, RoleMap roles = {});

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_cols() const noexcept { return names_.size(); }

    const std::vector<std::string>& column_names() const noexcept { return names_; }
    bool has_column(std::string_view name) const;
    const Column& column(std::string_view name) const;

    const RoleMap& roles() const noexcept { return roles_; }
    const std::vector<std::string>& role(Role r) const;
    /// The single column bound to `r`, if exactly one is bound.
    std::optional<std::string> single(Role r) const;

    std::size_t missing_count(std::string_view name) const;

    Dataset with_column(std::string name, Column values, std::optional<Role> role = std::nullopt) const;
    Dataset with_roles(RoleMap roles) const;
    Dataset take_rows(std::span<const std::size_t> rows) const;

private:
    void validate() const;
    std::size_t index_of(std::string_view name) const;

    std::vector<std::string> names_;
    std::vector<Column> columns_;
    RoleMap roles_;
    std::size_t n_rows_ = 0;
};

/// Indices of rows that have no missing cell in any of `columns`.
std::vector<std::size_t> complete_rows(const Dataset& d, std::span<const std::string> columns);

}  // namespace disparity

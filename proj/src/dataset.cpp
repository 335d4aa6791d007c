#include "disparity/dataset.hpp"

#include <algorithm>

#include "disparity/error.hpp"

namespace disparity {

std::string_view to_string(Role role)
{
    switch (role) {
    case Role::Outcome: return "outcome";
    case Role::Group: return "group";
    case Role::Covariate: return "covariate";
    case Role::Early: return "early";
    case Role::Target: return "target";
    case Role::ConfounderL: return "confounder";
    case Role::MissingIndicator: return "missing_indicator";
    }
    return "unknown";
}

std::optional<Role> parse_role(std::string_view text)
{
    for (Role r : {Role::Outcome, Role::Group, Role::Covariate, Role::Early, Role::Target,
                   Role::ConfounderL, Role::MissingIndicator}) {
        if (to_string(r) == text) return r;
    }
    return std::nullopt;
}

Dataset::Dataset(std::vector<std::pair<std::string, Column>> columns, RoleMap roles)
    : roles_(std::move(roles))
{
    names_.reserve(columns.size());
    columns_.reserve(columns.size());
    for (auto& [name, values] : columns) {
        names_.push_back(std::move(name));
        columns_.push_back(std::move(values));
    }
    n_rows_ = columns_.empty() ? 0 : columns_.front().size();
    validate();
}

void Dataset::validate() const
{
    for (std::size_t j = 0; j < names_.size(); ++j) {
        if (columns_[j].size() != n_rows_) {
            throw Error(ErrorKind::InvalidSpec, "column '" + names_[j] + "' has " +
                                                    std::to_string(columns_[j].size()) +
                                                    " rows, expected " + std::to_string(n_rows_));
        }
        for (std::size_t k = 0; k < j; ++k) {
            if (names_[k] == names_[j]) {
                throw Error(ErrorKind::InvalidSpec, "duplicate column '" + names_[j] + "'");
            }
        }
    }
    for (const auto& [role, cols] : roles_) {
        for (const auto& c : cols) {
            if (!has_column(c)) {
                throw Error(ErrorKind::MissingColumn, "column '" + c + "' bound to role " +
                                                          std::string(to_string(role)) +
                                                          " does not exist");
            }
        }
    }
    if (auto it = roles_.find(Role::Group); it != roles_.end()) {
        if (it->second.size() != 1) {
            throw Error(ErrorKind::InvalidSpec, "exactly one group column must be bound");
        }
        const Column& g = column(it->second.front());
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(g[i] == 0.0 || g[i] == 1.0)) {
                throw Error(ErrorKind::NonBinaryGroup,
                            "group column '" + it->second.front() + "' has value " +
                                (is_missing(g[i]) ? std::string("<missing>") : std::to_string(g[i])) +
                                " at row " + std::to_string(i));
            }
        }
    }
}

std::size_t Dataset::index_of(std::string_view name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw Error(ErrorKind::MissingColumn, "no column named '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

bool Dataset::has_column(std::string_view name) const
{
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const Column& Dataset::column(std::string_view name) const { return columns_[index_of(name)]; }

const std::vector<std::string>& Dataset::role(Role r) const
{
    static const std::vector<std::string> empty;
    auto it = roles_.find(r);
    return it == roles_.end() ? empty : it->second;
}

std::optional<std::string> Dataset::single(Role r) const
{
    const auto& cols = role(r);
    if (cols.size() != 1) return std::nullopt;
    return cols.front();
}

std::size_t Dataset::missing_count(std::string_view name) const
{
    const Column& c = column(name);
    return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), is_missing));
}

Dataset Dataset::with_column(std::string name, Column values, std::optional<Role> role) const
{
    if (values.size() != n_rows_ && !names_.empty()) {
        throw Error(ErrorKind::InvalidSpec, "new column '" + name + "' has wrong length");
    }
    Dataset out = *this;
    if (out.names_.empty()) out.n_rows_ = values.size();
    auto it = std::find(out.names_.begin(), out.names_.end(), name);
    if (it != out.names_.end()) {
        out.columns_[static_cast<std::size_t>(it - out.names_.begin())] = std::move(values);
    } else {
        out.names_.push_back(name);
        out.columns_.push_back(std::move(values));
    }
    if (role) {
        auto& cols = out.roles_[*role];
        if (std::find(cols.begin(), cols.end(), name) == cols.end()) cols.push_back(name);
    }
    out.validate();
    return out;
}

Dataset Dataset::with_roles(RoleMap roles) const
{
    Dataset out = *this;
    out.roles_ = std::move(roles);
    out.validate();
    return out;
}

Dataset Dataset::take_rows(std::span<const std::size_t> rows) const
{
    Dataset out;
    out.names_ = names_;
    out.roles_ = roles_;
    out.n_rows_ = rows.size();
    out.columns_.resize(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        Column& dst = out.columns_[j];
        const Column& src = columns_[j];
        dst.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src.at(rows[i]);
    }
    return out;
}

std::vector<std::size_t> complete_rows(const Dataset& d, std::span<const std::string> columns)
{
    std::vector<const Column*> cols;
    cols.reserve(columns.size());
    for (const auto& c : columns) cols.push_back(&d.column(c));
    std::vector<std::size_t> rows;
    rows.reserve(d.n_rows());
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
        bool ok = true;
        for (const Column* c : cols) {
            if (is_missing((*c)[i])) {
                ok = false;
                break;
            }
        }
        if (ok) rows.push_back(i);
    }
    return rows;
}

}  // namespace disparity

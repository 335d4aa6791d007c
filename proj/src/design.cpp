#include "disparity/design.hpp"

#include <algorithm>

#include "disparity/csv.hpp"
#include "disparity/error.hpp"

namespace disparity {

Eigen::Index DesignMatrix::index_of(std::string_view label) const
{
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] == label) return static_cast<Eigen::Index>(j);
    }
    throw Error(ErrorKind::UnknownColumn, "design has no column '" + std::string(label) + "'");
}

Eigen::VectorXd to_vector(const Column& c)
{
    return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
}

std::vector<double> levels_of(const Column& c)
{
    std::vector<double> lv;
    for (double v : c) {
        if (!is_missing(v)) lv.push_back(v);
    }
    std::sort(lv.begin(), lv.end());
    lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    return lv;
}

DesignBuilder::DesignBuilder(std::size_t n_rows) : n_(n_rows)
{
    push(std::string(kIntercept), Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_rows)));
}

void DesignBuilder::push(std::string label, Eigen::VectorXd values)
{
    if (static_cast<std::size_t>(values.size()) != n_) {
        throw Error(ErrorKind::InvalidSpec, "design column '" + label + "' has the wrong length");
    }
    if (std::find(labels_.begin(), labels_.end(), label) != labels_.end()) {
        throw Error(ErrorKind::InvalidSpec, "duplicate design column '" + label + "'");
    }
    labels_.push_back(std::move(label));
    cols_.push_back(std::move(values));
}

DesignBuilder& DesignBuilder::add(std::string label, const Column& values)
{
    push(std::move(label), to_vector(values));
    return *this;
}

DesignBuilder& DesignBuilder::add(std::string label, const Eigen::VectorXd& values)
{
    push(std::move(label), values);
    return *this;
}

DesignBuilder& DesignBuilder::add_product(std::string label, const Column& a, const Column& b)
{
    push(std::move(label), to_vector(a).cwiseProduct(to_vector(b)));
    return *this;
}

DesignBuilder& DesignBuilder::add_factorial(const std::vector<std::pair<std::string, Column>>& factors)
{
    struct Dummy {
        std::string label;
        Eigen::VectorXd values;
    };
    // Non-reference level indicators per factor.
    std::vector<std::vector<Dummy>> per_factor;
    for (const auto& [name, col] : factors) {
        const auto lv = levels_of(col);
        std::vector<Dummy> ds;
        for (std::size_t k = 1; k < lv.size(); ++k) {
            Eigen::VectorXd v(static_cast<Eigen::Index>(col.size()));
            for (std::size_t i = 0; i < col.size(); ++i) v(static_cast<Eigen::Index>(i)) = col[i] == lv[k] ? 1.0 : 0.0;
            ds.push_back({name + "=" + format_number(lv[k]), std::move(v)});
        }
        per_factor.push_back(std::move(ds));
    }

    const std::size_t f = factors.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << f); ++mask) {
        std::vector<Dummy> acc{{"", Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_))}};
        for (std::size_t j = 0; j < f; ++j) {
            if (!(mask & (std::size_t{1} << j))) continue;
            std::vector<Dummy> next;
            for (const auto& a : acc) {
                for (const auto& d : per_factor[j]) {
                    next.push_back({a.label.empty() ? d.label : a.label + ":" + d.label,
                                    a.values.cwiseProduct(d.values)});
                }
            }
            acc = std::move(next);
        }
        for (auto& a : acc) {
            // Products over combinations never observed together are all zero.
            if (a.values.cwiseAbs().maxCoeff() == 0.0) continue;
            push(std::move(a.label), std::move(a.values));
        }
    }
    return *this;
}

DesignMatrix DesignBuilder::build() const
{
    DesignMatrix dm;
    dm.labels = labels_;
    dm.x.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(cols_.size()));
    for (std::size_t j = 0; j < cols_.size(); ++j) dm.x.col(static_cast<Eigen::Index>(j)) = cols_[j];
    return dm;
}

}  // namespace disparity

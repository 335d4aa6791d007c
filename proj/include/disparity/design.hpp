#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "disparity/dataset.hpp"

namespace disparity {

inline constexpr std::string_view kIntercept = "(Intercept)";

/// Dense design with an intercept in column 0 and unique column labels.
struct DesignMatrix {
    std::vector<std::string> labels;
    Eigen::MatrixXd x;

    Eigen::Index rows() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); }
    /// Column position of `label`; throws UnknownColumn.
    Eigen::Index index_of(std::string_view label) const;
};

class DesignBuilder {
public:
    explicit DesignBuilder(std::size_t n_rows);

    DesignBuilder& add(std::string label, const Column& values);
    DesignBuilder& add(std::string label, const Eigen::VectorXd& values);
    /// Elementwise product a*b, e.g. the R:X interaction.
    DesignBuilder& add_product(std::string label, const Column& a, const Column& b);

    /// Treatment-coded full-factorial dummies: for every nonempty subset of
    /// `factors` and every combination of non-reference levels, the product
    /// of the level indicators. Together with the intercept this spans every
    /// function of the joint level. All-zero products (level combinations
    /// that never occur) are skipped.
    DesignBuilder& add_factorial(const std::vector<std::pair<std::string, Column>>& factors);

    DesignMatrix build() const;

private:
    void push(std::string label, Eigen::VectorXd values);

    std::size_t n_;
    std::vector<std::string> labels_;
    std::vector<Eigen::VectorXd> cols_;
};

Eigen::VectorXd to_vector(const Column& c);

/// Sorted distinct observed values.
std::vector<double> levels_of(const Column& c);

}  // namespace disparity

#include "disparity/regression.hpp"

#include <algorithm>
#include <cmath>

#include "disparity/error.hpp"

namespace disparity {

bool CoefficientSet::has(std::string_view label) const
{
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

double CoefficientSet::operator[](std::string_view label) const
{
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j] == label) return beta(static_cast<Eigen::Index>(j));
    }
    throw Error(ErrorKind::UnknownColumn, "model has no coefficient '" + std::string(label) + "'");
}

namespace {

void require_shape(const DesignMatrix& x, const Eigen::VectorXd& y)
{
    if (x.rows() != y.size()) throw Error(ErrorKind::InvalidSpec, "design and response lengths differ");
    if (x.rows() <= x.cols()) {
        throw Error(ErrorKind::RankDeficient, "need more rows (" + std::to_string(x.rows()) +
                                                  ") than design columns (" + std::to_string(x.cols()) + ")");
    }
}

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const DesignMatrix& dm, const Eigen::MatrixXd& a)
{
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.rows(), a.cols());
    qr.setThreshold(kRankTolerance);
    qr.compute(a);
    const Eigen::Index rank = qr.rank();
    if (rank < a.cols()) {
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = rank; k < a.cols(); ++k) {
            if (!names.empty()) names += ", ";
            names += dm.labels[static_cast<std::size_t>(perm(k))];
        }
        throw Error(ErrorKind::RankDeficient, "design is rank deficient (rank " + std::to_string(rank) + " of " +
                                                  std::to_string(a.cols()) + "); dependent columns: " + names);
    }
    return qr;
}

double expit(double eta)
{
    return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// log(1 + exp(eta)) without overflow.
double softplus(double eta)
{
    return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double deviance(const Eigen::VectorXd& eta, const Eigen::VectorXd& y)
{
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) dev += softplus(eta(i)) - y(i) * eta(i);
    return 2.0 * dev;
}

}  // namespace

CoefficientSet fit_ols(const DesignMatrix& x, const Eigen::VectorXd& y)
{
    require_shape(x, y);
    const auto qr = checked_qr(x, x.x);
    CoefficientSet cs;
    cs.labels = x.labels;
    cs.beta = qr.solve(y);
    cs.n = static_cast<std::size_t>(x.rows());
    const Eigen::VectorXd resid = y - x.x * cs.beta;
    cs.residual_variance = resid.squaredNorm() / static_cast<double>(x.rows() - x.cols());
    return cs;
}

Eigen::VectorXd logistic_score(const DesignMatrix& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta)
{
    const Eigen::VectorXd eta = x.x * beta;
    Eigen::VectorXd r(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) r(i) = y(i) - expit(eta(i));
    return x.x.transpose() * r;
}

CoefficientSet fit_logistic(const DesignMatrix& x, const Eigen::VectorXd& y, const LogisticControl& ctl)
{
    require_shape(x, y);
    const double ybar = y.mean();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (!(y(i) == 0.0 || y(i) == 1.0)) throw Error(ErrorKind::InvalidSpec, "logistic response must be 0/1");
    }
    if (ybar == 0.0 || ybar == 1.0) {
        throw Error(ErrorKind::Separation, "response has a single class");
    }
    checked_qr(x, x.x);

    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    const Eigen::Index icpt = x.index_of(kIntercept);
    beta(icpt) = std::log(ybar / (1.0 - ybar));

    Eigen::VectorXd eta = x.x * beta;
    double dev = deviance(eta, y);
    double prev_step = 0.0;

    CoefficientSet cs;
    cs.labels = x.labels;
    cs.n = static_cast<std::size_t>(n);
    cs.converged = false;

    Eigen::MatrixXd wx(n, p);
    Eigen::VectorXd wz(n);
    for (int it = 1; it <= ctl.max_iterations; ++it) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = expit(eta(i));
            const double w = std::max(mu * (1.0 - mu), 1e-300);
            const double sw = std::sqrt(w);
            wx.row(i) = sw * x.x.row(i);
            wz(i) = sw * (eta(i) + (y(i) - mu) / w);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wx);
        const Eigen::VectorXd next = qr.solve(wz);
        const double step = (next - beta).cwiseAbs().maxCoeff();
        beta = next;
        eta = x.x * beta;
        const double new_dev = deviance(eta, y);
        const double ddev = std::abs(new_dev - dev);
        dev = new_dev;
        cs.iterations = it;

        if (dev / static_cast<double>(n) < 1e-10) {
            throw Error(ErrorKind::Separation, "fitted probabilities are 0 or 1 (deviance " + std::to_string(dev) + ")");
        }
        if (beta.norm() > ctl.divergence_norm && it > 1 && step >= prev_step) {
            throw Error(ErrorKind::Separation, "coefficients diverge (norm " + std::to_string(beta.norm()) + ")");
        }
        if (step < ctl.coef_tolerance || ddev < ctl.deviance_tolerance * (std::abs(dev) + 0.1)) {
            cs.converged = true;
            break;
        }
        prev_step = step;
    }
    if (!cs.converged) {
        if (beta.norm() > ctl.divergence_norm) {
            throw Error(ErrorKind::Separation, "coefficients diverge (norm " + std::to_string(beta.norm()) + ")");
        }
        throw Error(ErrorKind::NotConverged, "IRLS did not converge in " + std::to_string(ctl.max_iterations) + " iterations");
    }
    cs.beta = beta;
    cs.deviance = dev;
    return cs;
}

}  // namespace disparity

#include "disparity/synthetic.hpp"

#include <cmath>
#include <random>

#include "disparity/error.hpp"

namespace disparity {

void StructuralParams::validate() const
{
    if (!(p_r > 0.0 && p_r < 1.0)) throw Error(ErrorKind::InvalidSpec, "p_r must lie in (0,1)");
    if (with_c && !(p_c > 0.0 && p_c < 1.0)) throw Error(ErrorKind::InvalidSpec, "p_c must lie in (0,1)");
    for (double s : {sigma_x, sigma_m, sigma_y, sigma_l}) {
        if (!(s >= 0.0)) throw Error(ErrorKind::InvalidSpec, "noise standard deviations must be nonnegative");
    }
    for (const auto& e : extra_early) {
        if (!(e.sd >= 0.0)) throw Error(ErrorKind::InvalidSpec, "noise standard deviations must be nonnegative");
    }
    if (binary_y && !(prevalence > 0.0 && prevalence < 1.0)) {
        throw Error(ErrorKind::InvalidSpec, "prevalence must lie in (0,1)");
    }
    if (bernoulli_xm && !extra_early.empty()) {
        throw Error(ErrorKind::InvalidSpec, "Bernoulli mode supports a single early measure");
    }
}

namespace {

double expit(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double bernoulli_draw(std::mt19937_64& rng, double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::InvalidSpec, std::string("Bernoulli probability for ") + what + " outside [0,1]: " +
                                                std::to_string(p));
    }
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p ? 1.0 : 0.0;
}

}  // namespace

Dataset generate(const StructuralParams& p, std::size_t n, std::uint64_t seed)
{
    p.validate();
    if (n < 1) throw Error(ErrorKind::InvalidSpec, "n must be at least 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    const std::size_t k_extra = p.extra_early.size();
    Column r(n), c(n, 0.0), x(n), l(n, 0.0), m(n), y(n), eta(n);
    std::vector<Column> xe(k_extra, Column(n));

    for (std::size_t i = 0; i < n; ++i) {
        r[i] = u(rng) < p.p_r ? 1.0 : 0.0;
        if (p.with_c) c[i] = u(rng) < p.p_c ? 1.0 : 0.0;

        const double xl = p.a0 + p.a1 * r[i] + p.ac * c[i];
        x[i] = p.bernoulli_xm ? bernoulli_draw(rng, xl, "X") : xl + p.sigma_x * z(rng);
        double m_lin = p.b0 + p.b1 * r[i] + p.b2 * x[i] + p.bc * c[i];
        double y_lin = p.t1 * r[i] + p.t2 * x[i] + p.tc * c[i];
        for (std::size_t k = 0; k < k_extra; ++k) {
            const auto& e = p.extra_early[k];
            xe[k][i] = e.a1 * r[i] + e.sd * z(rng);
            m_lin += e.b2 * xe[k][i];
            y_lin += e.t2 * xe[k][i];
        }
        if (p.with_l) {
            const double ll = p.c0 + p.c1 * r[i] + p.c2 * x[i];
            l[i] = p.bernoulli_xm ? bernoulli_draw(rng, ll, "L") : ll + p.sigma_l * z(rng);
            m_lin += p.bl * l[i];
            y_lin += p.tl * l[i];
        }
        m[i] = p.bernoulli_xm ? bernoulli_draw(rng, m_lin, "M") : m_lin + p.sigma_m * z(rng);
        y_lin += p.t3 * m[i];
        if (p.binary_y) {
            eta[i] = y_lin;
        } else {
            y[i] = p.t0 + y_lin + p.sigma_y * z(rng);
        }
    }

    if (p.binary_y) {
        // Intercept by bisection so the average risk hits the target.
        auto avg = [&](double t0) {
            double s = 0.0;
            for (double e : eta) s += expit(t0 + e);
            return s / static_cast<double>(n);
        };
        double lo = -50.0, hi = 50.0;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            const double mid = 0.5 * (lo + hi);
            (avg(mid) < p.prevalence ? lo : hi) = mid;
        }
        const double t0 = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < n; ++i) y[i] = u(rng) < expit(t0 + eta[i]) ? 1.0 : 0.0;
    }

    std::vector<std::pair<std::string, Column>> cols{{"y", std::move(y)}, {"r", std::move(r)}, {"x", std::move(x)}};
    RoleMap roles{{Role::Outcome, {"y"}}, {Role::Group, {"r"}}, {Role::Early, {"x"}}, {Role::Target, {"m"}}};
    for (std::size_t k = 0; k < k_extra; ++k) {
        const auto name = "x" + std::to_string(k + 2);
        cols.emplace_back(name, std::move(xe[k]));
        roles[Role::Early].push_back(name);
    }
    cols.emplace_back("m", std::move(m));
    if (p.with_l) {
        cols.emplace_back("l", std::move(l));
        roles[Role::ConfounderL] = {"l"};
    }
    if (p.with_c) {
        cols.emplace_back("c", std::move(c));
        roles[Role::Covariate] = {"c"};
    }
    return Dataset(std::move(cols), std::move(roles));
}

double true_total_disparity(const StructuralParams& p)
{
    const auto t = true_values(p, Proposition::P1);
    return t.residual + t.reduction;
}

DecompositionEstimate true_values(const StructuralParams& p, Proposition prop)
{
    if (p.binary_y || p.with_l) {
        throw Error(ErrorKind::UnsupportedMode, "closed-form truth exists only for the linear continuous model without L");
    }
    // Group gaps of X summed through their Y and M effects.
    double x_to_y = p.a1 * p.t2;      // sum of a1 t2 over early measures
    double x_to_m = p.a1 * p.b2;      // sum of a1 b2 over early measures
    for (const auto& e : p.extra_early) {
        x_to_y += e.a1 * e.t2;
        x_to_m += e.a1 * e.b2;
    }
    const double t1 = p.t1, t3 = p.t3, b1 = p.b1;

    DecompositionEstimate e;
    e.proposition = prop;
    e.scale = Scale::Additive;
    e.method = "closed_form_truth";
    switch (prop) {
    case Proposition::P1:
        e.residual = t1 + b1 * t3;
        e.reduction = x_to_y + x_to_m * t3;
        break;
    case Proposition::P2:
        e.residual = t1;
        e.reduction = b1 * t3;
        break;
    case Proposition::P3:
        e.residual = t1;
        e.reduction = x_to_y + b1 * t3 + x_to_m * t3;
        break;
    case Proposition::P4:
        e.residual = t1 + x_to_y;
        e.reduction = t3 * (b1 + x_to_m);
        break;
    default:
        throw Error(ErrorKind::UnsupportedMode, "closed-form truth covers P1-P4 only");
    }
    e.initial = e.residual + e.reduction;
    finish_estimate(e);
    return e;
}

}  // namespace disparity

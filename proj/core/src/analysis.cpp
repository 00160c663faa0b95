#include "vexinf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vexinf {

namespace {

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

struct OrderFit {
    double slope = 0.0;
    double rms_residual = 0.0;
};

// Least-squares slope of ln(y) against ln(x).
OrderFit log_log_fit(const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    OrderFit fit;
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r =
            fit.slope * std::log(xs[i]) + intercept - std::log(ys[i]);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    return fit;
}

std::vector<int> nodes_in_ball(const Domain& d,
                               const std::array<double, 2>& center,
                               double radius) {
    std::vector<int> nodes;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            const auto pos = d.position(i, j);
            if (std::hypot(pos[0] - center[0], pos[1] - center[1]) <= radius)
                nodes.push_back(d.index(i, j));
        }
    return nodes;
}

}  // namespace

ComparisonReport check_comparison(const GridFunction& u_sub,
                                  const GridFunction& v_super, double slack) {
    if (!u_sub.domain().same_layout(v_super.domain()))
        throw std::invalid_argument("check_comparison: domain layout mismatch");
    const Domain& d = u_sub.domain();
    for (int n : d.boundary_nodes())
        if (u_sub[n] - v_super[n] > slack)
            throw std::invalid_argument(
                "check_comparison: boundary ordering violated");
    ComparisonReport report;
    for (int n : d.interior_nodes()) {
        const double excess = u_sub[n] - v_super[n];
        report.worst_violation = std::max(report.worst_violation, excess);
        if (excess > slack) ++report.violating_nodes;
    }
    report.worst_violation = std::max(report.worst_violation, 0.0);
    report.ordered = report.worst_violation <= slack;
    return report;
}

SandwichReport sandwich_experiment(const Problem& base,
                                   const std::vector<double>& epsilons) {
    validate_problem(base);
    require(!epsilons.empty(), "sandwich_experiment: epsilons must be nonempty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        require(epsilons[i] > 0.0 && epsilons[i] < 1.0,
                "sandwich_experiment: epsilons must lie in (0,1)");
        require(i == 0 || epsilons[i] < epsilons[i - 1],
                "sandwich_experiment: epsilons must be strictly decreasing");
    }
    SandwichReport report;
    report.epsilons = epsilons;

    Problem prob = base;
    prob.epsilon = 0.0;
    auto [u_h, rep_h] = solve_variational_limit(prob, 0);
    report.reports.push_back(std::move(rep_h));

    for (double eps : epsilons) {
        prob.epsilon = eps;
        auto [u_plus, rep_plus] = solve_variational_limit(prob, +1);
        auto [u_minus, rep_minus] = solve_variational_limit(prob, -1);
        report.gaps.push_back(diff_sup_norm(u_plus, u_minus));
        double viol = 0.0;
        const Domain& d = *base.domain;
        for (int n : d.interior_nodes()) {
            viol = std::max(viol, u_minus[n] - u_h[n]);
            viol = std::max(viol, u_h[n] - u_plus[n]);
        }
        report.worst_violation = std::max(report.worst_violation, viol);
        report.reports.push_back(std::move(rep_plus));
        report.reports.push_back(std::move(rep_minus));
    }

    report.gaps_decreasing = true;
    for (std::size_t i = 1; i < report.gaps.size(); ++i)
        report.gaps_decreasing =
            report.gaps_decreasing && report.gaps[i] < report.gaps[i - 1];

    // The regression drops gaps near the solver-accuracy floor.
    const double floor = 50.0 * effective_residual_tol(base);
    std::vector<double> fit_eps, fit_gaps;
    for (std::size_t i = 0; i < report.gaps.size(); ++i)
        if (report.gaps[i] > floor) {
            fit_eps.push_back(epsilons[i]);
            fit_gaps.push_back(report.gaps[i]);
        }
    if (fit_eps.size() >= 2) {
        const OrderFit fit = log_log_fit(fit_eps, fit_gaps);
        report.kappa = fit.slope;
        report.kappa_residual = fit.rms_residual;
    }
    return report;
}

double max_log_slope(const GridFunction& v, const std::array<double, 2>& center,
                     double radius) {
    const Domain& d = v.domain();
    const auto nodes = nodes_in_ball(d, center, radius);
    require(nodes.size() >= 2, "max_log_slope: ball must contain 2+ nodes");
    std::vector<double> lv(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        require(v[nodes[a]] > 0.0, "max_log_slope: field must be positive");
        lv[a] = std::log(v[nodes[a]]);
    }
    double slope = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const int na = nodes[a];
        const auto pa = d.position(na % d.nx(), na / d.nx());
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const int nb = nodes[b];
            const auto pb = d.position(nb % d.nx(), nb / d.nx());
            const double dist = std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
            slope = std::max(slope, std::abs(lv[a] - lv[b]) / dist);
        }
    }
    return slope;
}

HarnackReport harnack_check(const GridFunction& u,
                            const std::array<double, 2>& center, double radius,
                            std::optional<double> alpha) {
    require(radius > 0.0 && std::isfinite(radius),
            "harnack_check: radius must be positive");
    if (alpha) require(*alpha > 0.0, "harnack_check: alpha must be positive");
    const Domain& d = u.domain();
    const double hull_x0 = d.origin()[0];
    const double hull_y0 = d.origin()[1];
    const double hull_x1 = d.origin()[0] + (d.nx() - 1) * d.h();
    const double hull_y1 = d.origin()[1] + (d.ny() - 1) * d.h();
    const double r2 = 2.0 * radius;
    require(center[0] - r2 >= hull_x0 - 1e-12 &&
                center[0] + r2 <= hull_x1 + 1e-12 &&
                center[1] - r2 >= hull_y0 - 1e-12 &&
                center[1] + r2 <= hull_y1 + 1e-12,
            "harnack_check: B_2R not contained in the domain");
    std::vector<int> ball2;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            const auto pos = d.position(i, j);
            if (std::hypot(pos[0] - center[0], pos[1] - center[1]) > r2)
                continue;
            require(d.is_active(i, j),
                    "harnack_check: B_2R not contained in the domain");
            ball2.push_back(d.index(i, j));
        }
    for (int n : ball2)
        require(u[n] >= 0.0, "harnack_check: u must be nonnegative on B_2R");

    HarnackReport report;
    report.center = center;
    report.radius = radius;
    const double shift = alpha ? std::pow(radius, *alpha) : radius;

    const auto ball = nodes_in_ball(d, center, radius);
    require(ball.size() >= 2, "harnack_check: B_R must contain 2+ nodes");
    report.nodes_in_ball = static_cast<long>(ball.size());
    report.sup_ball = u[ball[0]];
    report.inf_ball = u[ball[0]];
    for (int n : ball) {
        report.sup_ball = std::max(report.sup_ball, u[n]);
        report.inf_ball = std::min(report.inf_ball, u[n]);
    }
    report.sup_ball_2r = u[ball2[0]];
    for (int n : ball2) report.sup_ball_2r = std::max(report.sup_ball_2r, u[n]);
    report.harnack_constant = report.sup_ball / (report.inf_ball + shift);
    report.sup_norm_v = report.sup_ball_2r + shift;

    GridFunction v(u.domain_ptr(), u.values());
    for (int n : ball) v[n] = u[n] + shift;
    report.required_slope = max_log_slope(v, center, radius);

    // Feasibility certificate on the logarithmic grid.
    const double lo = std::log(1e-4);
    const double hi = std::log(1e4);
    double best_sum = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 50; ++a) {
        const double c1 = std::exp(lo + a * (hi - lo) / 49.0);
        for (int b = 0; b < 50; ++b) {
            const double c2 = std::exp(lo + b * (hi - lo) / 49.0);
            if (c2 / radius + c1 * report.sup_norm_v < report.required_slope)
                continue;
            if (c1 + c2 < best_sum) {
                best_sum = c1 + c2;
                report.c1 = c1;
                report.c2 = c2;
                report.feasible = true;
            }
        }
    }
    return report;
}

CutoffFunction build_cutoff(DomainPtr domain,
                            const std::array<double, 2>& center,
                            double radius) {
    require(radius > 0.0 && std::isfinite(radius),
            "build_cutoff: radius must be positive");
    CutoffFunction cutoff{GridFunction(domain), center, radius};
    for (int j = 0; j < domain->ny(); ++j)
        for (int i = 0; i < domain->nx(); ++i) {
            const auto pos = domain->position(i, j);
            const double r =
                std::hypot(pos[0] - center[0], pos[1] - center[1]);
            cutoff.zeta.at(i, j) =
                std::min(1.0, std::max(2.0 * radius - r, 0.0) / radius);
        }
    return cutoff;
}

CaccioppoliReport caccioppoli_check(const GridFunction& u,
                                    const ExponentField& field,
                                    const CutoffFunction& cutoff,
                                    double c_constant) {
    const Domain& d = u.domain();
    require(d.same_layout(*field.domain) &&
                d.same_layout(cutoff.zeta.domain()),
            "caccioppoli_check: domain layout mismatch");
    const GridFunction& zeta = cutoff.zeta;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            if (zeta.at(i, j) > 0.0 && !(u.at(i, j) > 0.0))
                throw std::invalid_argument(
                    "caccioppoli_check: u must be positive on the cutoff "
                    "support");
        }
    CaccioppoliReport report;
    report.c_constant = c_constant;
    report.u_min = std::numeric_limits<double>::infinity();
    double lhs = 0.0;
    double rhs = 0.0;
    for (int n : d.interior_nodes()) {
        const int i = n % d.nx();
        const int j = n / d.nx();
        const double z = zeta[n];
        const auto gu = gradient_centered(u, i, j);
        const auto gz = gradient_centered(zeta, i, j);
        const double p = field.p[n];
        if (z > 0.0)
            lhs = std::max(
                lhs, std::pow(z * std::hypot(gu[0], gu[1]) / u[n], p));
        const double lng = z > 0.0 ? std::log(z / u[n]) : 0.0;
        const auto& glp = field.grad_log_p[n];
        rhs = std::max(rhs, std::pow(std::hypot(gz[0] + z * lng * glp[0],
                                                gz[1] + z * lng * glp[1]),
                                     p));
        report.u_min = std::min(report.u_min, u[n]);
    }
    for (int n : d.boundary_nodes())
        report.u_min = std::min(report.u_min, u[n]);
    report.lhs = lhs;
    report.rhs = rhs + c_constant * d.h();
    report.gap = report.lhs - report.rhs;
    report.holds = report.lhs <= report.rhs;
    return report;
}

ConvergenceReport convergence_order(const std::vector<double>& hs,
                                    const std::vector<double>& errors) {
    require(hs.size() == errors.size() && hs.size() >= 2,
            "convergence_order: need 2+ matching (h, error) pairs");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        require(hs[i] > 0.0, "convergence_order: h must be positive");
        require(i == 0 || hs[i] < hs[i - 1],
                "convergence_order: h list must be strictly decreasing");
        require(errors[i] >= 0.0, "convergence_order: errors must be >= 0");
    }
    ConvergenceReport report;
    report.hs = hs;
    report.errors = errors;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        report.halving_factors.push_back(
            errors[i + 1] > 0.0
                ? errors[i] / errors[i + 1]
                : std::numeric_limits<double>::infinity());
    const double max_err = *std::max_element(errors.begin(), errors.end());
    if (max_err <= 1e-10) {
        report.exact = true;
        return report;
    }
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < hs.size(); ++i)
        if (errors[i] > 0.0) {
            fx.push_back(hs[i]);
            fy.push_back(errors[i]);
        }
    if (fx.size() < 2) {
        report.exact = true;
        return report;
    }
    report.fitted_order = log_log_fit(fx, fy).slope;
    return report;
}

ConvergenceReport operator_consistency_order(
    const SmoothProbe& probe,
    const std::function<ExponentField(const DomainPtr&)>& exponent_factory,
    const std::vector<double>& hs, std::array<double, 2> origin,
    LogScheme scheme) {
    require(hs.size() >= 3, "operator_consistency_order: need 3+ h values");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        require(hs[i] > 0.0 && std::abs(1.0 / hs[i] - std::round(1.0 / hs[i])) <=
                                   1e-9,
                "operator_consistency_order: h must divide the unit extent");
        require(i == 0 || hs[i] < hs[i - 1],
                "operator_consistency_order: h list must be strictly "
                "decreasing");
        const double ratio = hs[0] / hs[i];
        require(std::abs(ratio - std::round(ratio)) <= 1e-9,
                "operator_consistency_order: grids must nest in the coarsest");
    }
    const int n0 = static_cast<int>(std::round(1.0 / hs[0])) + 1;
    std::vector<double> errors;
    for (double h : hs) {
        const int n = static_cast<int>(std::round(1.0 / h)) + 1;
        const int step = static_cast<int>(std::round(hs[0] / h));
        const DomainPtr domain = make_domain(n, n, h, Shape::Rectangle, origin);
        const ExponentField field = exponent_factory(domain);
        const GridFunction u = sample(domain, probe.value);
        const double guard = default_guard(u);
        double err = 0.0;
        for (int b = 1; b <= n0 - 2; ++b)
            for (int a = 1; a <= n0 - 2; ++a) {
                const int i = a * step;
                const int j = b * step;
                const auto pos = domain->position(i, j);
                const auto g = probe.gradient(pos[0], pos[1]);
                const double mag = std::hypot(g[0], g[1]);
                require(mag >= 1e-8,
                        "operator_consistency_order: degenerate probe "
                        "gradient");
                const int node = domain->index(i, j);
                const auto& glp = field.grad_log_p[node];
                const double cont =
                    delta_inf_x_continuous(
                        probe, pos[0], pos[1],
                        [&glp](double, double) { return glp; }) /
                    (mag * mag);
                const double disc =
                    full_operator_discrete(u, i, j, field, guard, scheme);
                err = std::max(err, std::abs(disc - cont));
            }
        errors.push_back(err);
    }
    return convergence_order(hs, errors);
}

LipschitzReport lipschitz_bound_check(const GridFunction& u,
                                      const BoundaryData& boundary) {
    require(boundary.domain && u.domain().same_layout(*boundary.domain),
            "lipschitz_bound_check: domain layout mismatch");
    LipschitzReport report;
    const Domain& d = u.domain();
    for (int n : d.interior_nodes()) {
        const auto g = gradient_centered(u, n % d.nx(), n / d.nx());
        report.grad_sup = std::max(report.grad_sup, std::hypot(g[0], g[1]));
    }
    report.boundary_lipschitz = boundary.lipschitz_constant;
    if (report.boundary_lipschitz > 0.0)
        report.ratio = report.grad_sup / report.boundary_lipschitz;
    else
        report.ratio = report.grad_sup > 0.0
                           ? std::numeric_limits<double>::infinity()
                           : 0.0;
    return report;
}

}  // namespace vexinf

#include "vexinf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vexinf {

double delta_inf_continuous(const SmoothProbe& probe, double x, double y) {
    const auto g = probe.gradient(x, y);
    const auto hess = probe.hessian(x, y);
    return g[0] * g[0] * hess[0] + g[0] * g[1] * (hess[1] + hess[2]) +
           g[1] * g[1] * hess[3];
}

double delta_inf_x_continuous(
    const SmoothProbe& probe, double x, double y,
    const std::function<std::array<double, 2>(double, double)>& grad_log_p) {
    const double d_inf = delta_inf_continuous(probe, x, y);
    const auto g = probe.gradient(x, y);
    const double mag = std::hypot(g[0], g[1]);
    if (mag == 0.0) return d_inf;
    const auto glp = grad_log_p(x, y);
    return d_inf + mag * mag * std::log(mag) * (g[0] * glp[0] + g[1] * glp[1]);
}

double normalized_inf_discrete(const GridFunction& u, int i, int j) {
    const Domain& d = u.domain();
    if (!d.is_interior(i, j))
        throw std::invalid_argument(
            "normalized_inf_discrete: node must be interior");
    const double e = u.at(i + 1, j);
    const double w = u.at(i - 1, j);
    const double n = u.at(i, j + 1);
    const double s = u.at(i, j - 1);
    const double mx = std::max({e, w, n, s});
    const double mn = std::min({e, w, n, s});
    return (mx + mn - 2.0 * u.at(i, j)) / (d.h() * d.h());
}

double default_guard(const GridFunction& u) {
    return 1e-8 * (1.0 + sup_norm(u)) / u.domain().h();
}

double full_operator_discrete(const GridFunction& u, int i, int j,
                              const ExponentField& field, double guard,
                              LogScheme scheme) {
    if (!(guard > 0.0))
        throw std::invalid_argument("full_operator_discrete: guard must be > 0");
    const double normalized = normalized_inf_discrete(u, i, j);
    if (field.constant_p()) return normalized;
    const auto gc = gradient_centered(u, i, j);
    const double m = scheme == LogScheme::UpwindMagnitude
                         ? gradient_magnitude_upwind(u, i, j)
                         : std::hypot(gc[0], gc[1]);
    if (m < guard) return normalized;
    const auto& glp = field.grad_log_p[u.domain().index(i, j)];
    const double log_term =
        std::log(std::max(m, guard)) * (gc[0] * glp[0] + gc[1] * glp[1]);
    return normalized + log_term;
}

GridFunction residual_field(const GridFunction& u, const ExponentField& field,
                            double guard, LogScheme scheme) {
    const Domain& d = u.domain();
    if (!d.same_layout(*field.domain))
        throw std::invalid_argument("residual_field: domain layout mismatch");
    GridFunction r(u.domain_ptr());
    for (int n : d.interior_nodes()) {
        const int i = n % d.nx();
        const int j = n / d.nx();
        r[n] = full_operator_discrete(u, i, j, field, guard, scheme);
    }
    return r;
}

}  // namespace vexinf

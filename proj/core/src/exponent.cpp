#include "vexinf/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vexinf {

namespace {

// Assembles the summary bounds and enforces p > 1 on active nodes.
ExponentField finalize(DomainPtr domain, std::vector<double> p,
                       std::vector<std::array<double, 2>> grad_log_p) {
    ExponentField field;
    field.domain = std::move(domain);
    field.p = std::move(p);
    field.grad_log_p = std::move(grad_log_p);
    const Domain& d = *field.domain;
    bool first = true;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            const int n = d.index(i, j);
            const double pv = field.p[n];
            if (!(std::isfinite(pv) && pv > 1.0))
                throw std::invalid_argument(
                    "ExponentField: p must be finite and > 1 on active nodes");
            const auto& g = field.grad_log_p[n];
            if (!std::isfinite(g[0]) || !std::isfinite(g[1]))
                throw std::invalid_argument(
                    "ExponentField: non-finite grad log p at an active node");
            if (first) {
                field.p_min = field.p_max = pv;
                first = false;
            } else {
                field.p_min = std::min(field.p_min, pv);
                field.p_max = std::max(field.p_max, pv);
            }
            field.grad_log_p_sup =
                std::max(field.grad_log_p_sup, std::hypot(g[0], g[1]));
        }
    return field;
}

}  // namespace

ExponentField exponent_constant(const DomainPtr& domain, double value) {
    std::vector<double> p(domain->size(), value);
    std::vector<std::array<double, 2>> glp(domain->size(), {0.0, 0.0});
    return finalize(domain, std::move(p), std::move(glp));
}

ExponentField exponent_affine(const DomainPtr& domain, std::array<double, 2> a,
                              double b) {
    std::vector<double> p(domain->size(), 0.0);
    std::vector<std::array<double, 2>> glp(domain->size(), {0.0, 0.0});
    for (int j = 0; j < domain->ny(); ++j)
        for (int i = 0; i < domain->nx(); ++i) {
            const auto pos = domain->position(i, j);
            const int n = domain->index(i, j);
            const double pv = b + a[0] * pos[0] + a[1] * pos[1];
            p[n] = pv;
            if (pv != 0.0) glp[n] = {a[0] / pv, a[1] / pv};
        }
    return finalize(domain, std::move(p), std::move(glp));
}

ExponentField exponent_gaussian_bump(const DomainPtr& domain, double base,
                                     double amp, std::array<double, 2> center,
                                     double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("exponent_gaussian_bump: sigma must be > 0");
    std::vector<double> p(domain->size(), 0.0);
    std::vector<std::array<double, 2>> glp(domain->size(), {0.0, 0.0});
    for (int j = 0; j < domain->ny(); ++j)
        for (int i = 0; i < domain->nx(); ++i) {
            const auto pos = domain->position(i, j);
            const int n = domain->index(i, j);
            const double dx = pos[0] - center[0];
            const double dy = pos[1] - center[1];
            const double e = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            const double pv = base + amp * e;
            const double dpx = amp * e * (-dx / (sigma * sigma));
            const double dpy = amp * e * (-dy / (sigma * sigma));
            p[n] = pv;
            if (pv != 0.0) glp[n] = {dpx / pv, dpy / pv};
        }
    return finalize(domain, std::move(p), std::move(glp));
}

ExponentField exponent_from_samples(const DomainPtr& domain,
                                    const std::vector<double>& p_values) {
    if (p_values.size() != domain->size())
        throw std::invalid_argument(
            "exponent_from_samples: p_values size must be nx*ny");
    const Domain& d = *domain;
    std::vector<double> lnp(d.size(), 0.0);
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            const int n = d.index(i, j);
            if (!(std::isfinite(p_values[n]) && p_values[n] > 1.0))
                throw std::invalid_argument(
                    "exponent_from_samples: p must be finite and > 1");
            lnp[n] = std::log(p_values[n]);
        }
    std::vector<std::array<double, 2>> glp(d.size(), {0.0, 0.0});
    const double h = d.h();
    auto active = [&](int i, int j) {
        return i >= 0 && i < d.nx() && j >= 0 && j < d.ny() && d.is_active(i, j);
    };
    auto axis_diff = [&](int i, int j, int di, int dj) {
        const bool lo = active(i - di, j - dj);
        const bool hi = active(i + di, j + dj);
        const int n = d.index(i, j);
        if (lo && hi)
            return (lnp[d.index(i + di, j + dj)] - lnp[d.index(i - di, j - dj)]) /
                   (2.0 * h);
        if (hi) return (lnp[d.index(i + di, j + dj)] - lnp[n]) / h;
        if (lo) return (lnp[n] - lnp[d.index(i - di, j - dj)]) / h;
        return 0.0;
    };
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            glp[d.index(i, j)] = {axis_diff(i, j, 1, 0), axis_diff(i, j, 0, 1)};
        }
    return finalize(domain, p_values, std::move(glp));
}

ExponentDiagnostics validate(const ExponentField& field) {
    ExponentDiagnostics diag;
    const Domain& d = *field.domain;
    bool first = true;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            const int n = d.index(i, j);
            const double pv = field.p[n];
            const auto& g = field.grad_log_p[n];
            const bool bad = !(std::isfinite(pv) && pv > 1.0) ||
                             !std::isfinite(g[0]) || !std::isfinite(g[1]);
            if (bad) {
                diag.violating_nodes.push_back(n);
                continue;
            }
            if (first) {
                diag.p_min = diag.p_max = pv;
                first = false;
            } else {
                diag.p_min = std::min(diag.p_min, pv);
                diag.p_max = std::max(diag.p_max, pv);
            }
            diag.grad_log_p_sup =
                std::max(diag.grad_log_p_sup, std::hypot(g[0], g[1]));
        }
    diag.ok = diag.violating_nodes.empty();
    return diag;
}

}  // namespace vexinf

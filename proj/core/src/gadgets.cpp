#include "vexinf/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vexinf {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// g' evaluated without the t >= 0 precondition; the rearranged form stays
// valid for the slightly negative arguments the finite-difference probe uses.
double g_prime_raw(double t, const GFunctionParams& params) {
    const double e = std::exp(-params.alpha * t);
    return params.A / (params.A + (1.0 - params.A) * e);
}

}  // namespace

double monotonicity_inequality_gap(std::span<const double> a,
                                   std::span<const double> b, double q) {
    if (q < 2.0)
        throw std::invalid_argument("monotonicity_inequality_gap: q must be >= 2");
    if (a.size() != b.size())
        throw std::invalid_argument(
            "monotonicity_inequality_gap: dimension mismatch");
    const double na = norm2(a);
    const double nb = norm2(b);
    const double ca = na > 0.0 ? std::pow(na, q - 2.0) : 0.0;
    const double cb = nb > 0.0 ? std::pow(nb, q - 2.0) : 0.0;
    double lhs = 0.0;
    double diff_sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double delta = b[i] - a[i];
        lhs += (cb * b[i] - ca * a[i]) * delta;
        diff_sq += delta * delta;
    }
    const double nd = std::sqrt(diff_sq);
    const double rhs = nd > 0.0 ? std::exp2(2.0 - q) * std::pow(nd, q) : 0.0;
    return lhs - rhs;
}

GFunctionParams::GFunctionParams(double alpha_in, double A_in)
    : alpha(alpha_in), A(A_in) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("GFunctionParams: alpha must be > 0");
    if (!(A > 1.0 && A < 2.0))
        throw std::invalid_argument("GFunctionParams: A must be in (1,2)");
}

double g_eval(double t, const GFunctionParams& params) {
    if (!(t >= 0.0))
        throw std::invalid_argument("g_eval: t must be >= 0");
    const double e = std::exp(-params.alpha * t);
    return t + std::log(params.A + (1.0 - params.A) * e) / params.alpha;
}

double g_prime(double t, const GFunctionParams& params) {
    if (!(t >= 0.0))
        throw std::invalid_argument("g_prime: t must be >= 0");
    return g_prime_raw(t, params);
}

double g_inverse(double s, const GFunctionParams& params) {
    if (!(s >= 0.0))
        throw std::invalid_argument("g_inverse: s must be >= 0");
    const double e = std::exp(-params.alpha * s);
    return s + std::log(1.0 / params.A + (1.0 - 1.0 / params.A) * e) /
                   params.alpha;
}

GPropertyReport check_g_properties(const GFunctionParams& params,
                                   const std::vector<double>& t_samples,
                                   double fd_tol) {
    GPropertyReport report;
    report.identity_slack = std::numeric_limits<double>::infinity();
    report.log_bound_slack = std::numeric_limits<double>::infinity();
    const double band_gap = (params.A - 1.0) / params.alpha;
    const double band_slope = params.A - 1.0;
    for (double t : t_samples) {
        bool bad = false;
        const double gv = g_eval(t, params);
        const double gp = g_prime(t, params);
        const double excess = gv - t;
        const double slope_excess = gp - 1.0;
        if (t == 0.0) {
            // Boundary case: g(0) = 0 and g'(0) = A exactly.
            if (std::abs(gv) > 1e-14 || std::abs(gp - params.A) > 1e-14)
                bad = true;
        } else {
            const double slack =
                std::min(std::min(excess, band_gap - excess),
                         std::min(slope_excess, band_slope - slope_excess));
            report.identity_slack = std::min(report.identity_slack, slack);
            if (!(excess > 0.0 && excess < band_gap && slope_excess > 0.0 &&
                  slope_excess < band_slope))
                bad = true;
        }
        // g''/g' = -alpha (g' - 1) with a finite-difference g''.
        const double step = 1e-5 * std::max(1.0, t);
        const double gpp =
            (g_prime_raw(t + step, params) - g_prime_raw(t - step, params)) /
            (2.0 * step);
        const double residual = std::abs(gpp / gp + params.alpha * (gp - 1.0));
        report.ratio_residual = std::max(report.ratio_residual, residual);
        if (residual > fd_tol) bad = true;
        const double lg = std::log(gp);
        const double log_slack = std::min(lg, (gp - 1.0) - lg);
        report.log_bound_slack = std::min(report.log_bound_slack, log_slack);
        if (!(lg >= 0.0 && lg <= gp - 1.0)) bad = true;
        if (bad) report.violations.push_back(t);
    }
    report.ok = report.violations.empty();
    return report;
}

ReferenceSolution reference_solution(ReferenceKind kind, const DomainPtr& domain,
                                     const ReferenceSpec& spec) {
    switch (kind) {
        case ReferenceKind::AffineUnitGradient: {
            const double norm = std::hypot(spec.direction[0], spec.direction[1]);
            if (!(norm > 0.0))
                throw std::invalid_argument(
                    "reference_solution: affine direction must be nonzero");
            const double ex = spec.direction[0] / norm;
            const double ey = spec.direction[1] / norm;
            return {sample(domain,
                           [=](double x, double y) { return ex * x + ey * y; }),
                    false};
        }
        case ReferenceKind::Cone: {
            const double vx = spec.vertex[0];
            const double vy = spec.vertex[1];
            double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
            bool first = true;
            for (int j = 0; j < domain->ny(); ++j)
                for (int i = 0; i < domain->nx(); ++i) {
                    if (!domain->is_active(i, j)) continue;
                    const auto pos = domain->position(i, j);
                    if (first) {
                        lo_x = hi_x = pos[0];
                        lo_y = hi_y = pos[1];
                        first = false;
                    } else {
                        lo_x = std::min(lo_x, pos[0]);
                        hi_x = std::max(hi_x, pos[0]);
                        lo_y = std::min(lo_y, pos[1]);
                        hi_y = std::max(hi_y, pos[1]);
                    }
                }
            const bool vertex_inside = vx >= lo_x - 1e-12 && vx <= hi_x + 1e-12 &&
                                       vy >= lo_y - 1e-12 && vy <= hi_y + 1e-12;
            return {sample(domain,
                           [=](double x, double y) {
                               return std::hypot(x - vx, y - vy);
                           }),
                    vertex_inside};
        }
        case ReferenceKind::Aronsson: {
            double min_ax = std::numeric_limits<double>::infinity();
            double min_ay = std::numeric_limits<double>::infinity();
            bool sign_flip_x = false, sign_flip_y = false;
            double sx = 0.0, sy = 0.0;
            bool first = true;
            for (int j = 0; j < domain->ny(); ++j)
                for (int i = 0; i < domain->nx(); ++i) {
                    if (!domain->is_active(i, j)) continue;
                    const auto pos = domain->position(i, j);
                    min_ax = std::min(min_ax, std::abs(pos[0]));
                    min_ay = std::min(min_ay, std::abs(pos[1]));
                    if (first) {
                        sx = pos[0];
                        sy = pos[1];
                        first = false;
                    } else {
                        sign_flip_x = sign_flip_x || pos[0] * sx < 0.0;
                        sign_flip_y = sign_flip_y || pos[1] * sy < 0.0;
                    }
                }
            if (min_ax < 1e-12 || min_ay < 1e-12 || sign_flip_x || sign_flip_y)
                throw std::invalid_argument(
                    "reference_solution: aronsson domain must avoid the axes");
            return {sample(domain,
                           [](double x, double y) {
                               return std::pow(std::abs(x), 4.0 / 3.0) -
                                      std::pow(std::abs(y), 4.0 / 3.0);
                           }),
                    false};
        }
    }
    throw std::invalid_argument("reference_solution: unknown kind");
}

}  // namespace vexinf

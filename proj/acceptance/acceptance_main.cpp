// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion is self-contained and runs at desk scale.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "vexinf/analysis.hpp"
#include "vexinf/gadgets.hpp"
#include "vexinf/io.hpp"
#include "vexinf/solvers.hpp"

using namespace vexinf;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return std::string(buf);
}

ExponentField bump_field(const DomainPtr& domain) {
    return exponent_gaussian_bump(domain, 1.5, 0.8, {0.45, 0.55}, 0.15);
}

double saddle_sine(double x, double y) {
    return (x - 0.5) * (y - 0.5) +
           0.3 * std::sin(2.0 * std::numbers::pi * x);
}

Problem direct_problem(const DomainPtr& domain, const ExponentField& field,
                       const std::function<double(double, double)>& f,
                       double residual_tol = 1e-10) {
    Problem prob;
    prob.domain = domain;
    prob.exponent = field;
    prob.boundary = boundary_data_from_function(domain, f);
    prob.tolerances.residual_tol = residual_tol;
    return prob;
}

// 1. Constant-p reduction of the full operator to the normalized stencil.
Outcome criterion_operator_reduction() {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uval(-3.0, 3.0);
    std::uniform_real_distribution<double> pval(1.1, 3.0);
    long mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ExponentField field = exponent_constant(d, pval(rng));
        GridFunction u(d);
        for (auto& x : u.values()) x = uval(rng);
        const double guard = default_guard(u);
        for (int n : d->interior_nodes()) {
            const int i = n % d->nx();
            const int j = n / d->nx();
            if (full_operator_discrete(u, i, j, field, guard) !=
                normalized_inf_discrete(u, i, j))
                ++mismatches;
        }
    }
    return {mismatches == 0,
            fmt("1000 random fields, %ld stencil mismatches", mismatches)};
}

// 2. First-order consistency for smooth probes under a bump exponent.
Outcome criterion_consistency() {
    const std::vector<double> hs{0.125, 0.0625, 0.03125, 0.015625};
    const auto factory = [](const DomainPtr& d) { return bump_field(d); };
    const SmoothProbe probes[3] = {
        {[](double x, double) { return x * x * x / 3.0 + 2.0 * x; },
         [](double x, double) {
             return std::array<double, 2>{x * x + 2.0, 0.0};
         },
         [](double x, double) {
             return std::array<double, 4>{2.0 * x, 0.0, 0.0, 0.0};
         }},
        {[](double, double y) { return y * y * y / 3.0 + 2.0 * y; },
         [](double, double y) {
             return std::array<double, 2>{0.0, y * y + 2.0};
         },
         [](double, double y) {
             return std::array<double, 4>{0.0, 0.0, 0.0, 2.0 * y};
         }},
        {[](double, double y) { return std::exp(1.1 * y); },
         [](double, double y) {
             return std::array<double, 2>{0.0, 1.1 * std::exp(1.1 * y)};
         },
         [](double, double y) {
             return std::array<double, 4>{0.0, 0.0, 0.0,
                                          1.21 * std::exp(1.1 * y)};
         }}};
    double min_order = 1e300;
    for (const auto& probe : probes) {
        const ConvergenceReport r =
            operator_consistency_order(probe, factory, hs);
        if (r.exact) continue;
        min_order = std::min(min_order, r.fitted_order);
    }
    return {min_order >= 1.0,
            fmt("3 probes over h=1/8..1/64, min fitted order %.3f", min_order)};
}

// 3. Unit-gradient affine data is an exact solution for variable exponents.
Outcome criterion_exact_affine() {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    const ExponentField fields[3] = {
        exponent_affine(d, {1.0, 0.0}, 2.0),
        bump_field(d),
        exponent_affine(d, {0.0, 0.5}, 2.0)};
    double worst_residual = 0.0;
    double worst_err = 0.0;
    for (const auto& field : fields)
        for (double theta : {0.3, 1.1, 2.0}) {
            const double cx = std::cos(theta);
            const double cy = std::sin(theta);
            const auto f = [cx, cy](double x, double y) {
                return cx * x + cy * y;
            };
            auto [u, report] = solve_direct(direct_problem(d, field, f));
            worst_residual = std::max(worst_residual, report.final_residual);
            worst_err = std::max(worst_err, diff_sup_norm(u, sample(d, f)));
        }
    return {worst_residual <= 1e-8 && worst_err <= 1e-6,
            fmt("9 solves, residual <= %.2e, error <= %.2e", worst_residual,
                worst_err)};
}

// 4. Aronsson oracle refinement on an axis-avoiding square.
Outcome criterion_aronsson_refinement() {
    std::vector<double> errs;
    for (int n : {9, 17, 33}) {
        const double h = 1.0 / (n - 1);
        const DomainPtr d =
            make_domain(n, n, h, Shape::Rectangle, {0.25, 0.25});
        Problem prob;
        prob.domain = d;
        prob.exponent = exponent_constant(d, 2.0);
        const ReferenceSolution ref =
            reference_solution(ReferenceKind::Aronsson, d);
        prob.boundary = BoundaryData{d, ref.u.values(), 0.0};
        prob.boundary.lipschitz_constant = estimate_lipschitz(prob.boundary);
        prob.k_schedule = default_k_schedule(prob.exponent, 64.0);
        prob.tolerances.step_tol = 1e-12;
        prob.tolerances.max_iters = 60000;
        auto [u, report] = solve_variational_limit(prob, 0);
        errs.push_back(diff_sup_norm(u, ref.u));
    }
    const double f1 = errs[0] / errs[1];
    const double f2 = errs[1] / errs[2];
    return {f1 >= 1.3 && f2 >= 1.3,
            fmt("sup errors %.3e / %.3e / %.3e, halving factors %.2f, %.2f",
                errs[0], errs[1], errs[2], f1, f2)};
}

// 5. Epsilon sandwich: ordering, shrinking gaps, positive kappa.
Outcome criterion_sandwich() {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    Problem base;
    base.domain = d;
    base.exponent = bump_field(d);
    base.boundary = boundary_data_from_function(d, saddle_sine);
    base.k_schedule = default_k_schedule(base.exponent, 4.0);
    base.tolerances.step_tol = 1e-10;
    base.tolerances.residual_tol = 1e-10;
    const SandwichReport r =
        sandwich_experiment(base, {0.4, 0.2, 0.1, 0.05});
    const double slack = 10.0 * base.tolerances.step_tol;
    const bool pass =
        r.worst_violation <= slack && r.gaps_decreasing && r.kappa > 0.0;
    return {pass,
            fmt("violation %.2e (slack %.0e), gaps %.2e..%.2e %s, kappa %.3f",
                r.worst_violation, slack, r.gaps.front(), r.gaps.back(),
                r.gaps_decreasing ? "decreasing" : "NOT decreasing",
                r.kappa)};
}

// 6. Comparison principle across 20 random ordered boundary pairs.
Outcome criterion_comparison() {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = 0.0;
    long unordered = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng),
                     c3 = coef(rng);
        const double lift = 0.1 + std::abs(coef(rng));
        const auto f = [=](double x, double y) {
            return c0 + c1 * x + c2 * y +
                   0.3 * c3 * std::sin(2.0 * std::numbers::pi * x);
        };
        const auto g = [=](double x, double y) { return f(x, y) + lift; };
        auto [uf, rf] = solve_direct(direct_problem(d, field, f));
        auto [ug, rg] = solve_direct(direct_problem(d, field, g));
        const ComparisonReport cmp = check_comparison(uf, ug, 1e-9);
        worst = std::max(worst, cmp.worst_violation);
        if (!cmp.ordered) ++unordered;
    }
    return {unordered == 0,
            fmt("20 ordered pairs, worst interior violation %.2e", worst)};
}

// 7. Gradient sup-norm stays within a fixed multiple of the data Lipschitz
// constant under refinement.
Outcome criterion_lipschitz() {
    const std::function<double(double, double)> datasets[2] = {
        saddle_sine,
        [](double x, double y) {
            return 0.7 * std::hypot(x + 0.4, y + 0.3) + 0.2 * x;
        }};
    double worst_ratio = 0.0;
    for (const auto& f : datasets)
        for (int n : {9, 17, 33}) {
            const DomainPtr d = make_domain(n, n, 1.0 / (n - 1));
            auto [u, report] =
                solve_direct(direct_problem(d, bump_field(d), f));
            const LipschitzReport lr =
                lipschitz_bound_check(u, boundary_data_from_function(d, f));
            worst_ratio = std::max(worst_ratio, lr.ratio);
        }
    return {worst_ratio <= 5.0,
            fmt("2 problems x h=1/8..1/32, max grad/Lipschitz ratio %.3f",
                worst_ratio)};
}

// 8. Caccioppoli bound over the regression suite, classical RHS at constant p.
Outcome criterion_caccioppoli() {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    const CutoffFunction cutoff = build_cutoff(d, {0.5, 0.5}, 0.22);
    const std::function<double(double, double)> datasets[5] = {
        [](double x, double y) {
            return 1.2 + 0.5 * (x - 0.5) + 0.3 * (x - 0.5) * (y - 0.5);
        },
        [](double x, double y) { return 2.0 + x - 0.5 * y; },
        [](double x, double) {
            return 1.5 + 0.4 * std::sin(2.0 * std::numbers::pi * x);
        },
        [](double x, double) { return std::exp(0.5 * x); },
        [](double x, double y) {
            return 1.0 + 0.5 * std::hypot(x - 0.2, y - 0.3);
        }};
    const ExponentField fields[2] = {exponent_constant(d, 2.0),
                                     bump_field(d)};
    long failures = 0;
    double worst_gap = -1e300;
    double classical_mismatch = 0.0;
    for (const auto& f : datasets)
        for (const auto& field : fields) {
            auto [u, report] = solve_direct(direct_problem(d, field, f));
            const CaccioppoliReport r = caccioppoli_check(u, field, cutoff);
            if (!r.holds) ++failures;
            worst_gap = std::max(worst_gap, r.gap);
            if (field.constant_p()) {
                double zmax = 0.0;
                for (int n : d->interior_nodes()) {
                    const auto gz = gradient_centered(cutoff.zeta,
                                                      n % d->nx(),
                                                      n / d->nx());
                    zmax = std::max(zmax,
                                    std::pow(std::hypot(gz[0], gz[1]),
                                             field.p[n]));
                }
                classical_mismatch =
                    std::max(classical_mismatch,
                             std::abs(r.rhs - (zmax + r.c_constant * d->h())));
            }
        }
    return {failures == 0 && classical_mismatch <= 1e-12,
            fmt("10 problems, worst lhs-rhs gap %.3f, classical rhs "
                "mismatch %.1e",
                worst_gap, classical_mismatch)};
}

// 9. Harnack ratios finite, monotone-envelope bounded, feasible (C1, C2).
Outcome criterion_harnack() {
    const DomainPtr d = make_domain(33, 33, 1.0 / 32.0);
    const ExponentField fields[3] = {exponent_constant(d, 2.0),
                                     exponent_affine(d, {1.0, 0.0}, 2.0),
                                     bump_field(d)};
    struct Case {
        double sup2r;
        double constant;
    };
    std::vector<Case> cases;
    long infeasible = 0;
    double cmin = 1e300, cmax = -1e300;
    for (int m = 0; m < 10; ++m) {
        const auto f = [m](double x, double y) {
            return 0.5 + 0.1 * m +
                   0.3 * std::sin(2.0 * std::numbers::pi * x + 0.7 * m) +
                   0.25 * y;
        };
        auto [u, report] =
            solve_direct(direct_problem(d, fields[m % 3], f));
        for (double radius : {0.1, 0.15, 0.2}) {
            const HarnackReport r = harnack_check(u, {0.5, 0.5}, radius);
            if (!r.feasible) ++infeasible;
            if (!std::isfinite(r.harnack_constant)) ++infeasible;
            cases.push_back({r.sup_ball_2r, r.harnack_constant});
            cmin = std::min(cmin, r.harnack_constant);
            cmax = std::max(cmax, r.harnack_constant);
        }
    }
    std::sort(cases.begin(), cases.end(),
              [](const Case& a, const Case& b) { return a.sup2r < b.sup2r; });
    double envelope = 0.0;
    bool bounded = true;
    for (const Case& c : cases) {
        envelope = std::max(envelope, c.constant);
        bounded = bounded && std::isfinite(envelope);
    }
    return {infeasible == 0 && bounded,
            fmt("30 cases, constants in [%.4f, %.4f], monotone envelope "
                "tops at %.4f, all (C1,C2) feasible",
                cmin, cmax, envelope)};
}

// 10. Gadget fuzz, g-function properties, and the energy gradient check.
Outcome criterion_gadgets() {
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> comp(-3.0, 3.0);
    std::uniform_real_distribution<double> qdist(2.0, 16.0);
    const int dims[4] = {1, 2, 3, 5};
    double min_gap = 1e300;
    for (long trial = 0; trial < 100000; ++trial) {
        const int dim = dims[trial % 4];
        std::vector<double> a(dim), b(dim);
        for (double& x : a) x = comp(rng);
        for (double& x : b) x = comp(rng);
        min_gap = std::min(min_gap,
                           monotonicity_inequality_gap(a, b, qdist(rng)));
    }
    const bool fuzz_ok = min_gap >= -1e-12;

    bool g_ok = true;
    std::vector<double> ts{0.0, 1e-3, 1e-2};
    for (int i = 1; i <= 100; ++i) ts.push_back(0.05 * i);
    for (const auto& [alpha, A] :
         {std::pair{1.0, 1.5}, {2.5, 1.2}, {0.7, 1.9}}) {
        const GPropertyReport r =
            check_g_properties(GFunctionParams(alpha, A), ts, 1e-6);
        g_ok = g_ok && r.ok;
    }

    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const double k = 16.0 / field.p_max;
    std::normal_distribution<double> noise(0.0, 0.05);
    double worst_rel = 0.0;
    const std::pair<double, int> runs[4] = {
        {0.0, 0}, {0.3, +1}, {0.2, -1}, {0.1, +1}};
    for (const auto& [eps, sign] : runs) {
        GridFunction u = sample(d, [](double x, double y) {
            return 0.3 * std::sin(2.0 * std::numbers::pi * x) + 0.5 * x -
                   0.2 * y;
        });
        for (int n : d->interior_nodes()) u[n] += noise(rng);
        const GridFunction g = energy_gradient(u, k, field, eps, sign);
        double gsup = 0.0;
        for (int n : d->interior_nodes())
            gsup = std::max(gsup, std::abs(g[n]));
        for (int n : d->interior_nodes()) {
            const double scale = std::max(1.0, std::abs(u[n]));
            double diffs[4];
            for (int s = 0; s < 4; ++s) {
                const double step = scale * std::pow(10.0, -3 - s);
                GridFunction up(d, u.values()), dn(d, u.values());
                up[n] += step;
                dn[n] -= step;
                diffs[s] = (energy(up, k, field, eps, sign) -
                            energy(dn, k, field, eps, sign)) /
                           (2.0 * step);
            }
            double best = 1e300, gfd = diffs[1];
            for (int s = 0; s + 1 < 4; ++s) {
                const double spread = std::abs(diffs[s] - diffs[s + 1]);
                if (spread < best) {
                    best = spread;
                    gfd = diffs[s + 1];
                }
            }
            const double rel =
                std::abs(gfd - g[n]) /
                std::max({std::abs(gfd), std::abs(g[n]), 1e-6 * gsup});
            worst_rel = std::max(worst_rel, rel);
        }
    }
    const bool grad_ok = worst_rel <= 1e-5;
    return {fuzz_ok && g_ok && grad_ok,
            fmt("fuzz min gap %.1e, g properties %s, gradient-check worst "
                "rel %.2e",
                min_gap, g_ok ? "ok" : "VIOLATED", worst_rel)};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {"operator reduction at constant p", criterion_operator_reduction},
        {"operator consistency order", criterion_consistency},
        {"exact affine solutions", criterion_exact_affine},
        {"aronsson refinement", criterion_aronsson_refinement},
        {"epsilon sandwich", criterion_sandwich},
        {"comparison principle", criterion_comparison},
        {"lipschitz bound", criterion_lipschitz},
        {"caccioppoli bound", criterion_caccioppoli},
        {"harnack inequality", criterion_harnack},
        {"gadget checks", criterion_gadgets},
    };
    int failures = 0;
    int index = 0;
    for (const Entry& entry : entries) {
        ++index;
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        if (!outcome.pass) ++failures;
        std::printf("[%s] criterion %2d, %s: %s\n",
                    outcome.pass ? "PASS" : "FAIL", index, entry.name,
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failures > 0)
        std::printf("%d of 10 criteria failed\n", failures);
    else
        std::printf("all 10 criteria passed\n");
    return failures == 0 ? 0 : 1;
}

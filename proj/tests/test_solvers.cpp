#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "vexinf/gadgets.hpp"
#include "vexinf/solvers.hpp"

using namespace vexinf;

namespace {

Problem base_problem(const DomainPtr& domain, const ExponentField& field,
                     const std::function<double(double, double)>& f) {
    Problem prob;
    prob.domain = domain;
    prob.exponent = field;
    prob.boundary = boundary_data_from_function(domain, f);
    prob.tolerances.step_tol = 1e-10;
    prob.tolerances.residual_tol = 1e-10;
    return prob;
}

ExponentField bump_field(const DomainPtr& domain) {
    return exponent_gaussian_bump(domain, 1.5, 0.8, {0.45, 0.55}, 0.15);
}

double saddle_sine(double x, double y) {
    return (x - 0.5) * (y - 0.5) +
           0.3 * std::sin(2.0 * std::numbers::pi * x);
}

GridFunction boundary_lift(const Problem& prob, double interior_value) {
    GridFunction u(prob.domain);
    for (int n : prob.domain->boundary_nodes()) u[n] = prob.boundary.values[n];
    for (int n : prob.domain->interior_nodes()) u[n] = interior_value;
    return u;
}

}  // namespace

TEST_CASE("problem validation rejects bad inputs") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const Problem good = base_problem(d, exponent_constant(d, 2.0),
                                      [](double x, double) { return x; });
    CHECK_NOTHROW(validate_problem(good));

    Problem bad = good;
    bad.epsilon = 1.0;
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
    bad.epsilon = -0.1;
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);

    bad = good;
    bad.k_schedule = {2.0, 1.0};
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
    bad.k_schedule = {0.5};  // k p_min = 1 < 2
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);

    bad = good;
    bad.tolerances.step_tol = 0.0;
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);

    bad = good;
    bad.gs_damping = 0.0;
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
    bad.gs_damping = 1.5;
    CHECK_THROWS_AS(validate_problem(bad), std::invalid_argument);
}

TEST_CASE("default k schedule doubles the k p_min targets") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const std::vector<double> ks = default_k_schedule(field, 64.0);
    REQUIRE(ks.size() == 6);
    double target = 2.0;
    for (double k : ks) {
        CHECK(k * field.p_min == doctest::Approx(target).epsilon(1e-12));
        target *= 2.0;
    }
    CHECK(default_k_schedule(field, 16.0).size() == 4);
    CHECK(default_k_schedule(field, 2.0).size() == 1);
}

TEST_CASE("effective residual tolerance") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    Problem prob = base_problem(d, exponent_constant(d, 2.0),
                                [](double x, double) { return 2.0 * x; });
    prob.tolerances.residual_tol = 0.0;
    CHECK(effective_residual_tol(prob) ==
          doctest::Approx(1e-8 * (1.0 + prob.boundary.lipschitz_constant))
              .epsilon(1e-12));
    prob.tolerances.residual_tol = 3e-7;
    CHECK(effective_residual_tol(prob) == 3e-7);
}

TEST_CASE("energy hand values") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField p2 = exponent_constant(d, 2.0);

    CHECK(energy(GridFunction(d), 1.0, p2, 0.0, 0) == 0.0);

    // u = x with |grad| = 1 on every cell: E = h^2 * cells * 1/2 = area/2.
    const GridFunction ramp = sample(d, [](double x, double) { return x; });
    CHECK(energy(ramp, 1.0, p2, 0.0, 0) ==
          doctest::Approx(0.5).epsilon(1e-14));

    GridFunction broken(d);
    broken.at(4, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(energy(broken, 1.0, p2, 0.0, 0), std::runtime_error);
    broken.at(4, 4) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(energy(broken, 1.0, p2, 0.0, 0), std::runtime_error);
}

TEST_CASE("energy is linear in the sign term") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction u(d);
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) u.at(i, j) = dist(rng);
    const double k = 4.0 / field.p_min;
    const double eps = 0.25;
    const double plus = energy(u, k, field, eps, +1);
    const double minus = energy(u, k, field, eps, -1);
    const double mid = energy(u, k, field, eps, 0);
    CHECK(plus + minus == doctest::Approx(2.0 * mid).epsilon(1e-14));

    GridFunction neg(d);
    for (std::size_t n = 0; n < d->size(); ++n) neg[(int)n] = -u[(int)n];
    CHECK(energy(neg, k, field, eps, -1) == plus);
    CHECK(energy(neg, k, field, eps, +1) == minus);
}

TEST_CASE("gradient sign term equals the discrete source") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const double k = 4.0 / field.p_min;
    const double eps = 0.25;
    const GridFunction zero(d);
    const GridFunction g0 = energy_gradient(zero, k, field, eps, 0);
    const GridFunction gp = energy_gradient(zero, k, field, eps, +1);
    const double h2 = 0.125 * 0.125;
    for (int n : d->interior_nodes()) {
        CHECK(g0[n] == 0.0);
        const double expected =
            -h2 * std::exp((k * field.p[n] - 1.0) * std::log(eps));
        CHECK(gp[n] == doctest::Approx(expected).epsilon(1e-14));
    }
    for (int n : d->boundary_nodes()) CHECK(gp[n] == 0.0);
}

TEST_CASE("energy gradient matches finite differences") {
    const DomainPtr d = make_domain(7, 7, 1.0 / 6.0);
    const ExponentField field = bump_field(d);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-0.5, 0.5);
    GridFunction u = sample(d, saddle_sine);
    for (int n : d->interior_nodes()) u[n] += dist(rng);

    for (double kp : {2.0, 8.0, 16.0}) {
        const double k = kp / field.p_min;
        const GridFunction g = energy_gradient(u, k, field, 0.2, +1);
        double gsup = 0.0;
        for (int n : d->interior_nodes())
            gsup = std::max(gsup, std::abs(g[n]));
        double worst = 0.0;
        for (int n : d->interior_nodes()) {
            const double step = 1e-6 * std::max(1.0, std::abs(u[n]));
            GridFunction up = u, dn = u;
            up[n] += step;
            dn[n] -= step;
            const double fd = (energy(up, k, field, 0.2, +1) -
                               energy(dn, k, field, 0.2, +1)) /
                              (2.0 * step);
            const double scale =
                std::max({std::abs(fd), std::abs(g[n]), 1e-6 * gsup});
            worst = std::max(worst, std::abs(fd - g[n]) / scale);
        }
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("minimizer reproduces affine data for all k") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const Problem prob = base_problem(
        d, field, [](double x, double y) { return 0.6 * x + 0.8 * y; });
    const GridFunction exact =
        sample(d, [](double x, double y) { return 0.6 * x + 0.8 * y; });
    for (double kp : {2.0, 8.0, 16.0}) {
        auto [u, report] = minimize_energy(prob, kp / field.p_min, 0);
        CHECK(report.converged);
        CHECK(diff_sup_norm(u, exact) <= 1e-7);
    }
}

TEST_CASE("warm start at an exact critical point takes zero iterations") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const Problem prob = base_problem(
        d, field, [](double x, double y) { return 0.6 * x + 0.8 * y; });
    const GridFunction affine =
        sample(d, [](double x, double y) { return 0.6 * x + 0.8 * y; });
    auto [u, report] = minimize_energy(prob, 8.0 / field.p_min, 0, affine);
    CHECK(report.iterations == 0);
    CHECK(report.converged);
    CHECK(diff_sup_norm(u, affine) == 0.0);
}

TEST_CASE("warm restart of a solved problem barely moves") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    Problem prob = base_problem(d, field, saddle_sine);
    prob.tolerances.step_tol = 1e-9;
    const double k = 2.0 / field.p_min;
    auto [u, report] = minimize_energy(prob, k, 0);
    auto [u2, report2] = minimize_energy(prob, k, 0, u);
    CHECK(report2.iterations <= 3);
    CHECK(diff_sup_norm(u, u2) <= 1e-12);
}

TEST_CASE("strip minimizer at k p = 2 solves the tridiagonal system") {
    const int nx = 9;
    const double h = 0.125;
    const DomainPtr d = make_domain(nx, 3, h);
    const ExponentField p2 = exponent_constant(d, 2.0);
    const Problem prob = base_problem(d, p2, [](double x, double y) {
        return std::sin(2.0 * std::numbers::pi * x) + 0.3 * y;
    });
    auto [u, report] = minimize_energy(prob, 1.0, 0);
    CHECK(report.converged);

    // Thomas solve of 4 x_i - x_{i-1} - x_{i+1} = north + south, i = 1..7.
    const int m = nx - 2;
    std::vector<double> diag(m, 4.0), rhs(m);
    for (int i = 1; i <= m; ++i) {
        rhs[i - 1] = prob.boundary.values[d->index(i, 0)] +
                     prob.boundary.values[d->index(i, 2)];
        if (i == 1) rhs[i - 1] += prob.boundary.values[d->index(0, 1)];
        if (i == m) rhs[i - 1] += prob.boundary.values[d->index(nx - 1, 1)];
    }
    for (int i = 1; i < m; ++i) {
        const double w = -1.0 / diag[i - 1];
        diag[i] += w;
        rhs[i] += w * -rhs[i - 1];
    }
    std::vector<double> x(m);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (int i = m - 2; i >= 0; --i)
        x[i] = (rhs[i] + x[i + 1]) / diag[i];

    for (int i = 1; i <= m; ++i)
        CHECK(u.at(i, 1) == doctest::Approx(x[i - 1]).epsilon(1e-8));
}

TEST_CASE("minimization descends from a lifted start") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    const Problem prob = base_problem(d, field, saddle_sine);
    const GridFunction start = boundary_lift(prob, 0.0);
    const double k = 16.0 / field.p_min;
    const double e_start = energy(start, k, field, 0.0, 0);
    auto [u, report] = minimize_energy(prob, k, 0, start);
    CHECK(report.final_energy <= e_start + 1e-12);
    CHECK(report.final_energy == energy(u, k, field, 0.0, 0));
}

TEST_CASE("variational limit obeys the maximum principle") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    Problem prob = base_problem(d, field, saddle_sine);
    prob.k_schedule = default_k_schedule(field, 64.0);
    auto [u, report] = solve_variational_limit(prob, 0);
    CHECK(report.converged);
    CHECK(report.k_reached == prob.k_schedule.back());
    CHECK(report.k_gaps.size() == prob.k_schedule.size());

    double bmin = prob.boundary.values[d->boundary_nodes().front()];
    double bmax = bmin;
    for (int n : d->boundary_nodes()) {
        bmin = std::min(bmin, prob.boundary.values[n]);
        bmax = std::max(bmax, prob.boundary.values[n]);
    }
    for (int n : d->interior_nodes()) {
        CHECK(u[n] >= bmin - 1e-9);
        CHECK(u[n] <= bmax + 1e-9);
    }
}

TEST_CASE("zero epsilon makes the sign argument irrelevant") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    Problem prob = base_problem(d, field, saddle_sine);
    prob.k_schedule = default_k_schedule(field, 4.0);
    auto [up, rp] = solve_variational_limit(prob, +1);
    auto [um, rm] = solve_variational_limit(prob, -1);
    CHECK(diff_sup_norm(up, um) == 0.0);
}

TEST_CASE("constant shifts of the data shift the direct solution") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    Problem prob = base_problem(d, field, saddle_sine);
    prob.tolerances.residual_tol = 1e-12;
    auto [u0, r0] = solve_direct(prob);
    prob.boundary = boundary_data_from_function(
        d, [](double x, double y) { return saddle_sine(x, y) + 5.0; });
    auto [u5, r5] = solve_direct(prob);
    double defect = 0.0;
    for (int n : d->interior_nodes())
        defect = std::max(defect, std::abs(u5[n] - u0[n] - 5.0));
    CHECK(defect <= 1e-12);
}

TEST_CASE("direct solver reproduces affine data exactly") {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    for (const ExponentField& field :
         {exponent_affine(d, {1.0, 0.0}, 2.0), bump_field(d)}) {
        Problem prob = base_problem(
            d, field, [](double x, double y) { return 0.6 * x + 0.8 * y; });
        prob.tolerances.residual_tol = 1e-12;
        auto [u, report] = solve_direct(prob);
        CHECK(report.converged);
        CHECK(report.final_residual <= 1e-12);
        CHECK_FALSE(report.residual_history.empty());
        const GridFunction exact =
            sample(d, [](double x, double y) { return 0.6 * x + 0.8 * y; });
        CHECK(diff_sup_norm(u, exact) <= 1e-11);
    }
}

TEST_CASE("direct solution sits a fixed distance from the sampled cone") {
    // The cone is a classical solution where smooth, but the 4-point stencil
    // is O(1)-inconsistent off the axes: the gap plateaus instead of
    // decaying with h.
    std::vector<double> errs;
    for (int n : {9, 17, 33}) {
        const double h = 1.0 / (n - 1);
        const DomainPtr d = make_domain(n, n, h);
        Problem prob;
        prob.domain = d;
        prob.exponent = exponent_constant(d, 2.0);
        const ReferenceSolution cone =
            reference_solution(ReferenceKind::Cone, d);
        prob.boundary = BoundaryData{d, cone.u.values(), 1.0};
        prob.tolerances.residual_tol = 1e-10;
        auto [u, report] = solve_direct(prob);
        CHECK(report.converged);
        errs.push_back(diff_sup_norm(u, cone.u));
    }
    for (double e : errs) {
        CHECK(e >= 0.02);
        CHECK(e <= 0.05);
    }
    CHECK(std::abs(errs[2] - errs[1]) <= 0.2 * errs[1]);
}

TEST_CASE("cross-method gap reflects the k truncation, not the tolerance") {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    Problem prob = base_problem(d, exponent_constant(d, 2.0),
                                [](double x, double y) {
                                    return x * x - 0.5 * y * y;
                                });
    prob.k_schedule = default_k_schedule(prob.exponent, 64.0);
    auto [uv, rv] = solve_variational_limit(prob, 0);
    auto [ud, rd] = solve_direct(prob);
    CHECK(rv.converged);
    CHECK(rd.converged);
    const double gap = diff_sup_norm(uv, ud);
    CHECK(gap >= 0.06);
    CHECK(gap <= 0.20);
    CHECK(gap > 10.0 * prob.tolerances.residual_tol);
    const double truncation = rv.k_gaps.back();
    CHECK(gap >= 2.0 * truncation);
    CHECK(gap <= 50.0 * truncation);
}

TEST_CASE("aronsson boundary data recovers the analytic function") {
    const DomainPtr d = make_domain(9, 9, 0.125, Shape::Rectangle,
                                    {0.25, 0.25});
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
    const double err = diff_sup_norm(u, ref.u);
    CHECK(err >= 0.004);
    CHECK(err <= 0.009);
}

TEST_CASE("triple solve orders and tightens with epsilon") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = bump_field(d);
    Problem prob = base_problem(d, field, saddle_sine);
    prob.epsilon = 0.3;
    prob.k_schedule = default_k_schedule(field, 4.0);
    const TripleSolution t = solve_triple(prob);

    double lower = 0.0, upper = 0.0;
    for (int n : d->interior_nodes()) {
        lower = std::max(lower, t.u_minus[n] - t.h[n]);
        upper = std::max(upper, t.h[n] - t.u_plus[n]);
    }
    CHECK(lower <= 1e-9);
    CHECK(upper <= 1e-9);
    CHECK(t.u_plus[d->index(4, 4)] - t.u_minus[d->index(4, 4)] > 1e-4);

    Problem halved = prob;
    halved.epsilon = 0.15;
    const TripleSolution t2 = solve_triple(halved);
    CHECK(diff_sup_norm(t2.u_plus, t2.u_minus) <
          diff_sup_norm(t.u_plus, t.u_minus));

    Problem degenerate = prob;
    degenerate.epsilon = 0.0;
    const TripleSolution t0 = solve_triple(degenerate);
    CHECK(diff_sup_norm(t0.u_plus, t0.u_minus) == 0.0);
    CHECK(diff_sup_norm(t0.u_plus, t0.h) == 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vexinf/exponent.hpp"

using namespace vexinf;

namespace {

double bump(double base, double amp, double cx, double cy, double sigma,
            double x, double y) {
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return base + amp * std::exp(-r2 / (2.0 * sigma * sigma));
}

}  // namespace

TEST_CASE("constant family") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const ExponentField field = exponent_constant(d, 2.5);
    CHECK(field.constant_p());
    CHECK(field.p_min == 2.5);
    CHECK(field.p_max == 2.5);
    CHECK(field.grad_log_p_sup == 0.0);
    for (int node : d->interior_nodes()) {
        CHECK(field.p[node] == 2.5);
        CHECK(field.grad_log_p[node][0] == 0.0);
        CHECK(field.grad_log_p[node][1] == 0.0);
    }
    CHECK_THROWS_AS(exponent_constant(d, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(exponent_constant(d, 0.5), std::invalid_argument);
}

TEST_CASE("affine family carries the exact log gradient") {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    const std::array<double, 2> a{1.0, -0.25};
    const ExponentField field = exponent_affine(d, a, 2.0);
    CHECK_FALSE(field.constant_p());
    for (int j = 0; j < 17; ++j)
        for (int i = 0; i < 17; ++i) {
            const auto pos = d->position(i, j);
            const double p = a[0] * pos[0] + a[1] * pos[1] + 2.0;
            const int node = d->index(i, j);
            CHECK(field.p[node] == doctest::Approx(p).epsilon(1e-15));
            CHECK(field.grad_log_p[node][0] ==
                  doctest::Approx(a[0] / p).epsilon(1e-15));
            CHECK(field.grad_log_p[node][1] ==
                  doctest::Approx(a[1] / p).epsilon(1e-15));
        }
    CHECK(field.p_min == doctest::Approx(2.0 - 0.25).epsilon(1e-15));
    CHECK(field.p_max == doctest::Approx(3.0).epsilon(1e-15));

    CHECK_THROWS_AS(exponent_affine(d, {-3.0, 0.0}, 2.0),
                    std::invalid_argument);
}

TEST_CASE("gaussian bump family matches the closed form") {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    const double base = 1.5, amp = 0.8, cx = 0.45, cy = 0.55, sigma = 0.15;
    const ExponentField field =
        exponent_gaussian_bump(d, base, amp, {cx, cy}, sigma);
    CHECK(field.p_min >= base - 1e-12);
    CHECK(field.p_max <= base + amp + 1e-12);
    for (int node : d->interior_nodes()) {
        const int i = node % 17;
        const int j = node / 17;
        const auto pos = d->position(i, j);
        const double p = bump(base, amp, cx, cy, sigma, pos[0], pos[1]);
        CHECK(field.p[node] == doctest::Approx(p).epsilon(1e-14));
        const double gauss = p - base;
        const double px = -gauss * (pos[0] - cx) / (sigma * sigma);
        const double py = -gauss * (pos[1] - cy) / (sigma * sigma);
        CHECK(field.grad_log_p[node][0] ==
              doctest::Approx(px / p).epsilon(1e-12));
        CHECK(field.grad_log_p[node][1] ==
              doctest::Approx(py / p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(exponent_gaussian_bump(d, 1.0, -0.5, {cx, cy}, sigma),
                    std::invalid_argument);
}

TEST_CASE("sampled exponents recover grad log p at second order inside") {
    const double base = 1.5, amp = 0.8, cx = 0.45, cy = 0.55, sigma = 0.15;
    double errs[2];
    const int sizes[2] = {17, 33};
    for (int level = 0; level < 2; ++level) {
        const int n = sizes[level];
        const DomainPtr d = make_domain(n, n, 1.0 / (n - 1));
        std::vector<double> samples(n * n, 0.0);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const auto pos = d->position(i, j);
                samples[d->index(i, j)] =
                    bump(base, amp, cx, cy, sigma, pos[0], pos[1]);
            }
        const ExponentField field = exponent_from_samples(d, samples);
        const ExponentField exact =
            exponent_gaussian_bump(d, base, amp, {cx, cy}, sigma);
        double err = 0.0;
        for (int node : d->interior_nodes()) {
            err = std::max(err, std::abs(field.grad_log_p[node][0] -
                                         exact.grad_log_p[node][0]));
            err = std::max(err, std::abs(field.grad_log_p[node][1] -
                                         exact.grad_log_p[node][1]));
        }
        errs[level] = err;
    }
    CHECK(std::log2(errs[0] / errs[1]) >= 1.9);
}

TEST_CASE("sampled exponents reject invalid values") {
    const DomainPtr d = make_domain(5, 5, 0.25);
    std::vector<double> good(25, 2.0);
    CHECK_NOTHROW(exponent_from_samples(d, good));

    std::vector<double> low = good;
    low[12] = 1.0;
    CHECK_THROWS_AS(exponent_from_samples(d, low), std::invalid_argument);

    std::vector<double> bad = good;
    bad[7] = std::nan("");
    CHECK_THROWS_AS(exponent_from_samples(d, bad), std::invalid_argument);

    std::vector<double> short_list(24, 2.0);
    CHECK_THROWS_AS(exponent_from_samples(d, short_list),
                    std::invalid_argument);
}

TEST_CASE("validate reports tampered fields without throwing") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    ExponentField field = exponent_constant(d, 2.0);
    CHECK(validate(field).ok);

    field.p[d->index(4, 4)] = 0.9;
    const ExponentDiagnostics diag = validate(field);
    CHECK_FALSE(diag.ok);
    CHECK(diag.violating_nodes.size() == 1);
    CHECK(diag.violating_nodes[0] == d->index(4, 4));
}

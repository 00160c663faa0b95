#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vexinf/grid.hpp"

using namespace vexinf;

namespace {

GridFunction random_field(const DomainPtr& domain, unsigned seed,
                          double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    GridFunction u(domain);
    for (int j = 0; j < domain->ny(); ++j)
        for (int i = 0; i < domain->nx(); ++i)
            if (domain->is_active(i, j)) u.at(i, j) = dist(rng);
    return u;
}

}  // namespace

TEST_CASE("rectangle node roles and counts") {
    const DomainPtr d3 = make_domain(3, 3, 0.5);
    CHECK(d3->interior_nodes().size() == 1);
    CHECK(d3->boundary_nodes().size() == 8);
    CHECK(d3->is_interior(1, 1));

    const DomainPtr d5 = make_domain(5, 5, 0.25);
    CHECK(d5->interior_nodes().size() == 9);
    CHECK(d5->boundary_nodes().size() == 16);

    const DomainPtr wide = make_domain(7, 4, 0.1);
    CHECK(wide->interior_nodes().size() == (7 - 2) * (4 - 2));
    CHECK(wide->boundary_nodes().size() == 7 * 4 - (7 - 2) * (4 - 2));
}

TEST_CASE("domain construction rejects degenerate shapes") {
    CHECK_THROWS_AS(make_domain(2, 5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(5, 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(5, 5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_domain(5, 5, -0.1), std::invalid_argument);
}

TEST_CASE("node positions and flat indexing") {
    const DomainPtr d = make_domain(9, 7, 0.125, Shape::Rectangle, {0.5, -1.0});
    CHECK(d->index(3, 2) == 2 * 9 + 3);
    const auto pos = d->position(3, 2);
    CHECK(pos[0] == doctest::Approx(0.5 + 3 * 0.125).epsilon(1e-15));
    CHECK(pos[1] == doctest::Approx(-1.0 + 2 * 0.125).epsilon(1e-15));
}

TEST_CASE("disk interior matches the brute-force strict-radius count") {
    const int n = 33;
    const double h = 1.0 / (n - 1);
    const DomainPtr disk = make_domain(n, n, h, Shape::Disk);
    const double cx = (n - 1) * h / 2.0;
    const double cy = cx;
    const double radius = (n - 1) * h / 2.0;

    long brute = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (std::hypot(i * h - cx, j * h - cy) < radius) ++brute;
    CHECK(static_cast<long>(disk->interior_nodes().size()) == brute);

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (!disk->is_boundary(i, j)) continue;
            CHECK(std::hypot(i * h - cx, j * h - cy) >= radius);
            const bool touches_interior =
                (i > 0 && disk->is_interior(i - 1, j)) ||
                (i < n - 1 && disk->is_interior(i + 1, j)) ||
                (j > 0 && disk->is_interior(i, j - 1)) ||
                (j < n - 1 && disk->is_interior(i, j + 1));
            CHECK(touches_interior);
        }

    for (int node : disk->interior_nodes()) {
        const int i = node % n;
        const int j = node / n;
        CHECK(disk->is_active(i - 1, j));
        CHECK(disk->is_active(i + 1, j));
        CHECK(disk->is_active(i, j - 1));
        CHECK(disk->is_active(i, j + 1));
    }
}

TEST_CASE("sampling evaluates the callable at node positions") {
    const DomainPtr d = make_domain(5, 5, 0.25);
    const GridFunction u =
        sample(d, [](double x, double y) { return 3.0 * x - y + 0.5; });
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) {
            const auto pos = d->position(i, j);
            CHECK(u.at(i, j) == 3.0 * pos[0] - pos[1] + 0.5);
        }
    CHECK_THROWS_AS(
        sample(d, [](double x, double) { return 1.0 / (x - 0.25); }),
        std::runtime_error);
}

TEST_CASE("centered gradient is exact on affine data") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const GridFunction u =
        sample(d, [](double x, double y) { return 2.0 * x - 0.75 * y; });
    for (int node : d->interior_nodes()) {
        const auto g = gradient_centered(u, node % 9, node / 9);
        CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(g[1] == doctest::Approx(-0.75).epsilon(1e-14));
    }
}

TEST_CASE("centered gradient converges at second order") {
    const auto f = [](double x, double y) {
        return std::sin(2.0 * x) * std::cos(y) + x * x * y;
    };
    const auto fx = [](double x, double y) {
        return 2.0 * std::cos(2.0 * x) * std::cos(y) + 2.0 * x * y;
    };
    const auto fy = [](double x, double y) {
        return -std::sin(2.0 * x) * std::sin(y) + x * x;
    };
    double errs[2];
    const int sizes[2] = {17, 33};
    for (int level = 0; level < 2; ++level) {
        const int n = sizes[level];
        const double h = 1.0 / (n - 1);
        const DomainPtr d = make_domain(n, n, h);
        const GridFunction u = sample(d, f);
        double err = 0.0;
        for (int node : d->interior_nodes()) {
            const int i = node % n;
            const int j = node / n;
            const auto pos = d->position(i, j);
            const auto g = gradient_centered(u, i, j);
            err = std::max(err, std::abs(g[0] - fx(pos[0], pos[1])));
            err = std::max(err, std::abs(g[1] - fy(pos[0], pos[1])));
        }
        errs[level] = err;
    }
    const double order = std::log2(errs[0] / errs[1]);
    CHECK(order >= 1.9);
}

TEST_CASE("upwind magnitude is exact on affine data and first order") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const GridFunction u =
        sample(d, [](double x, double y) { return -1.5 * x + 2.0 * y; });
    const double expected = std::hypot(-1.5, 2.0);
    for (int node : d->interior_nodes()) {
        const double m = gradient_magnitude_upwind(u, node % 9, node / 9);
        CHECK(m == doctest::Approx(expected).epsilon(1e-14));
    }

    const auto f = [](double x, double y) {
        return std::exp(0.7 * x) + std::sin(1.3 * y);
    };
    const auto mag = [](double x, double y) {
        return std::hypot(0.7 * std::exp(0.7 * x), 1.3 * std::cos(1.3 * y));
    };
    double errs[2];
    const int sizes[2] = {17, 33};
    for (int level = 0; level < 2; ++level) {
        const int n = sizes[level];
        const DomainPtr dn = make_domain(n, n, 1.0 / (n - 1));
        const GridFunction un = sample(dn, f);
        double err = 0.0;
        for (int node : dn->interior_nodes()) {
            const int i = node % n;
            const int j = node / n;
            const auto pos = dn->position(i, j);
            err = std::max(err, std::abs(gradient_magnitude_upwind(un, i, j) -
                                         mag(pos[0], pos[1])));
        }
        errs[level] = err;
    }
    CHECK(errs[1] < errs[0]);
    CHECK(std::log2(errs[0] / errs[1]) >= 0.8);
}

TEST_CASE("sup norms satisfy the norm axioms") {
    const DomainPtr d = make_domain(9, 9, 0.125);
    const GridFunction u = random_field(d, 11);
    const GridFunction v = random_field(d, 12);
    CHECK(sup_norm(u) >= 0.0);
    CHECK(diff_sup_norm(u, u) == 0.0);
    CHECK(diff_sup_norm(u, v) == diff_sup_norm(v, u));

    GridFunction w(d);
    double triangle = 0.0;
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 9; ++i) {
            w.at(i, j) = u.at(i, j) + v.at(i, j);
            triangle = std::max(triangle, std::abs(w.at(i, j)));
        }
    CHECK(sup_norm(w) <= sup_norm(u) + sup_norm(v) + 1e-15);
    CHECK(sup_norm(w) == triangle);

    const DomainPtr other = make_domain(9, 9, 0.25);
    CHECK_THROWS_AS(diff_sup_norm(u, GridFunction(other)),
                    std::invalid_argument);
}

TEST_CASE("boundary data and Lipschitz estimation") {
    const DomainPtr d = make_domain(17, 17, 0.0625);
    const BoundaryData affine = boundary_data_from_function(
        d, [](double x, double y) { return 2.0 * x + 0.0 * y; });
    CHECK(affine.lipschitz_constant == doctest::Approx(2.0).epsilon(1e-13));

    const BoundaryData cone = boundary_data_from_function(
        d, [](double x, double y) { return std::hypot(x + 1.0, y + 1.0); });
    CHECK(cone.lipschitz_constant <= 1.0 + 1e-12);
    CHECK(cone.lipschitz_constant >= 0.5);

    for (int node : d->boundary_nodes()) {
        const int i = node % 17;
        const int j = node / 17;
        const auto pos = d->position(i, j);
        CHECK(affine.values[node] == 2.0 * pos[0]);
    }
}

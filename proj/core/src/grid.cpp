#include "vexinf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace vexinf {

namespace {

void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

}  // namespace

Domain::Domain(int nx, int ny, double h, std::array<double, 2> origin,
               std::vector<NodeRole> roles)
    : nx_(nx), ny_(ny), h_(h), origin_(origin), roles_(std::move(roles)) {
    require(nx_ >= 3 && ny_ >= 3, "Domain: nx and ny must be >= 3");
    require(h_ > 0.0 && std::isfinite(h_), "Domain: h must be positive");
    require(roles_.size() == static_cast<std::size_t>(nx_) * ny_,
            "Domain: roles size must be nx*ny");
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const NodeRole r = roles_[index(i, j)];
            if (r == NodeRole::Interior) {
                require(i > 0 && i < nx_ - 1 && j > 0 && j < ny_ - 1,
                        "Domain: interior node on the grid edge");
                require(is_active(i - 1, j) && is_active(i + 1, j) &&
                            is_active(i, j - 1) && is_active(i, j + 1),
                        "Domain: interior node with inactive neighbor");
                interior_nodes_.push_back(index(i, j));
                ++interior_count_;
            } else if (r == NodeRole::Boundary) {
                boundary_nodes_.push_back(index(i, j));
                ++boundary_count_;
            }
        }
    }
}

bool Domain::same_layout(const Domain& other) const {
    return nx_ == other.nx_ && ny_ == other.ny_ && h_ == other.h_ &&
           origin_ == other.origin_ && roles_ == other.roles_;
}

DomainPtr make_domain(int nx, int ny, double h, Shape shape,
                      std::array<double, 2> origin) {
    require(nx >= 3 && ny >= 3, "make_domain: nx and ny must be >= 3");
    require(h > 0.0 && std::isfinite(h), "make_domain: h must be positive");
    std::vector<NodeRole> roles(static_cast<std::size_t>(nx) * ny,
                                NodeRole::Outside);
    auto idx = [nx](int i, int j) { return j * nx + i; };
    if (shape == Shape::Rectangle) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                roles[idx(i, j)] =
                    (i > 0 && i < nx - 1 && j > 0 && j < ny - 1)
                        ? NodeRole::Interior
                        : NodeRole::Boundary;
    } else {
        const double cx = origin[0] + (nx - 1) * h / 2.0;
        const double cy = origin[1] + (ny - 1) * h / 2.0;
        const double radius = std::min(nx - 1, ny - 1) * h / 2.0;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const double dx = origin[0] + i * h - cx;
                const double dy = origin[1] + j * h - cy;
                if (std::sqrt(dx * dx + dy * dy) < radius)
                    roles[idx(i, j)] = NodeRole::Interior;
            }
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                if (roles[idx(i, j)] == NodeRole::Interior) continue;
                const bool near_interior =
                    (i > 0 && roles[idx(i - 1, j)] == NodeRole::Interior) ||
                    (i < nx - 1 && roles[idx(i + 1, j)] == NodeRole::Interior) ||
                    (j > 0 && roles[idx(i, j - 1)] == NodeRole::Interior) ||
                    (j < ny - 1 && roles[idx(i, j + 1)] == NodeRole::Interior);
                if (near_interior) roles[idx(i, j)] = NodeRole::Boundary;
            }
    }
    return std::make_shared<const Domain>(nx, ny, h, origin, std::move(roles));
}

GridFunction::GridFunction(DomainPtr domain)
    : domain_(std::move(domain)), values_(domain_->size(), 0.0) {}

GridFunction::GridFunction(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_->size())
        throw std::invalid_argument("GridFunction: values size must be nx*ny");
}

GridFunction sample(const DomainPtr& domain,
                    const std::function<double(double, double)>& phi) {
    GridFunction u(domain);
    for (int j = 0; j < domain->ny(); ++j)
        for (int i = 0; i < domain->nx(); ++i) {
            const auto pos = domain->position(i, j);
            const double v = phi(pos[0], pos[1]);
            if (!std::isfinite(v)) {
                if (domain->is_active(i, j))
                    throw std::runtime_error(
                        "sample: non-finite value at an active node");
                continue;
            }
            u.at(i, j) = v;
        }
    return u;
}

std::array<double, 2> gradient_centered(const GridFunction& u, int i, int j) {
    const Domain& d = u.domain();
    require(d.is_interior(i, j), "gradient_centered: node must be interior");
    const double h = d.h();
    return {(u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * h),
            (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * h)};
}

double gradient_magnitude_upwind(const GridFunction& u, int i, int j) {
    const Domain& d = u.domain();
    require(d.is_interior(i, j),
            "gradient_magnitude_upwind: node must be interior");
    const double h = d.h();
    const double c = u.at(i, j);
    const double a = (c - u.at(i - 1, j)) / h;
    const double b = (u.at(i + 1, j) - c) / h;
    const double cc = (c - u.at(i, j - 1)) / h;
    const double dd = (u.at(i, j + 1) - c) / h;
    const double m_plus = std::hypot(std::max({a, -b, 0.0}),
                                     std::max({cc, -dd, 0.0}));
    const double m_minus = std::hypot(std::max({-a, b, 0.0}),
                                      std::max({-cc, dd, 0.0}));
    return std::max(m_plus, m_minus);
}

double sup_norm(const GridFunction& u) {
    const Domain& d = u.domain();
    double s = 0.0;
    for (int n : d.interior_nodes()) s = std::max(s, std::abs(u[n]));
    for (int n : d.boundary_nodes()) s = std::max(s, std::abs(u[n]));
    return s;
}

double diff_sup_norm(const GridFunction& u, const GridFunction& v) {
    if (!u.domain().same_layout(v.domain()))
        throw std::invalid_argument("diff_sup_norm: domain layout mismatch");
    const Domain& d = u.domain();
    double s = 0.0;
    for (int n : d.interior_nodes()) s = std::max(s, std::abs(u[n] - v[n]));
    for (int n : d.boundary_nodes()) s = std::max(s, std::abs(u[n] - v[n]));
    return s;
}

BoundaryData boundary_data_from_function(
    const DomainPtr& domain, const std::function<double(double, double)>& f) {
    BoundaryData data;
    data.domain = domain;
    data.values = sample(domain, f).values();
    data.lipschitz_constant = estimate_lipschitz(data);
    return data;
}

double estimate_lipschitz(const BoundaryData& f) {
    const Domain& d = *f.domain;
    const auto& nodes = d.boundary_nodes();
    if (nodes.size() < 2)
        throw std::invalid_argument(
            "estimate_lipschitz: need at least 2 boundary nodes");
    double lip = 0.0;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const int na = nodes[a];
        const double xa = d.origin()[0] + (na % d.nx()) * d.h();
        const double ya = d.origin()[1] + (na / d.nx()) * d.h();
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const int nb = nodes[b];
            const double xb = d.origin()[0] + (nb % d.nx()) * d.h();
            const double yb = d.origin()[1] + (nb / d.nx()) * d.h();
            const double dist = std::hypot(xa - xb, ya - yb);
            lip = std::max(lip, std::abs(f.values[na] - f.values[nb]) / dist);
        }
    }
    return lip;
}

}  // namespace vexinf

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace vexinf {

enum class NodeRole : unsigned char { Outside = 0, Boundary = 1, Interior = 2 };

enum class Shape { Rectangle, Disk };

// Uniform 2D grid. Row-major node indexing: flat = j*nx + i, node position =
// origin + (i*h, j*h). Active nodes are the interior and boundary nodes;
// Outside nodes (disk shape only) carry no data constraints.
class Domain {
public:
    Domain(int nx, int ny, double h, std::array<double, 2> origin,
           std::vector<NodeRole> roles);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    const std::array<double, 2>& origin() const { return origin_; }

    std::size_t size() const { return roles_.size(); }
    int index(int i, int j) const { return j * nx_ + i; }
    std::array<double, 2> position(int i, int j) const {
        return {origin_[0] + i * h_, origin_[1] + j * h_};
    }

    NodeRole role(int i, int j) const { return roles_[index(i, j)]; }
    bool is_interior(int i, int j) const { return role(i, j) == NodeRole::Interior; }
    bool is_boundary(int i, int j) const { return role(i, j) == NodeRole::Boundary; }
    bool is_active(int i, int j) const { return role(i, j) != NodeRole::Outside; }

    int interior_count() const { return interior_count_; }
    int boundary_count() const { return boundary_count_; }
    const std::vector<int>& interior_nodes() const { return interior_nodes_; }
    const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }

    bool same_layout(const Domain& other) const;

private:
    int nx_;
    int ny_;
    double h_;
    std::array<double, 2> origin_;
    std::vector<NodeRole> roles_;
    std::vector<int> interior_nodes_;
    std::vector<int> boundary_nodes_;
    int interior_count_ = 0;
    int boundary_count_ = 0;
};

using DomainPtr = std::shared_ptr<const Domain>;

// Throws std::invalid_argument if nx or ny < 3 or h <= 0. The disk shape is
// inscribed in the rectangle; its boundary nodes are the non-interior nodes
// with at least one interior 4-neighbor, remaining nodes are Outside.
DomainPtr make_domain(int nx, int ny, double h,
                      Shape shape = Shape::Rectangle,
                      std::array<double, 2> origin = {0.0, 0.0});

class GridFunction {
public:
    explicit GridFunction(DomainPtr domain);
    GridFunction(DomainPtr domain, std::vector<double> values);

    const Domain& domain() const { return *domain_; }
    const DomainPtr& domain_ptr() const { return domain_; }

    double& operator[](int flat) { return values_[flat]; }
    double operator[](int flat) const { return values_[flat]; }
    double& at(int i, int j) { return values_[domain_->index(i, j)]; }
    double at(int i, int j) const { return values_[domain_->index(i, j)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

private:
    DomainPtr domain_;
    std::vector<double> values_;
};

// Samples phi at every node position. Throws std::runtime_error if phi is
// non-finite at an active node.
GridFunction sample(const DomainPtr& domain,
                    const std::function<double(double, double)>& phi);

// Centered gradient ((u_E-u_W)/(2h), (u_N-u_S)/(2h)). Throws
// std::invalid_argument if the node is not interior.
std::array<double, 2> gradient_centered(const GridFunction& u, int i, int j);

// Godunov-style monotone gradient magnitude. With one-sided differences
// a = (u_C-u_W)/h, b = (u_E-u_C)/h, c = (u_C-u_S)/h, d = (u_N-u_C)/h:
//   m+ = hypot(max(a, -b, 0), max(c, -d, 0))
//   m- = hypot(max(-a, b, 0), max(-c, d, 0))
//   result = max(m+, m-).
// Exact on affine data and >= the centered magnitude on monotone data.
double gradient_magnitude_upwind(const GridFunction& u, int i, int j);

// Max of |u| (resp. |u-v|) over active nodes. diff_sup_norm throws
// std::invalid_argument on domain layout mismatch.
double sup_norm(const GridFunction& u);
double diff_sup_norm(const GridFunction& u, const GridFunction& v);

// Dirichlet data on the boundary nodes. values is full-size; only entries at
// boundary nodes are meaningful.
struct BoundaryData {
    DomainPtr domain;
    std::vector<double> values;
    double lipschitz_constant = 0.0;
};

BoundaryData boundary_data_from_function(
    const DomainPtr& domain, const std::function<double(double, double)>& f);

// Max over boundary node pairs of |f(x)-f(y)|/|x-y|. Throws
// std::invalid_argument with fewer than 2 boundary nodes.
double estimate_lipschitz(const BoundaryData& f);

}  // namespace vexinf

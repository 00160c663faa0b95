#pragma once

#include <array>
#include <span>
#include <vector>

#include "vexinf/grid.hpp"

namespace vexinf {

// <|b|^{q-2} b - |a|^{q-2} a, b - a> - 2^{2-q} |b-a|^q, with |0|^{q-2}*0
// taken as the zero vector. Nonnegative for q >= 2; throws
// std::invalid_argument for q < 2.
double monotonicity_inequality_gap(std::span<const double> a,
                                   std::span<const double> b, double q);

// Parameters of g(t) = alpha^{-1} log(1 + A(e^{alpha t} - 1)). Construction
// rejects A outside (1,2) and alpha <= 0.
struct GFunctionParams {
    GFunctionParams(double alpha, double A);
    double alpha;
    double A;
};

// Evaluated via the large-t stable rearrangements
//   g(t)    = t + alpha^{-1} ln(A + (1-A) e^{-alpha t})
//   g'(t)   = A / (A + (1-A) e^{-alpha t})
//   g^{-1}(s) = s + alpha^{-1} ln(1/A + (1-1/A) e^{-alpha s})
// which hit the asymptote g(t) -> t + alpha^{-1} ln A automatically once
// e^{-alpha t} underflows (alpha t > ~708). Inputs must be >= 0.
double g_eval(double t, const GFunctionParams& params);
double g_prime(double t, const GFunctionParams& params);
double g_inverse(double s, const GFunctionParams& params);

struct GPropertyReport {
    bool ok = true;
    // Worst slack per property; negative slack means a violation.
    double identity_slack = 0.0;      // band bounds on g - t and g' - 1
    double ratio_residual = 0.0;      // |g''/g' + alpha (g'-1)| via FD g''
    double log_bound_slack = 0.0;     // 0 <= ln g' <= g' - 1
    std::vector<double> violations;   // t values that failed
};

// Checks at each sample: 0 < g(t)-t < (A-1)/alpha and 0 < g'(t)-1 < A-1 for
// t > 0 (t = 0 is the boundary case with g(0) = 0, g'(0) = A), the identity
// g''/g' = -alpha (g'-1) with a finite-difference g'' (tolerance fd_tol), and
// 0 <= ln g' <= g'-1.
GPropertyReport check_g_properties(const GFunctionParams& params,
                                   const std::vector<double>& t_samples,
                                   double fd_tol = 1e-6);

enum class ReferenceKind { AffineUnitGradient, Cone, Aronsson };

struct ReferenceSolution {
    GridFunction u;
    // Set for a cone whose vertex lies inside the closed domain: |x - x0| is
    // then only a subsolution, not a solution.
    bool subsolution_only = false;
};

struct ReferenceSpec {
    std::array<double, 2> direction = {1.0, 0.0};  // affine: unit gradient e
    std::array<double, 2> vertex = {-1.0, -1.0};   // cone vertex x0
};

// Sampled analytic reference functions used as solver oracles. The Aronsson
// function x^{4/3} - y^{4/3} requires a domain avoiding the coordinate axes
// (throws std::invalid_argument otherwise).
ReferenceSolution reference_solution(ReferenceKind kind, const DomainPtr& domain,
                                     const ReferenceSpec& spec = {});

}  // namespace vexinf

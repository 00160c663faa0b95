#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vexinf/exponent.hpp"
#include "vexinf/grid.hpp"
#include "vexinf/operators.hpp"
#include "vexinf/solvers.hpp"

namespace vexinf {

struct ComparisonReport {
    // max over interior nodes of (u_sub - v_super)+.
    double worst_violation = 0.0;
    long violating_nodes = 0;
    bool ordered = false;
};

// Checks the comparison-principle ordering u_sub <= v_super in the interior.
// Boundary ordering is a precondition: a boundary violation beyond slack
// throws std::invalid_argument (distinct from an interior violation, which is
// only reported).
ComparisonReport check_comparison(const GridFunction& u_sub,
                                  const GridFunction& v_super,
                                  double slack = 0.0);

struct SandwichReport {
    std::vector<double> epsilons;
    // sup |u+ - u-| for each epsilon, same order as epsilons.
    std::vector<double> gaps;
    // worst ordering violation across all epsilons and both h comparisons.
    double worst_violation = 0.0;
    // least-squares slope of log(gap) against log(eps), floor-filtered.
    double kappa = 0.0;
    // RMS residual of the kappa regression over the fitted points.
    double kappa_residual = 0.0;
    bool gaps_decreasing = false;
    // h solve first, then the (u+, u-) pair per epsilon.
    std::vector<SolveReport> reports;
};

// Solves u- <= h <= u+ for each epsilon and collects the squeeze diagnostics.
// Epsilons must be strictly decreasing and inside (0,1). The kappa fit drops
// gaps within 50x of the solver tolerance floor.
SandwichReport sandwich_experiment(const Problem& base,
                                   const std::vector<double>& epsilons);

struct HarnackReport {
    std::array<double, 2> center{};
    double radius = 0.0;
    // sup_{B_R} u / (inf_{B_R} u + R)
    double harnack_constant = 0.0;
    double sup_ball = 0.0;
    double inf_ball = 0.0;
    // sup of u over B_2R, the quantity the Harnack constant may depend on.
    double sup_ball_2r = 0.0;
    // Largest two-point log-slope of v = u + R (or u + R^alpha) over B_R.
    double required_slope = 0.0;
    // Smallest feasible (C1, C2) on the log grid: C2/R + C1*M >= S* with
    // M = sup over B_2R of v.
    bool feasible = false;
    double c1 = 0.0;
    double c2 = 0.0;
    double sup_norm_v = 0.0;
    long nodes_in_ball = 0;
};

// Evaluates the Harnack ratio and the multiplicative two-point inequality
//   v(x) <= exp(C2 |x-y| / R) exp(C1 ||v||_inf |x-y|) v(y),  v = u + R,
// over node pairs of the concentric ball B_R. u must be nonnegative on B_2R
// and B_2R must be contained in the domain (std::invalid_argument otherwise,
// as for balls with fewer than two nodes). alpha, when present, switches the
// additive term from R to R^alpha. The (C1, C2) search runs over a 50x50
// logarithmic grid on [1e-4, 1e4]^2; the reported pair minimizes C1 + C2.
HarnackReport harnack_check(const GridFunction& u,
                            const std::array<double, 2>& center, double radius,
                            std::optional<double> alpha = std::nullopt);

struct CutoffFunction {
    GridFunction zeta;
    std::array<double, 2> center{};
    double radius = 0.0;
};

// zeta = min(1, (2R - r)+ / R): identically 1 on B_R, supported in B_2R,
// Lipschitz with constant 1/R.
CutoffFunction build_cutoff(DomainPtr domain,
                            const std::array<double, 2>& center, double radius);

struct CaccioppoliReport {
    // max over interior nodes of |zeta grad log u|^{p(x)}.
    double lhs = 0.0;
    // max over interior nodes of |grad zeta + zeta ln(zeta/u) grad log p|^{p(x)}
    // plus C*h.
    double rhs = 0.0;
    double gap = 0.0;  // lhs - rhs, negative means the bound holds
    bool holds = false;
    double c_constant = 0.0;
    double u_min = 0.0;
};

// Discrete Caccioppoli-type gradient bound for a strictly positive
// supersolution-like field u on the support of the cutoff. Gradients are
// centered. Throws std::invalid_argument if u is not strictly positive on
// the cutoff support.
CaccioppoliReport caccioppoli_check(const GridFunction& u,
                                    const ExponentField& field,
                                    const CutoffFunction& cutoff,
                                    double c_constant = 1.0);

struct ConvergenceReport {
    std::vector<double> hs;
    std::vector<double> errors;
    // least-squares slope of log(error) against log(h).
    double fitted_order = 0.0;
    // error(h) / error(h/2) for consecutive levels.
    std::vector<double> halving_factors;
    // All errors at round-off scale; the fit is skipped.
    bool exact = false;
};

// Log-log order fit of a precomputed error sequence. hs must be strictly
// decreasing with >= 2 entries matching errors (std::invalid_argument).
ConvergenceReport convergence_order(const std::vector<double>& hs,
                                    const std::vector<double>& errors);

// Discrete-vs-continuous consistency of the full operator for a smooth probe
// on the unit square anchored at origin: grids n = round(1/h)+1 per h, errors
// sampled at the interior lattice points of the coarsest grid, normalized
// continuous reference (Delta_inf + |grad|^2 ln|grad| <grad, grad log p>) /
// |grad|^2. hs must be >= 3 strictly decreasing entries, each dividing hs[0]
// into an integer number of steps; the probe gradient magnitude must stay
// >= 1e-8 at the sample points (std::invalid_argument otherwise).
ConvergenceReport operator_consistency_order(
    const SmoothProbe& probe,
    const std::function<ExponentField(const DomainPtr&)>& exponent_factory,
    const std::vector<double>& hs,
    std::array<double, 2> origin = {0.0, 0.0},
    LogScheme scheme = LogScheme::UpwindMagnitude);

struct LipschitzReport {
    double grad_sup = 0.0;
    double boundary_lipschitz = 0.0;
    double ratio = 0.0;
};

// Ratio of the interior centered-gradient magnitude sup-norm to the
// boundary-data Lipschitz constant.
LipschitzReport lipschitz_bound_check(const GridFunction& u,
                                      const BoundaryData& boundary);

// Largest |ln v(x) - ln v(y)| / |x - y| over node pairs of a positive field
// restricted to the ball; the Harnack feasibility target.
double max_log_slope(const GridFunction& v, const std::array<double, 2>& center,
                     double radius);

}  // namespace vexinf

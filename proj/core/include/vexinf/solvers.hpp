#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vexinf/exponent.hpp"
#include "vexinf/grid.hpp"
#include "vexinf/operators.hpp"

namespace vexinf {

struct Tolerances {
    // residual_tol <= 0 means the default 1e-8*(1 + Lipschitz(f)).
    double residual_tol = 0.0;
    // Gradient sup-norm target for energy minimization.
    double step_tol = 1e-10;
    long max_iters = 100000;
};

struct Problem {
    DomainPtr domain;
    BoundaryData boundary;
    ExponentField exponent;
    double epsilon = 0.0;
    std::vector<double> k_schedule;
    Tolerances tolerances;
    LogScheme scheme = LogScheme::UpwindMagnitude;
    double gs_damping = 0.8;
};

// Throws std::invalid_argument on: epsilon outside [0,1), k_schedule not
// strictly increasing, or k*p_min < 2 for any scheduled k.
void validate_problem(const Problem& problem);

// Builds k from k*p_min doubling targets 2, 4, ..., kp_max.
std::vector<double> default_k_schedule(const ExponentField& field,
                                       double kp_max = 64.0);

struct SolveReport {
    long iterations = 0;
    double final_residual = 0.0;
    double final_energy = 0.0;
    double k_reached = 0.0;
    double wall_time_ms = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
    // Sup-distance between consecutive k-stage minimizers (Cauchy behavior).
    std::vector<double> k_gaps;
    std::vector<double> residual_history;
};

// Discrete variational integral
//   E(u) = h^2 sum_cells |D+ u|^{kp}/(kp) - sign h^2 sum_interior eps^{kp-1} u
// with the forward-difference cell gradient D+ u = ((u_E-u)/h, (u_N-u)/h) and
// kp evaluated at the cell base node. All powers run through exp(q ln g) with
// the exponent capped at 700 and ln-arguments below 1e-300 treated as 0.
// sign +1 is the upper-equation functional, -1 the lower, 0 the equation.
// Throws std::runtime_error if the result is non-finite.
double energy(const GridFunction& u, double k, const ExponentField& field,
              double epsilon, int sign);

// Partial derivatives of energy with respect to interior nodal values;
// boundary entries are zero.
GridFunction energy_gradient(const GridFunction& u, double k,
                             const ExponentField& field, double epsilon,
                             int sign);

// Combined evaluation used by the minimizer: energy, gradient, and the
// diagonal preconditioner 1 + sum over adjacent cells of (q-1)|D+ u|^{q-2}.
struct EnergyEval {
    double energy = 0.0;
    std::vector<double> gradient;
    std::vector<double> precond;
};
EnergyEval energy_with_gradient(const GridFunction& u, double k,
                                const ExponentField& field, double epsilon,
                                int sign);

// Monotone L-BFGS (m = 10, two-loop recursion) with Armijo backtracking;
// the energy is non-increasing across accepted steps. Falls back to the
// preconditioned steepest-descent direction whenever the L-BFGS direction is
// not a descent direction. Terminates on gradient sup-norm <= step_tol, on
// three consecutive steps moving less than 1e-13*(1 + sup|u|), on line-search
// failure (warning), or on max_iters (warning). Boundary nodes stay pinned to
// the problem's boundary data.
std::pair<GridFunction, SolveReport> minimize_energy(
    const Problem& problem, double k, int sign,
    const std::optional<GridFunction>& warm_start = std::nullopt);

// Warm-started continuation along k_schedule; the last iterate is the
// k->infinity surrogate (sign +1: u+, sign -1: u-, sign 0: h-candidate).
std::pair<GridFunction, SolveReport> solve_variational_limit(
    const Problem& problem, int sign);

// Damped red-black nonlinear Gauss-Seidel on the discrete operator:
//   u(node) <- (1-w) u(node) + w [ (max_nb+min_nb)/2
//                                  + (h^2/2) ln(m) <g_c, grad log p> ]
// with m and g_c frozen from the current iterate and the log term zeroed at
// gradient-degenerate nodes. With a constant exponent field the update is the
// bit-exact pure branch (max_nb+min_nb)/2. Converges when the residual-field
// sup-norm reaches the effective residual tolerance.
std::pair<GridFunction, SolveReport> solve_direct(const Problem& problem);

struct TripleSolution {
    GridFunction u_minus;
    GridFunction h;
    GridFunction u_plus;
    SolveReport report_minus;
    SolveReport report_h;
    SolveReport report_plus;
};

// The three variational-limit solves with signs -1, 0, +1 on the same
// boundary data and k_schedule.
TripleSolution solve_triple(const Problem& problem);

double effective_residual_tol(const Problem& problem);

}  // namespace vexinf

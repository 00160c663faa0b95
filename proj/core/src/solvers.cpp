#include "vexinf/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vexinf {

namespace {

constexpr double kExpCap = 700.0;
constexpr double kLogFloor = 1e-300;
constexpr double kArmijoC = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr int kLbfgsMemory = 10;
constexpr double kStagnationTol = 1e-13;
constexpr int kStagnationRuns = 3;

double capped_pow(double base, double expo) {
    // exp(expo * ln base) with the exponent capped at exp(700); base <= 0
    // never reaches here.
    return std::exp(std::min(expo * std::log(std::max(base, kLogFloor)), kExpCap));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double sup_abs(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s = std::max(s, std::abs(x));
    return s;
}

GridFunction cold_start(const Problem& problem) {
    GridFunction u(problem.domain);
    const Domain& d = *problem.domain;
    double mean = 0.0;
    for (int n : d.boundary_nodes()) mean += problem.boundary.values[n];
    mean /= static_cast<double>(d.boundary_count());
    for (int n : d.interior_nodes()) u[n] = mean;
    for (int n : d.boundary_nodes()) u[n] = problem.boundary.values[n];
    return u;
}

struct EnergyCore {
    double energy = 0.0;
    bool finite = true;
};

// Forward-difference cell energy shared by energy() and the minimizer; the
// gradient/preconditioner accumulation is optional so line-search probes pay
// for the scalar only.
EnergyCore accumulate(const GridFunction& u, double k,
                      const ExponentField& field, double epsilon, int sign,
                      std::vector<double>* gradient,
                      std::vector<double>* precond) {
    const Domain& d = u.domain();
    const double h = d.h();
    const int nx = d.nx();
    const int ny = d.ny();
    double cell_sum = 0.0;
    bool cells_finite = true;
    if (gradient) std::fill(gradient->begin(), gradient->end(), 0.0);
    if (precond) std::fill(precond->begin(), precond->end(), 1.0);
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const int n = j * nx + i;
            const int east = n + 1;
            const int north = n + nx;
            if (!d.is_active(i, j) || !d.is_active(i + 1, j) ||
                !d.is_active(i, j + 1))
                continue;
            const double gx = (u[east] - u[n]) / h;
            const double gy = (u[north] - u[n]) / h;
            const double g = std::sqrt(gx * gx + gy * gy);
            if (!std::isfinite(g)) cells_finite = false;
            const double qc = k * field.p[n];
            double w = 0.0;
            double coef = qc == 2.0 ? 1.0 : 0.0;
            if (g > 0.0) {
                w = capped_pow(g, qc) / qc;
                coef = capped_pow(g, qc - 2.0);
            }
            cell_sum += w;
            if (gradient) {
                const double fx = coef * gx;
                const double fy = coef * gy;
                (*gradient)[n] -= h * (fx + fy);
                (*gradient)[east] += h * fx;
                (*gradient)[north] += h * fy;
            }
            if (precond) {
                const double wgt = (qc - 1.0) * coef;
                (*precond)[n] += wgt;
                (*precond)[east] += wgt;
                (*precond)[north] += wgt;
            }
        }
    }
    double source_sum = 0.0;
    if (sign != 0 && epsilon > 0.0) {
        const double ln_eps = std::log(epsilon);
        for (int n : d.interior_nodes()) {
            const double src = std::exp((k * field.p[n] - 1.0) * ln_eps);
            source_sum += src * u[n];
            if (gradient) (*gradient)[n] -= sign * h * h * src;
        }
    }
    if (gradient) {
        for (std::size_t n = 0; n < gradient->size(); ++n) {
            const int i = static_cast<int>(n) % nx;
            const int j = static_cast<int>(n) / nx;
            if (!d.is_interior(i, j)) (*gradient)[n] = 0.0;
        }
    }
    EnergyCore out;
    out.energy = h * h * cell_sum - sign * h * h * source_sum;
    out.finite = cells_finite && std::isfinite(out.energy);
    return out;
}

double log_term_magnitude(const GridFunction& u, int i, int j,
                          LogScheme scheme) {
    if (scheme == LogScheme::UpwindMagnitude)
        return gradient_magnitude_upwind(u, i, j);
    const auto gc = gradient_centered(u, i, j);
    return std::hypot(gc[0], gc[1]);
}

}  // namespace

void validate_problem(const Problem& problem) {
    if (!problem.domain)
        throw std::invalid_argument("Problem: domain must be set");
    const Domain& d = *problem.domain;
    if (d.interior_count() < 1)
        throw std::invalid_argument("Problem: domain has no interior nodes");
    if (!problem.boundary.domain || !problem.boundary.domain->same_layout(d))
        throw std::invalid_argument("Problem: boundary domain layout mismatch");
    if (problem.boundary.values.size() != d.size())
        throw std::invalid_argument("Problem: boundary values size mismatch");
    if (!problem.exponent.domain || !problem.exponent.domain->same_layout(d))
        throw std::invalid_argument("Problem: exponent domain layout mismatch");
    for (int n : d.boundary_nodes())
        if (!std::isfinite(problem.boundary.values[n]))
            throw std::invalid_argument("Problem: non-finite boundary value");
    if (!std::isfinite(problem.boundary.lipschitz_constant) ||
        problem.boundary.lipschitz_constant < 0.0)
        throw std::invalid_argument("Problem: invalid Lipschitz constant");
    if (!(problem.epsilon >= 0.0 && problem.epsilon < 1.0))
        throw std::invalid_argument("Problem: epsilon must lie in [0,1)");
    double prev = 0.0;
    for (std::size_t s = 0; s < problem.k_schedule.size(); ++s) {
        const double k = problem.k_schedule[s];
        if (s > 0 && !(k > prev))
            throw std::invalid_argument(
                "Problem: k_schedule must be strictly increasing");
        if (k * problem.exponent.p_min < 2.0 - 1e-9)
            throw std::invalid_argument(
                "Problem: k_schedule requires k*p_min >= 2");
        prev = k;
    }
    if (problem.tolerances.max_iters < 1)
        throw std::invalid_argument("Problem: max_iters must be >= 1");
    if (!(problem.tolerances.step_tol > 0.0))
        throw std::invalid_argument("Problem: step_tol must be > 0");
    if (!(problem.gs_damping > 0.0 && problem.gs_damping <= 1.0))
        throw std::invalid_argument("Problem: gs_damping must lie in (0,1]");
}

std::vector<double> default_k_schedule(const ExponentField& field,
                                       double kp_max) {
    if (!(kp_max >= 2.0))
        throw std::invalid_argument("default_k_schedule: kp_max must be >= 2");
    std::vector<double> ks;
    for (double target = 2.0; target <= kp_max * (1.0 + 1e-12); target *= 2.0)
        ks.push_back(target / field.p_min);
    return ks;
}

double effective_residual_tol(const Problem& problem) {
    if (problem.tolerances.residual_tol > 0.0)
        return problem.tolerances.residual_tol;
    return 1e-8 * (1.0 + problem.boundary.lipschitz_constant);
}

double energy(const GridFunction& u, double k, const ExponentField& field,
              double epsilon, int sign) {
    if (!u.domain().same_layout(*field.domain))
        throw std::invalid_argument("energy: domain layout mismatch");
    const EnergyCore core = accumulate(u, k, field, epsilon, sign, nullptr,
                                       nullptr);
    if (!core.finite)
        throw std::runtime_error("energy: overflow despite log-domain terms");
    return core.energy;
}

GridFunction energy_gradient(const GridFunction& u, double k,
                             const ExponentField& field, double epsilon,
                             int sign) {
    if (!u.domain().same_layout(*field.domain))
        throw std::invalid_argument("energy_gradient: domain layout mismatch");
    std::vector<double> grad(u.domain().size(), 0.0);
    accumulate(u, k, field, epsilon, sign, &grad, nullptr);
    return GridFunction(u.domain_ptr(), std::move(grad));
}

EnergyEval energy_with_gradient(const GridFunction& u, double k,
                                const ExponentField& field, double epsilon,
                                int sign) {
    if (!u.domain().same_layout(*field.domain))
        throw std::invalid_argument(
            "energy_with_gradient: domain layout mismatch");
    EnergyEval eval;
    eval.gradient.assign(u.domain().size(), 0.0);
    eval.precond.assign(u.domain().size(), 1.0);
    const EnergyCore core =
        accumulate(u, k, field, epsilon, sign, &eval.gradient, &eval.precond);
    eval.energy = core.finite ? core.energy
                              : std::numeric_limits<double>::infinity();
    return eval;
}

std::pair<GridFunction, SolveReport> minimize_energy(
    const Problem& problem, double k, int sign,
    const std::optional<GridFunction>& warm_start) {
    validate_problem(problem);
    if (warm_start && !warm_start->domain().same_layout(*problem.domain))
        throw std::invalid_argument("minimize_energy: warm start layout mismatch");
    const auto t0 = std::chrono::steady_clock::now();
    const Domain& d = *problem.domain;
    const auto& dofs = d.interior_nodes();
    const double gtol = problem.tolerances.step_tol;
    const long max_iters = problem.tolerances.max_iters;

    GridFunction u = warm_start ? *warm_start : cold_start(problem);
    for (int n : d.boundary_nodes()) u[n] = problem.boundary.values[n];

    EnergyEval eval =
        energy_with_gradient(u, k, problem.exponent, problem.epsilon, sign);
    SolveReport report;
    report.k_reached = k;

    auto gather = [&dofs](const std::vector<double>& full) {
        std::vector<double> out(dofs.size());
        for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = full[dofs[i]];
        return out;
    };

    std::deque<std::vector<double>> hist_s, hist_y;
    std::deque<double> hist_rho;
    long iters = 0;
    int stagnant = 0;
    bool converged = false;
    std::string warning;

    while (iters < max_iters) {
        std::vector<double> g = gather(eval.gradient);
        const double gsup = sup_abs(g);
        if (gsup <= gtol) {
            converged = true;
            break;
        }

        // Two-loop recursion on the interior degrees of freedom.
        std::vector<double> qv = g;
        std::vector<double> alphas(hist_s.size());
        for (std::size_t r = hist_s.size(); r-- > 0;) {
            const double a = hist_rho[r] * dot(hist_s[r], qv);
            alphas[r] = a;
            for (std::size_t i = 0; i < qv.size(); ++i)
                qv[i] -= a * hist_y[r][i];
        }
        if (!hist_s.empty()) {
            const double gamma = dot(hist_s.back(), hist_y.back()) /
                                 dot(hist_y.back(), hist_y.back());
            for (double& x : qv) x *= gamma;
        } else {
            for (std::size_t i = 0; i < qv.size(); ++i)
                qv[i] /= eval.precond[dofs[i]];
        }
        for (std::size_t r = 0; r < hist_s.size(); ++r) {
            const double b = hist_rho[r] * dot(hist_y[r], qv);
            for (std::size_t i = 0; i < qv.size(); ++i)
                qv[i] += (alphas[r] - b) * hist_s[r][i];
        }

        std::vector<double> dir(qv.size());
        for (std::size_t i = 0; i < qv.size(); ++i) dir[i] = -qv[i];
        double gd = dot(g, dir);
        if (gd >= 0.0) {
            for (std::size_t i = 0; i < dir.size(); ++i)
                dir[i] = -g[i] / eval.precond[dofs[i]];
            gd = dot(g, dir);
        }

        double t = 1.0;
        bool accepted = false;
        GridFunction trial = u;
        EnergyEval trial_eval;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t i = 0; i < dofs.size(); ++i)
                trial[dofs[i]] = u[dofs[i]] + t * dir[i];
            trial_eval = energy_with_gradient(trial, k, problem.exponent,
                                              problem.epsilon, sign);
            if (std::isfinite(trial_eval.energy) &&
                trial_eval.energy <= eval.energy + kArmijoC * t * gd) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            converged = true;
            warning = "line search exhausted at gradient sup " +
                      std::to_string(gsup);
            break;
        }

        std::vector<double> step(dofs.size());
        std::vector<double> ydiff(dofs.size());
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            step[i] = t * dir[i];
            ydiff[i] = trial_eval.gradient[dofs[i]] - g[i];
        }
        const double sy = dot(step, ydiff);
        if (sy > 1e-300) {
            hist_s.push_back(step);
            hist_y.push_back(std::move(ydiff));
            hist_rho.push_back(1.0 / sy);
            if (hist_s.size() > kLbfgsMemory) {
                hist_s.pop_front();
                hist_y.pop_front();
                hist_rho.pop_front();
            }
        }
        const double step_sup = sup_abs(step);
        u = std::move(trial);
        eval = std::move(trial_eval);
        ++iters;
        if (step_sup <= kStagnationTol * (1.0 + sup_norm(u))) {
            if (++stagnant >= kStagnationRuns) {
                converged = true;
                break;
            }
        } else {
            stagnant = 0;
        }
    }
    if (iters >= max_iters && !converged)
        warning = "max_iters reached at gradient sup " +
                  std::to_string(sup_abs(gather(eval.gradient)));

    report.iterations = iters;
    report.final_energy = eval.energy;
    report.final_residual = sup_abs(gather(eval.gradient));
    report.converged = converged;
    if (!warning.empty()) report.warnings.push_back(warning);
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(u), std::move(report)};
}

std::pair<GridFunction, SolveReport> solve_variational_limit(
    const Problem& problem, int sign) {
    validate_problem(problem);
    const std::vector<double> ks = problem.k_schedule.empty()
                                       ? default_k_schedule(problem.exponent)
                                       : problem.k_schedule;
    const auto t0 = std::chrono::steady_clock::now();
    GridFunction u = cold_start(problem);
    SolveReport total;
    total.converged = true;
    for (double k : ks) {
        auto [next, stage] = minimize_energy(problem, k, sign, u);
        total.k_gaps.push_back(diff_sup_norm(next, u));
        total.iterations += stage.iterations;
        total.k_reached = k;
        total.final_energy = stage.final_energy;
        total.final_residual = stage.final_residual;
        total.converged = total.converged && stage.converged;
        for (const auto& w : stage.warnings)
            total.warnings.push_back("k=" + std::to_string(k) + ": " + w);
        u = std::move(next);
    }
    total.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(u), std::move(total)};
}

std::pair<GridFunction, SolveReport> solve_direct(const Problem& problem) {
    validate_problem(problem);
    const auto t0 = std::chrono::steady_clock::now();
    const Domain& d = *problem.domain;
    const double h = d.h();
    const double omega = problem.gs_damping;
    const double tol = effective_residual_tol(problem);
    const long max_sweeps = problem.tolerances.max_iters;
    const bool constant_p = problem.exponent.constant_p();

    GridFunction u = cold_start(problem);
    SolveReport report;
    double residual = std::numeric_limits<double>::infinity();
    long sweeps = 0;
    while (sweeps < max_sweeps) {
        ++sweeps;
        for (int color = 0; color < 2; ++color) {
            const double guard = default_guard(u);
            for (int n : d.interior_nodes()) {
                const int i = n % d.nx();
                const int j = n / d.nx();
                if ((i + j) % 2 != color) continue;
                const double e = u.at(i + 1, j);
                const double w = u.at(i - 1, j);
                const double no = u.at(i, j + 1);
                const double s = u.at(i, j - 1);
                const double mx = std::max({e, w, no, s});
                const double mn = std::min({e, w, no, s});
                double fixed_point = (mx + mn) / 2.0;
                if (!constant_p) {
                    const double m = log_term_magnitude(u, i, j, problem.scheme);
                    if (m >= guard) {
                        const auto gc = gradient_centered(u, i, j);
                        const auto& glp = problem.exponent.grad_log_p[n];
                        fixed_point += (h * h / 2.0) *
                                       std::log(std::max(m, guard)) *
                                       (gc[0] * glp[0] + gc[1] * glp[1]);
                    }
                }
                u[n] = (1.0 - omega) * u[n] + omega * fixed_point;
            }
        }
        if ((sweeps - 1) % 20 == 0 || sweeps == max_sweeps) {
            const double guard = default_guard(u);
            residual = sup_norm(
                residual_field(u, problem.exponent, guard, problem.scheme));
            report.residual_history.push_back(residual);
            if (residual <= tol) break;
        }
    }
    report.iterations = sweeps;
    report.final_residual = residual;
    report.converged = residual <= tol;
    if (!report.converged)
        report.warnings.push_back("residual target not reached in " +
                                  std::to_string(sweeps) + " sweeps");
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return {std::move(u), std::move(report)};
}

TripleSolution solve_triple(const Problem& problem) {
    validate_problem(problem);
    auto [minus, report_minus] = solve_variational_limit(problem, -1);
    auto [mid, report_mid] = solve_variational_limit(problem, 0);
    auto [plus, report_plus] = solve_variational_limit(problem, +1);
    return {std::move(minus),       std::move(mid),
            std::move(plus),        std::move(report_minus),
            std::move(report_mid),  std::move(report_plus)};
}

}  // namespace vexinf

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "vexinf/analysis.hpp"
#include "vexinf/gadgets.hpp"
#include "vexinf/io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace vexinf;
using cli::ConfigError;
using cli::Overrides;
using cli::ToolConfig;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

ordered_json report_json(const SolveReport& report) {
    return ordered_json{{"iterations", report.iterations},
                        {"final_residual", report.final_residual},
                        {"final_energy", report.final_energy},
                        {"k_reached", report.k_reached},
                        {"converged", report.converged},
                        {"warnings", report.warnings},
                        {"k_gaps", report.k_gaps}};
}

ordered_json provenance_json(const ToolConfig& config,
                             const std::string& command, long seed) {
    const Problem& p = config.problem;
    const Domain& d = *p.domain;
    return ordered_json{
        {"command", command},
        {"config_hash", config.config_hash},
        {"seed", seed},
        {"method", config.method},
        {"scheme", config.scheme_name},
        {"epsilon", p.epsilon},
        {"k_schedule", p.k_schedule},
        {"tolerances",
         {{"residual_tol", p.tolerances.residual_tol},
          {"step_tol", p.tolerances.step_tol},
          {"max_iters", p.tolerances.max_iters}}},
        {"gs_damping", p.gs_damping},
        {"domain",
         {{"nx", d.nx()},
          {"ny", d.ny()},
          {"h", d.h()},
          {"origin", {d.origin()[0], d.origin()[1]}},
          {"interior_nodes", static_cast<long>(d.interior_nodes().size())}}},
        {"exponent",
         {{"family", config.exponent.family},
          {"p_min", p.exponent.p_min},
          {"p_max", p.exponent.p_max},
          {"grad_log_p_sup", p.exponent.grad_log_p_sup}}},
        {"boundary_lipschitz", p.boundary.lipschitz_constant}};
}

void write_json(const fs::path& path, const ordered_json& j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

std::pair<GridFunction, SolveReport> dispatch_solve(const ToolConfig& config) {
    if (config.method == "direct") return solve_direct(config.problem);
    return solve_variational_limit(config.problem, 0);
}

ordered_json solution_stats(const GridFunction& u) {
    const Domain& d = u.domain();
    double lo = u[d.boundary_nodes().front()];
    double hi = lo;
    for (int j = 0; j < d.ny(); ++j)
        for (int i = 0; i < d.nx(); ++i) {
            if (!d.is_active(i, j)) continue;
            lo = std::min(lo, u.at(i, j));
            hi = std::max(hi, u.at(i, j));
        }
    return ordered_json{
        {"sup_norm", sup_norm(u)}, {"min", lo}, {"max", hi}};
}

int cmd_solve(const ToolConfig& config, const fs::path& out, long seed) {
    auto [u, report] = dispatch_solve(config);
    write_csv(out / "solution.csv", u);
    write_pgm(out / "solution.pgm", u);
    ordered_json j = provenance_json(config, "solve", seed);
    j["report"] = report_json(report);
    j["solution"] = solution_stats(u);
    write_json(out / "report.json", j);
    return report.converged ? kExitOk : kExitNumerical;
}

int cmd_triple(const ToolConfig& config, const fs::path& out, long seed) {
    const TripleSolution triple = solve_triple(config.problem);
    write_csv(out / "solution_minus.csv", triple.u_minus);
    write_csv(out / "solution_h.csv", triple.h);
    write_csv(out / "solution_plus.csv", triple.u_plus);
    write_pgm(out / "solution.pgm", triple.h);

    const double slack = 10.0 * config.problem.tolerances.step_tol;
    const ComparisonReport lower = check_comparison(triple.u_minus, triple.h,
                                                    slack);
    const ComparisonReport upper = check_comparison(triple.h, triple.u_plus,
                                                    slack);
    ordered_json j = provenance_json(config, "triple", seed);
    j["report_minus"] = report_json(triple.report_minus);
    j["report_h"] = report_json(triple.report_h);
    j["report_plus"] = report_json(triple.report_plus);
    j["ordering"] = {{"lower_violation", lower.worst_violation},
                     {"upper_violation", upper.worst_violation},
                     {"slack", slack},
                     {"ordered", lower.ordered && upper.ordered}};
    write_json(out / "report.json", j);

    const bool converged = triple.report_minus.converged &&
                           triple.report_h.converged &&
                           triple.report_plus.converged;
    return converged && lower.ordered && upper.ordered ? kExitOk
                                                       : kExitNumerical;
}

int cmd_sandwich(const ToolConfig& config, const fs::path& out, long seed) {
    const SandwichReport sandwich =
        sandwich_experiment(config.problem, config.sandwich_epsilons);

    const double floor = 50.0 * effective_residual_tol(config.problem);
    int fitted_points = 0;
    for (double gap : sandwich.gaps)
        if (gap > floor) ++fitted_points;
    const bool kappa_fitted =
        sandwich.epsilons.size() >= 2 && fitted_points >= 2;

    ordered_json j = provenance_json(config, "sandwich", seed);
    j["epsilons"] = sandwich.epsilons;
    j["gaps"] = sandwich.gaps;
    j["worst_violation"] = sandwich.worst_violation;
    j["gaps_decreasing"] = sandwich.gaps_decreasing;
    j["kappa"] = kappa_fitted ? ordered_json(sandwich.kappa)
                              : ordered_json(nullptr);
    j["kappa_residual"] = kappa_fitted ? ordered_json(sandwich.kappa_residual)
                                       : ordered_json(nullptr);
    ordered_json stages = ordered_json::array();
    for (const SolveReport& r : sandwich.reports)
        stages.push_back(report_json(r));
    j["stage_reports"] = stages;
    write_json(out / "report.json", j);

    std::string table = "epsilon,diff_sup,kappa_fit\n";
    for (std::size_t i = 0; i < sandwich.epsilons.size(); ++i) {
        table += format_value(sandwich.epsilons[i]);
        table += ',';
        table += format_value(sandwich.gaps[i]);
        table += ',';
        if (kappa_fitted) table += format_value(sandwich.kappa);
        table += '\n';
    }
    atomic_write_text(out / "sandwich.csv", table);

    bool converged = true;
    for (const SolveReport& r : sandwich.reports)
        converged = converged && r.converged;
    const double slack = 10.0 * config.problem.tolerances.step_tol;
    return converged && sandwich.worst_violation <= slack ? kExitOk
                                                          : kExitNumerical;
}

int cmd_harnack(const ToolConfig& config, const fs::path& out, long seed) {
    auto [u, report] = dispatch_solve(config);
    write_csv(out / "solution.csv", u);

    ordered_json j = provenance_json(config, "harnack", seed);
    j["solve_report"] = report_json(report);
    ordered_json balls = ordered_json::array();
    std::string table =
        "radius,harnack_constant,sup_ball,inf_ball,sup_ball_2r,"
        "required_slope,c1,c2,feasible\n";
    bool all_ok = report.converged;
    for (double radius : config.harnack_radii) {
        const HarnackReport ball =
            harnack_check(u, config.harnack_center, radius,
                          config.harnack_alpha);
        balls.push_back(ordered_json{
            {"radius", ball.radius},
            {"harnack_constant", ball.harnack_constant},
            {"sup_ball", ball.sup_ball},
            {"inf_ball", ball.inf_ball},
            {"sup_ball_2r", ball.sup_ball_2r},
            {"required_slope", ball.required_slope},
            {"feasible", ball.feasible},
            {"c1", ball.c1},
            {"c2", ball.c2},
            {"nodes_in_ball", ball.nodes_in_ball}});
        table += format_value(ball.radius);
        table += ',';
        table += format_value(ball.harnack_constant);
        table += ',';
        table += format_value(ball.sup_ball);
        table += ',';
        table += format_value(ball.inf_ball);
        table += ',';
        table += format_value(ball.sup_ball_2r);
        table += ',';
        table += format_value(ball.required_slope);
        table += ',';
        table += format_value(ball.c1);
        table += ',';
        table += format_value(ball.c2);
        table += ',';
        table += ball.feasible ? "1" : "0";
        table += '\n';
        all_ok = all_ok && ball.feasible &&
                 std::isfinite(ball.harnack_constant);
    }
    j["balls"] = balls;
    j["center"] = {config.harnack_center[0], config.harnack_center[1]};
    write_json(out / "report.json", j);
    atomic_write_text(out / "harnack.csv", table);
    return all_ok ? kExitOk : kExitNumerical;
}

int cmd_convergence(const ToolConfig& config, const fs::path& out, long seed) {
    if (!config.exponent.resamplable())
        throw ConfigError(
            "config: csv exponents cannot drive convergence studies");
    ordered_json probes = ordered_json::array();
    std::string table = "probe,h,error\n";
    bool all_ok = true;
    for (const std::string& name : config.convergence_probes) {
        const SmoothProbe probe = cli::make_probe(name);
        const ConvergenceReport report = operator_consistency_order(
            probe,
            [&](const DomainPtr& d) { return config.exponent.build(d); },
            config.convergence_hs, config.problem.domain->origin(),
            config.problem.scheme);
        probes.push_back(ordered_json{{"probe", name},
                                      {"hs", report.hs},
                                      {"errors", report.errors},
                                      {"fitted_order", report.fitted_order},
                                      {"halving_factors",
                                       report.halving_factors},
                                      {"exact", report.exact}});
        for (std::size_t i = 0; i < report.hs.size(); ++i) {
            table += name;
            table += ',';
            table += format_value(report.hs[i]);
            table += ',';
            table += format_value(report.errors[i]);
            table += '\n';
        }
        all_ok = all_ok && (report.exact || report.fitted_order >= 1.0);
    }
    ordered_json j = provenance_json(config, "convergence", seed);
    j["probes"] = probes;
    write_json(out / "report.json", j);
    atomic_write_text(out / "convergence.csv", table);
    return all_ok ? kExitOk : kExitNumerical;
}

// Verification suite: self-contained property checks with a deterministic
// seed. The fault flag biases the discrete operator inside the consistency
// sweep to prove the suite can catch a broken scheme.
int cmd_verify(const std::string& config_hash, const fs::path& out, long seed,
               bool inject_fault) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    ordered_json checks = ordered_json::array();
    bool all_pass = true;
    const auto add_check = [&](const std::string& name, bool pass,
                               double metric) {
        checks.push_back(
            ordered_json{{"name", name}, {"pass", pass}, {"metric", metric}});
        all_pass = all_pass && pass;
    };

    {
        std::uniform_real_distribution<double> q_dist(2.0, 16.0);
        std::uniform_real_distribution<double> c_dist(-3.0, 3.0);
        const int dims[] = {1, 2, 3, 5};
        double min_gap = 0.0;
        for (int trial = 0; trial < 20000; ++trial) {
            const int dim = dims[trial % 4];
            const double q = q_dist(rng);
            std::vector<double> a(dim), b(dim);
            for (int d = 0; d < dim; ++d) a[d] = c_dist(rng);
            for (int d = 0; d < dim; ++d) b[d] = c_dist(rng);
            min_gap = std::min(min_gap,
                               monotonicity_inequality_gap(a, b, q));
        }
        add_check("monotonicity-inequality-fuzz", min_gap >= -1e-12, min_gap);
    }

    {
        std::vector<double> ts{0.0, 1e-3, 1e-2};
        for (int i = 1; i <= 100; ++i) ts.push_back(0.05 * i);
        double worst_residual = 0.0;
        bool ok = true;
        for (const GFunctionParams& params :
             {GFunctionParams(1.0, 1.5), GFunctionParams(2.5, 1.2),
              GFunctionParams(0.7, 1.9)}) {
            const GPropertyReport report = check_g_properties(params, ts);
            ok = ok && report.ok;
            worst_residual = std::max(worst_residual, report.ratio_residual);
        }
        add_check("g-function-properties", ok, worst_residual);
    }

    {
        const std::vector<double> hs{0.125, 0.0625, 0.03125};
        const double bias = inject_fault ? 0.25 : 0.0;
        const int n0 = static_cast<int>(std::round(1.0 / hs[0])) + 1;
        double min_order = std::numeric_limits<double>::infinity();
        for (const char* name : {"cubic-x", "cubic-y", "exp-y"}) {
            const SmoothProbe probe = cli::make_probe(name);
            std::vector<double> errors;
            for (double h : hs) {
                const int n = static_cast<int>(std::round(1.0 / h)) + 1;
                const int step = static_cast<int>(std::round(hs[0] / h));
                const DomainPtr domain = make_domain(n, n, h);
                const ExponentField field = exponent_gaussian_bump(
                    domain, 1.5, 0.8, {0.45, 0.55}, 0.15);
                const GridFunction u = sample(domain, probe.value);
                const double guard = default_guard(u);
                double err = 0.0;
                for (int bj = 1; bj <= n0 - 2; ++bj)
                    for (int ai = 1; ai <= n0 - 2; ++ai) {
                        const int i = ai * step;
                        const int j = bj * step;
                        const auto pos = domain->position(i, j);
                        const auto g = probe.gradient(pos[0], pos[1]);
                        const double mag = std::hypot(g[0], g[1]);
                        const auto& glp =
                            field.grad_log_p[domain->index(i, j)];
                        const double cont =
                            delta_inf_x_continuous(
                                probe, pos[0], pos[1],
                                [&glp](double, double) { return glp; }) /
                            (mag * mag);
                        const double disc =
                            full_operator_discrete(u, i, j, field, guard) +
                            bias;
                        err = std::max(err, std::abs(disc - cont));
                    }
                errors.push_back(err);
            }
            const ConvergenceReport fit = convergence_order(hs, errors);
            min_order = std::min(
                min_order,
                fit.exact ? std::numeric_limits<double>::infinity()
                          : fit.fitted_order);
        }
        add_check("operator-consistency", min_order >= 1.0, min_order);
    }

    {
        const DomainPtr domain = make_domain(9, 9, 0.125);
        const ExponentField field =
            exponent_gaussian_bump(domain, 1.5, 0.8, {0.45, 0.55}, 0.15);
        std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
        double worst = 0.0;
        for (int pair = 0; pair < 3; ++pair) {
            const double c0 = c_dist(rng), c1 = c_dist(rng), c2 = c_dist(rng);
            const double c3 = c_dist(rng);
            const double lift = 0.1 + std::abs(c_dist(rng));
            const auto f = [=](double x, double y) {
                return c0 + c1 * x + c2 * y +
                       0.3 * c3 * std::sin(2.0 * std::numbers::pi * x);
            };
            Problem prob;
            prob.domain = domain;
            prob.exponent = field;
            prob.tolerances.residual_tol = 1e-10;
            prob.boundary = boundary_data_from_function(domain, f);
            auto [u_low, rep_low] = solve_direct(prob);
            prob.boundary = boundary_data_from_function(
                domain, [&](double x, double y) { return f(x, y) + lift; });
            auto [u_high, rep_high] = solve_direct(prob);
            const ComparisonReport cmp =
                check_comparison(u_low, u_high, 1e-9);
            worst = std::max(worst, cmp.worst_violation);
        }
        add_check("comparison-pairs", worst <= 1e-9, worst);
    }

    {
        const DomainPtr domain = make_domain(17, 17, 0.0625);
        const auto data = [](double x, double y) {
            return 1.2 + 0.5 * (x - 0.5) + 0.3 * (x - 0.5) * (y - 0.5);
        };
        double worst_gap = -std::numeric_limits<double>::infinity();
        bool holds = true;
        for (int variant = 0; variant < 2; ++variant) {
            Problem prob;
            prob.domain = domain;
            prob.exponent =
                variant == 0
                    ? exponent_constant(domain, 2.0)
                    : exponent_gaussian_bump(domain, 1.5, 0.8, {0.45, 0.55},
                                             0.15);
            prob.boundary = boundary_data_from_function(domain, data);
            prob.tolerances.residual_tol = 1e-10;
            auto [u, rep] = solve_direct(prob);
            const CutoffFunction cutoff =
                build_cutoff(domain, {0.5, 0.5}, 0.22);
            const CaccioppoliReport cc =
                caccioppoli_check(u, prob.exponent, cutoff);
            holds = holds && cc.holds;
            worst_gap = std::max(worst_gap, cc.gap);
        }
        add_check("caccioppoli-bound", holds, worst_gap);
    }

    ordered_json j{{"command", "verify"},
                   {"config_hash", config_hash},
                   {"seed", seed},
                   {"fault_injected", inject_fault},
                   {"checks", checks},
                   {"all_pass", all_pass}};
    write_json(out / "report.json", j);
    return all_pass ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and verification suite for the Dirichlet problem of "
                 "the variable-exponent infinity-Laplace equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    long seed = 0;
    std::vector<double> eps_list;
    double kp_max = 0.0;
    double tol = 0.0;
    std::string scheme;
    bool inject_fault = false;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Problem JSON file");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Seed for randomized checks");
        sub->add_option("--eps", eps_list,
                        "Epsilon override (single value, or list for "
                        "sandwich)")
            ->delimiter(',');
        sub->add_option("--kmax", kp_max, "Cap k*p_min at this target");
        sub->add_option("--tol", tol, "Solver tolerance override");
        sub->add_option("--scheme", scheme,
                        "Magnitude scheme: upwind-log or centered");
        return sub;
    };

    CLI::App* solve = add_common(
        app.add_subcommand("solve", "Solve the equation for h"));
    CLI::App* triple = add_common(app.add_subcommand(
        "triple", "Solve the lower, middle, and upper equations"));
    CLI::App* sandwich = add_common(app.add_subcommand(
        "sandwich", "Squeeze h between u- and u+ across an epsilon list"));
    CLI::App* harnack = add_common(app.add_subcommand(
        "harnack", "Solve and evaluate Harnack ratios on concentric balls"));
    CLI::App* convergence = add_common(app.add_subcommand(
        "convergence", "Operator consistency orders on nested grids"));
    CLI::App* verify = add_common(app.add_subcommand(
        "verify", "Run the property and inequality verification suite"));
    verify->add_flag("--inject-fault", inject_fault,
                     "Bias the discrete operator to exercise failure paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const fs::path out(out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec)
            throw ConfigError("config: cannot create output directory " +
                              out.string());

        Overrides overrides;
        if (!eps_list.empty()) {
            for (double e : eps_list)
                if (!(e >= 0.0 && e < 1.0))
                    throw ConfigError("config: --eps values must be in [0,1)");
            overrides.eps_list = eps_list;
        }
        if (kp_max > 0.0) overrides.kp_max = kp_max;
        if (tol > 0.0) overrides.tol = tol;
        if (!scheme.empty()) overrides.scheme = scheme;

        if (verify->parsed()) {
            std::string hash = cli::hash_hex("");
            if (!config_path.empty())
                hash = cli::load_config(config_path, overrides).config_hash;
            return cmd_verify(hash, out, seed, inject_fault);
        }

        if (config_path.empty())
            throw ConfigError("config: --config is required");
        const ToolConfig config = cli::load_config(config_path, overrides);

        if (solve->parsed()) return cmd_solve(config, out, seed);
        if (triple->parsed()) return cmd_triple(config, out, seed);
        if (sandwich->parsed()) return cmd_sandwich(config, out, seed);
        if (harnack->parsed()) return cmd_harnack(config, out, seed);
        if (convergence->parsed()) return cmd_convergence(config, out, seed);
        throw ConfigError("config: no subcommand selected");
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

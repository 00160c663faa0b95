#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "vexinf/solvers.hpp"

using namespace vexinf;

namespace {

double saddle_sine(double x, double y) {
    return (x - 0.5) * (y - 0.5) +
           0.3 * std::sin(2.0 * std::numbers::pi * x);
}

DomainPtr square(int n) { return make_domain(n, n, 1.0 / (n - 1)); }

Problem bump_problem(const DomainPtr& d) {
    Problem prob;
    prob.domain = d;
    prob.exponent = exponent_gaussian_bump(d, 1.5, 0.8, {0.45, 0.55}, 0.15);
    prob.boundary = boundary_data_from_function(d, saddle_sine);
    prob.tolerances.residual_tol = 1e-8;
    prob.tolerances.step_tol = 1e-8;
    return prob;
}

}  // namespace

static void BM_UpwindMagnitude(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const GridFunction u = sample(d, saddle_sine);
    for (auto _ : state) {
        double acc = 0.0;
        for (int n : d->interior_nodes())
            acc += gradient_magnitude_upwind(u, n % d->nx(), n / d->nx());
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * d->interior_count());
}
BENCHMARK(BM_UpwindMagnitude)->Arg(17)->Arg(33)->Arg(65);

static void BM_ResidualField(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const ExponentField field =
        exponent_gaussian_bump(d, 1.5, 0.8, {0.45, 0.55}, 0.15);
    const GridFunction u = sample(d, saddle_sine);
    const double guard = default_guard(u);
    for (auto _ : state) {
        const GridFunction r = residual_field(u, field, guard);
        benchmark::DoNotOptimize(r.values().data());
    }
    state.SetItemsProcessed(state.iterations() * d->interior_count());
}
BENCHMARK(BM_ResidualField)->Arg(17)->Arg(33)->Arg(65);

static void BM_EnergyWithGradient(benchmark::State& state) {
    const DomainPtr d = square(33);
    const Problem prob = bump_problem(d);
    const GridFunction u = sample(d, saddle_sine);
    const double k = static_cast<double>(state.range(0)) /
                     prob.exponent.p_min;
    for (auto _ : state) {
        const EnergyEval eval =
            energy_with_gradient(u, k, prob.exponent, 0.1, +1);
        benchmark::DoNotOptimize(eval.energy);
        benchmark::DoNotOptimize(eval.gradient.data());
    }
}
BENCHMARK(BM_EnergyWithGradient)->Arg(2)->Arg(16)->Arg(64);

static void BM_DirectSolve(benchmark::State& state) {
    const DomainPtr d = square(static_cast<int>(state.range(0)));
    const Problem prob = bump_problem(d);
    for (auto _ : state) {
        auto [u, report] = solve_direct(prob);
        benchmark::DoNotOptimize(u.values().data());
    }
}
BENCHMARK(BM_DirectSolve)->Arg(17)->Arg(33)->Unit(benchmark::kMillisecond);

static void BM_MinimizeStage(benchmark::State& state) {
    const DomainPtr d = square(17);
    const Problem prob = bump_problem(d);
    const double k = static_cast<double>(state.range(0)) /
                     prob.exponent.p_min;
    for (auto _ : state) {
        auto [u, report] = minimize_energy(prob, k, 0);
        benchmark::DoNotOptimize(report.iterations);
    }
}
BENCHMARK(BM_MinimizeStage)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include "bubbles/fields.hpp"
#include "bubbles/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace bubbles;

namespace {

struct Problem {
    Cluster cluster;
    MediumSpec medium;
    std::vector<ScatterCoefficient> coeffs;
};

Problem make_problem(double a)
{
    ClusterSpec spec;
    spec.a = a;
    spec.s = 1.0;
    spec.t = 1.0 / 3.0;
    spec.seed = 1;
    Problem p;
    p.cluster = generate_cluster(spec);
    ContrastLaw law;
    p.medium.perBubble.assign(p.cluster.size(), law.material(a, 1.0, 1.0));
    p.medium.omega = 2.0;
    ShapeFunctionals f = compute_functionals(p.cluster.bubbles[0], 2);
    p.coeffs.assign(p.cluster.size(), leading_coefficient(f, p.medium, 0));
    return p;
}

void BM_FoldyLaxDense(benchmark::State& state)
{
    Problem p = make_problem(1.0 / static_cast<double>(state.range(0)));
    for (auto _ : state) {
        FoldyLaxSystem s = solve(assemble(p.cluster, p.coeffs, p.medium, Vec3::UnitZ()));
        benchmark::DoNotOptimize(s.Q.data());
    }
    state.counters["M"] = static_cast<double>(p.cluster.size());
}
BENCHMARK(BM_FoldyLaxDense)->Arg(100)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FoldyLaxGmres(benchmark::State& state)
{
    Problem p = make_problem(1.0 / static_cast<double>(state.range(0)));
    SolveOptions opt;
    opt.denseLimit = 0;
    for (auto _ : state) {
        FoldyLaxSystem s = solve(assemble(p.cluster, p.coeffs, p.medium, Vec3::UnitZ(), 1.0, opt), opt);
        benchmark::DoNotOptimize(s.Q.data());
    }
    state.counters["M"] = static_cast<double>(p.cluster.size());
}
BENCHMARK(BM_FoldyLaxGmres)->Arg(400)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_FarField(benchmark::State& state)
{
    Problem p = make_problem(1.0 / 400);
    FoldyLaxSystem s = solve(assemble(p.cluster, p.coeffs, p.medium, Vec3::UnitZ()));
    auto dirs = fibonacci_sphere(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        FarFieldPattern f = far_field(s, p.cluster, dirs);
        benchmark::DoNotOptimize(f.crossSection);
    }
}
BENCHMARK(BM_FarField)->Arg(590)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Functionals(benchmark::State& state)
{
    BubbleShape e = BubbleShape::ellipsoid(Vec3(1, 0.7, 0.5));
    for (auto _ : state) benchmark::DoNotOptimize(compute_functionals(e, static_cast<int>(state.range(0))).cap);
}
BENCHMARK(BM_Functionals)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_BemSphere(benchmark::State& state)
{
    Cluster c = make_cluster({BubbleShape::sphere(0.05)});
    MediumSpec m;
    m.perBubble = {Material{0.01, 0.01}};
    m.omega = 3.0;
    for (auto _ : state) benchmark::DoNotOptimize(bem_solve(c, m, Vec3::UnitZ(), static_cast<int>(state.range(0))).residual);
}
BENCHMARK(BM_BemSphere)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

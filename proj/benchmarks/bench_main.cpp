#include <vector>

#include <benchmark/benchmark.h>

#include "eitcool/analytics.hpp"
#include "eitcool/dynamics.hpp"
#include "eitcool/generator.hpp"
#include "eitcool/nv_model.hpp"

using namespace eitcool;

namespace {

ModelParams working_point() {
    ModelParams p;
    p.bath = Bath::thermal;
    p.temperature = 0.02;
    p.set_quality_q(1e5);
    return p;
}

Matrix sample_state(std::size_t dim) {
    Matrix m = Matrix::Random(Eigen::Index(dim), Eigen::Index(dim));
    m = m * m.adjoint();
    return m / m.trace();
}

}  // namespace

// Reference dense right-hand side against the sparse superoperator kernel.
void BM_RhsDense(benchmark::State& state) {
    const auto model = build_model_three_level(working_point(), std::size_t(state.range(0)));
    const Matrix rho = sample_state(model.space().dim());
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(model, rho));
}
BENCHMARK(BM_RhsDense)->Arg(4)->Arg(8)->Arg(16);

void BM_RhsSparse(benchmark::State& state) {
    const auto model = build_model_three_level(working_point(), std::size_t(state.range(0)));
    const LindbladGenerator gen(model);
    const Matrix rho = sample_state(model.space().dim());
    Matrix out(rho.rows(), rho.cols());
    for (auto _ : state) {
        gen.apply(rho.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_RhsSparse)->Arg(4)->Arg(8)->Arg(16);

void BM_RhsSevenLevel(benchmark::State& state) {
    ModelParams p = working_point();
    p.gamma_0 = 1.5;
    p.Gamma_0 = 15.0;
    p.Gamma_p1 = p.Gamma_m1 = 0.1;
    p.rabi_pump = 15.0;
    const auto model = build_model_seven_level(p, 16);
    const LindbladGenerator gen(model);
    const Matrix rho = sample_state(model.space().dim());
    Matrix out(rho.rows(), rho.cols());
    for (auto _ : state) {
        gen.apply(rho.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_RhsSevenLevel);

void BM_SteadyState(benchmark::State& state) {
    const auto model = build_model_three_level(working_point(), std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(model));
}
BENCHMARK(BM_SteadyState)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Evolve(benchmark::State& state) {
    const auto model = build_model_three_level(working_point(), 10);
    const DensityMatrix rho0 = make_initial_state(model.space(), {"dark", 3, std::nullopt});
    EvolveOptions o;
    o.leakage_threshold = 1e-2;
    for (auto _ : state) benchmark::DoNotOptimize(evolve(model, rho0, 20.0, 41, o));
}
BENCHMARK(BM_Evolve)->Unit(benchmark::kMillisecond);

void BM_AbsorptionSweep(benchmark::State& state) {
    const ModelParams p = working_point();
    std::vector<double> grid;
    for (int i = 0; i < 2001; ++i) grid.push_back(-40.0 + 50.0 * i / 2000.0);
    for (auto _ : state) benchmark::DoNotOptimize(absorption_spectrum(p, grid));
}
BENCHMARK(BM_AbsorptionSweep)->Unit(benchmark::kMicrosecond);

void BM_ResolventTransform(benchmark::State& state) {
    const ModelParams p = working_point();
    std::vector<double> grid;
    for (int i = 0; i < 201; ++i) grid.push_back(-3.0 + 6.0 * i / 200.0);
    for (auto _ : state) benchmark::DoNotOptimize(correlation_transform_numeric(p, grid));
}
BENCHMARK(BM_ResolventTransform)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();

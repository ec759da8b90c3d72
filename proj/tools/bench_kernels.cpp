// Compares the OpenMP kernels against the serial reference implementations
// on a planted instance. Run: ri_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "ri/kernels.hpp"
#include "ri/optimizer.hpp"
#include "ri/reference.hpp"
#include "ri/synth.hpp"

#include <omp.h>

namespace {

struct BenchData {
    ri::Dataset data;
    ri::ModelParams params;
    ri::LaplacianOperator lap;
    std::vector<int> labels;
    ri::Mat z;
    ri::Vec s;

    BenchData() {
        ri::SynthSpec spec;
        spec.planted.m = 2000;
        spec.planted.k = 32;
        spec.planted.n_min = 8;
        spec.planted.n_max = 16;
        spec.planted.positive_ratio = 0.5;
        spec.planted.seed = 17;
        ri::SynthResult s_out = ri::synth(spec);
        data = std::move(s_out.data);
        std::vector<std::string> ids;
        for (const auto& t : data.tweets) ids.push_back(t.id);
        lap = ri::laplacian(ri::line_graph_convert(s_out.behavior, ids));
        labels = data.labels();
        ri::Hyper h;
        params = ri::default_init(data, h, 3);
        ri::kernels::aggregate_all(data, params.u, z);
        ri::kernels::matvec(z, params.beta, s);
    }
};

const BenchData& bench_data() {
    static BenchData bd;
    return bd;
}

void set_threads(const benchmark::State& state) {
    omp_set_num_threads(static_cast<int>(state.range(0)));
}

void BM_aggregate_ref(benchmark::State& state) {
    const auto& bd = bench_data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::ref::aggregate_all(bd.data, bd.params.u));
    }
}
BENCHMARK(BM_aggregate_ref);

void BM_aggregate_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    set_threads(state);
    ri::Mat z;
    for (auto _ : state) {
        ri::kernels::aggregate_all(bd.data, bd.params.u, z);
        benchmark::DoNotOptimize(z.data());
    }
}
BENCHMARK(BM_aggregate_kernel)->Arg(1)->Arg(2)->Arg(4);

void BM_smooth_loss_ref(benchmark::State& state) {
    const auto& bd = bench_data();
    ri::Hyper h;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::ref::smooth_loss(bd.data, &bd.lap, bd.params, h));
    }
}
BENCHMARK(BM_smooth_loss_ref);

void BM_smooth_loss_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    ri::Hyper h;
    set_threads(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::smooth_loss(bd.data, &bd.lap, bd.params, h));
    }
}
BENCHMARK(BM_smooth_loss_kernel)->Arg(1)->Arg(2)->Arg(4);

void BM_grad_beta_ref(benchmark::State& state) {
    const auto& bd = bench_data();
    ri::Hyper h;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::ref::grad_beta(bd.data, &bd.lap, bd.params, h));
    }
}
BENCHMARK(BM_grad_beta_ref);

void BM_grad_beta_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    ri::Hyper h;
    set_threads(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::grad_beta(bd.data, &bd.lap, bd.params, h));
    }
}
BENCHMARK(BM_grad_beta_kernel)->Arg(1)->Arg(2)->Arg(4);

void BM_spmv_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    set_threads(state);
    ri::Vec out;
    for (auto _ : state) {
        ri::kernels::spmv(bd.lap.matrix, bd.s, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_spmv_kernel)->Arg(1)->Arg(2)->Arg(4);

void BM_logistic_loss_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    set_threads(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ri::kernels::logistic_loss(bd.s, bd.labels));
    }
}
BENCHMARK(BM_logistic_loss_kernel)->Arg(1)->Arg(2)->Arg(4);

void BM_scores_kernel(benchmark::State& state) {
    const auto& bd = bench_data();
    set_threads(state);
    std::vector<ri::Vec> scores;
    for (auto _ : state) {
        ri::kernels::scores_all(bd.data, bd.params.beta, scores);
        benchmark::DoNotOptimize(scores.data());
    }
}
BENCHMARK(BM_scores_kernel)->Arg(1)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();

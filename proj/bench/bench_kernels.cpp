#include <benchmark/benchmark.h>

#include <vector>

#include "remoteop/kernels.hpp"
#include "remoteop/random.hpp"

namespace {

using namespace remoteop;

struct Fixture {
    std::vector<Complex> amps;
    CMatrix gate;
    std::vector<Qubit> targets;
};

Fixture make(std::size_t n, std::size_t k) {
    random::Engine rng(n * 31 + k);
    const StateVector s = random::state(n, rng);
    Fixture f{{s.amplitudes().begin(), s.amplitudes().end()}, random::unitary(std::size_t{1} << k, rng), {}};
    for (std::size_t i = 0; i < k; ++i) {
        f.targets.push_back((i * 5 + 1) % n);
    }
    return f;
}

template <auto Kernel>
void BM_apply(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    Fixture f = make(n, k);
    for (auto _ : state) {
        Kernel(f.amps, n, f.gate, f.targets);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.amps.size()));
}

template <auto Kernel>
void BM_weights(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Fixture f = make(n, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(f.amps, n, f.targets));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.amps.size()));
}

void apply_args(benchmark::internal::Benchmark *b) {
    for (int n : {8, 12, 16, 20}) {
        for (int k : {1, 2, 3}) {
            b->Args({n, k});
        }
    }
}

} // namespace

BENCHMARK(BM_apply<&kernels::apply_matrix>)->Name("apply_matrix/parallel")->Apply(apply_args);
BENCHMARK(BM_apply<&kernels::reference::apply_matrix>)->Name("apply_matrix/serial")->Apply(apply_args);
BENCHMARK(BM_weights<&kernels::outcome_weights>)->Name("outcome_weights/parallel")->DenseRange(8, 20, 4);
BENCHMARK(BM_weights<&kernels::reference::outcome_weights>)->Name("outcome_weights/serial")->DenseRange(8, 20, 4);

BENCHMARK_MAIN();

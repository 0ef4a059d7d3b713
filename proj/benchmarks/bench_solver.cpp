#include "benchmark/benchmark.h"
#include "netshield/instance_io.hpp"
#include "netshield/oracle.hpp"

using namespace netshield;

namespace {

Instance seeded(int n, double edge_prob) {
    return generate_instance(0x5eedull + n, n, edge_prob, 0.5, 1, 1);
}

void BM_MetaTree(benchmark::State& state) {
    Instance inst = seeded(static_cast<int>(state.range(0)), 0.3);
    Network base = base_network(inst, true);
    for (auto _ : state) {
        MetaGraph meta = build_meta_graph(base);
        MetaTree tree = build_meta_tree(meta, meta.node_of[inst.u]);
        benchmark::DoNotOptimize(tree.nodes.size());
    }
}
BENCHMARK(BM_MetaTree)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_BestResponse(benchmark::State& state) {
    Instance inst = seeded(static_cast<int>(state.range(0)), 0.3);
    for (auto _ : state) {
        BestResponse br = best_response(inst);
        benchmark::DoNotOptimize(br.utility);
    }
}
BENCHMARK(BM_BestResponse)->Arg(10)->Arg(20)->Arg(30)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BestResponseSparse(benchmark::State& state) {
    Instance inst = seeded(static_cast<int>(state.range(0)), 0.12);
    for (auto _ : state) {
        BestResponse br = best_response(inst);
        benchmark::DoNotOptimize(br.utility);
    }
}
BENCHMARK(BM_BestResponseSparse)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_OracleFullRaw(benchmark::State& state) {
    Instance inst = seeded(static_cast<int>(state.range(0)), 0.4);
    for (auto _ : state) {
        OracleResult res = brute_force_best_response(inst, Adversary::MaxDisruption, SearchSpace::FullRaw);
        benchmark::DoNotOptimize(res.utility);
    }
}
BENCHMARK(BM_OracleFullRaw)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

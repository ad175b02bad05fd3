#include <benchmark/benchmark.h>

#include <random>

#include "thermotomo/grid.hpp"
#include "thermotomo/kernels.hpp"

using namespace thermotomo;
namespace k = thermotomo::kernels;

namespace {

struct Data {
    Grid g;
    ScalarField prev, curr, coef, next;
    Region disk;
    explicit Data(std::size_t n)
        : g(n, n, 2.0 / static_cast<double>(n - 1), -1.0, -1.0),
          prev(g), curr(g), coef(g, 0.08), next(g), disk(Region::disk(g, 0.0, 0.0, 0.8)) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t p = 0; p < g.size(); ++p) {
            prev[p] = u(rng);
            curr[p] = u(rng);
        }
    }
};

template <bool Parallel>
void leapfrog(benchmark::State& state) {
    Data d(static_cast<std::size_t>(state.range(0)));
    const k::IndexBox box = k::interior_box(d.g);
    for (auto _ : state) {
        const double m = Parallel ? k::leapfrog(d.g, box, d.prev.values(), d.curr.values(), d.coef.values(), {}, 0.01,
                                                d.next.values())
                                  : k::serial::leapfrog(d.g, box, d.prev.values(), d.curr.values(), d.coef.values(),
                                                        {}, 0.01, d.next.values());
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.g.size()));
}

template <bool Parallel>
void wave_operator(benchmark::State& state) {
    Data d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if (Parallel) {
            k::wave_operator(d.g, d.curr.values(), d.coef.values(), d.next.values());
        } else {
            k::serial::wave_operator(d.g, d.curr.values(), d.coef.values(), d.next.values());
        }
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.g.size()));
}

template <bool Parallel>
void cg_stencil(benchmark::State& state) {
    Data d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        if (Parallel) {
            k::dirichlet_stencil(d.g, d.disk.labels(), d.disk.interior(), d.curr.values(), d.next.values());
        } else {
            k::serial::dirichlet_stencil(d.g, d.disk.labels(), d.disk.interior(), d.curr.values(), d.next.values());
        }
        const double r = Parallel ? k::dot(d.disk.interior(), d.next.values(), d.curr.values())
                                  : k::serial::dot(d.disk.interior(), d.next.values(), d.curr.values());
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.disk.interior().size()));
}

template <bool Parallel>
void edge_energy(benchmark::State& state) {
    Data d(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const double e = Parallel ? k::edge_energy(d.g, d.disk.labels(), d.curr.values())
                                  : k::serial::edge_energy(d.g, d.disk.labels(), d.curr.values());
        benchmark::DoNotOptimize(e);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * d.g.size()));
}

}  // namespace

BENCHMARK(leapfrog<false>)->Name("leapfrog/serial")->Arg(256)->Arg(1024);
BENCHMARK(leapfrog<true>)->Name("leapfrog/openmp")->Arg(256)->Arg(1024);
BENCHMARK(wave_operator<false>)->Name("wave_operator/serial")->Arg(256)->Arg(1024);
BENCHMARK(wave_operator<true>)->Name("wave_operator/openmp")->Arg(256)->Arg(1024);
BENCHMARK(cg_stencil<false>)->Name("cg_stencil/serial")->Arg(256)->Arg(1024);
BENCHMARK(cg_stencil<true>)->Name("cg_stencil/openmp")->Arg(256)->Arg(1024);
BENCHMARK(edge_energy<false>)->Name("edge_energy/serial")->Arg(256)->Arg(1024);
BENCHMARK(edge_energy<true>)->Name("edge_energy/openmp")->Arg(256)->Arg(1024);

int main(int argc, char** argv) {
    k::configure_threads_from_env();
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}

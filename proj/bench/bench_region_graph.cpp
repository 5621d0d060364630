// Serial FIFO construction against the level-synchronous OpenMP one, on
// twin plants of the bundled models.
#include "tapred/model_io.hpp"
#include "tapred/region_graph.hpp"
#include "tapred/ta_predict.hpp"

#include <benchmark/benchmark.h>

#include <string>

using namespace tapred;

namespace {

struct Plant {
  const char* model;
  long long delta;
  long long q, p;  // sampling period q/p, 0 for none
};

const Plant kPlants[] = {
    {"G.json", 4, 0, 1},
    {"B.json", 5, 0, 1},
    {"B.json", 7, 3, 5},
    {"B.json", 20, 1, 5},
};

TimedAutomaton plant(const Plant& p) {
  TwinOptions o;
  if (p.q) o.sampling = SamplingSpec::from(Rational(p.q, p.p));
  auto a = load_model(std::string(TAPRED_MODELS_DIR) + "/" + p.model).ta();
  return build_twin_plant(prepare(a, o), p.delta, o).product.automaton;
}

void run(benchmark::State& state, bool parallel) {
  const Plant& p = kPlants[state.range(0)];
  TimedAutomaton a = plant(p);
  RegionGraphOptions o;
  o.parallel = parallel;
  int nodes = 0;
  for (auto _ : state) {
    RegionGraph g = region_graph(a, o);
    nodes = g.num_nodes();
    benchmark::DoNotOptimize(g.edges.data());
  }
  state.counters["nodes"] = nodes;
  state.SetLabel(std::string(p.model) + " bound " + std::to_string(p.delta) +
                 (p.q ? " at " + std::to_string(p.q) + "/" + std::to_string(p.p) : ""));
}

void BM_Serial(benchmark::State& state) { run(state, false); }
void BM_Parallel(benchmark::State& state) { run(state, true); }

}  // namespace

BENCHMARK(BM_Serial)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "leafy/compiler.hpp"
#include "leafy/corpus.hpp"
#include "leafy/emptiness.hpp"
#include "leafy/fica.hpp"
#include "leafy/vass.hpp"

using namespace leafy;

namespace {

void BM_CompileWorked(benchmark::State& st) {
  auto* t = corpus::find_term("worked");
  auto p = fica::parse_program(t->source);
  for (auto _ : st) benchmark::DoNotOptimize(compiler::compile(p.ctx, p.term, t->max));
}
BENCHMARK(BM_CompileWorked)->Unit(benchmark::kMillisecond);

void BM_MayTerminate(benchmark::State& st) {
  auto p = fica::parse_program(corpus::find_term("sem_guard")->source);
  for (auto _ : st) benchmark::DoNotOptimize(fica::may_terminate(p.term, 1));
}
BENCHMARK(BM_MayTerminate)->Unit(benchmark::kMillisecond);

void emptiness_of(benchmark::State& st, const char* name) {
  auto* t = corpus::find_term(name);
  auto p = fica::parse_program(t->source);
  auto c = compiler::compile(p.ctx, p.term, t->max);
  auto loc = lla::localize(c.automaton, compiler::branching_bound(p.ctx, p.term, t->max));
  for (auto _ : st) benchmark::DoNotOptimize(emptiness::decide_emptiness(loc));
}
BENCHMARK_CAPTURE(emptiness_of, read_after_write, "read_after_write")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(emptiness_of, race, "race")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(emptiness_of, arg_write, "arg_write")->Unit(benchmark::kMillisecond);

// a chain of n states feeding one counter up to n
void BM_VassChain(benchmark::State& st) {
  int n = static_cast<int>(st.range(0));
  vass::Vass v;
  v.num_counters = 1;
  for (int i = 0; i <= 2 * n; ++i) v.add_state("s" + std::to_string(i));
  for (int i = 0; i < n; ++i) v.add({i, i + 1, {}, {0}, i});
  for (int i = n; i < 2 * n; ++i) v.add({i, i + 1, {0}, {}, i});
  vass::Query q;
  q.source = 0;
  q.targets = {2 * n};
  for (auto _ : st) benchmark::DoNotOptimize(vass::reach(v, q, 255));
  st.SetComplexityN(n);
}
BENCHMARK(BM_VassChain)->RangeMultiplier(4)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();

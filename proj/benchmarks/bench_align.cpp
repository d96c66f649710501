#include <benchmark/benchmark.h>

#include <random>

#include "morphtyp/aligner.hpp"
#include "morphtyp/seg_eval.hpp"

namespace {

using namespace morphtyp;

void BM_NwAlign(benchmark::State& state) {
  std::mt19937 rng(3);
  const char* morphs[] = {"an", "ta", "s", "lar", "de", "gel"};
  std::vector<std::vector<std::string>> seqs;
  for (int i = 0; i < 64; ++i) {
    std::vector<std::string> s;
    int len = 1 + static_cast<int>(rng() % static_cast<int>(state.range(0)));
    for (int k = 0; k < len; ++k) s.push_back(morphs[rng() % 6]);
    seqs.push_back(std::move(s));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = seqs[i % seqs.size()];
    const auto& b = seqs[(i + 7) % seqs.size()];
    benchmark::DoNotOptimize(nw_align(a, b));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NwAlign)->Arg(5)->Arg(12);

void BM_TrainIbm1(benchmark::State& state) {
  std::mt19937 rng(9);
  std::vector<std::string> src, tgt;
  for (int i = 0; i < 200; ++i) {
    src.push_back("s" + std::to_string(i));
    tgt.push_back("t" + std::to_string(i));
  }
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  for (int n = 0; n < static_cast<int>(state.range(0)); ++n) {
    std::vector<std::string> a, b;
    int len = 4 + static_cast<int>(rng() % 8);
    for (int k = 0; k < len; ++k) {
      int w = static_cast<int>(rng() % 200);
      a.push_back(src[w]);
      b.push_back(tgt[w]);
    }
    pairs.emplace_back(a, b);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_ibm1(pairs, 5));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainIbm1)->Arg(200)->Arg(1000);

}  // namespace

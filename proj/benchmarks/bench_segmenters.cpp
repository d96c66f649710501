#include <benchmark/benchmark.h>

#include <random>

#include "morphtyp/bpe.hpp"
#include "morphtyp/morfessor.hpp"
#include "morphtyp/unigram.hpp"

namespace {

using namespace morphtyp;

std::map<std::string, std::int64_t> synthetic_types(int roots) {
  std::mt19937 rng(7);
  const char* suffixes[8] = {"", "lar", "da", "larda", "di", "yor", "dan", "li"};
  const std::string letters = "abcdefgiklmnoprstuyz";
  std::map<std::string, std::int64_t> out;
  for (int r = 0; r < roots; ++r) {
    std::string root;
    int len = 3 + static_cast<int>(rng() % 4);
    for (int i = 0; i < len; ++i) root.push_back(letters[rng() % letters.size()]);
    for (const char* s : suffixes) out[root + s] += 1 + static_cast<std::int64_t>(rng() % 40);
  }
  return out;
}

void BM_TrainBpe(benchmark::State& state) {
  auto types = synthetic_types(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_bpe(types, types.size() / 2));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(types.size()));
}
BENCHMARK(BM_TrainBpe)->Arg(50)->Arg(125);

void BM_TrainUnigram(benchmark::State& state) {
  auto types = synthetic_types(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_unigram(types, types.size() / 3));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(types.size()));
}
BENCHMARK(BM_TrainUnigram)->Arg(50)->Arg(125);

void BM_TrainMorfessor(benchmark::State& state) {
  auto types = synthetic_types(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_morfessor(types));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(types.size()));
}
BENCHMARK(BM_TrainMorfessor)->Arg(50)->Arg(125);

void BM_UnigramViterbi(benchmark::State& state) {
  auto types = synthetic_types(100);
  UnigramModel model = train_unigram(types, types.size() / 3);
  std::vector<std::string> words;
  for (const auto& [w, c] : types) words.push_back(w);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.segment(words[i++ % words.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_UnigramViterbi);

void BM_BpeSegment(benchmark::State& state) {
  auto types = synthetic_types(100);
  BpeModel model = train_bpe(types, types.size() / 2);
  std::vector<std::string> words;
  for (const auto& [w, c] : types) words.push_back(w);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.segment(words[i++ % words.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BpeSegment);

}  // namespace

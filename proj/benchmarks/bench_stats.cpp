#include <benchmark/benchmark.h>

#include <random>

#include "morphtyp/linear_model.hpp"
#include "morphtyp/metrics.hpp"

namespace {

using namespace morphtyp;

PredictorTable random_table(int n, int k, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  PredictorTable table;
  for (int j = 0; j < k; ++j) table.predictor_names.push_back("x" + std::to_string(j));
  table.response_names = {"y"};
  for (int i = 0; i < n; ++i) {
    PredictorRow row;
    row.sentence_id = std::to_string(i);
    double y = noise(rng);
    for (int j = 0; j < k; ++j) {
      double v = uni(rng);
      row.predictors[table.predictor_names[j]] = v;
      y += (j % 3 == 0 ? 0.8 : 0.0) * v;
    }
    row.responses["y"] = y;
    table.rows.push_back(std::move(row));
  }
  return table;
}

void BM_FitLinearModel(benchmark::State& state) {
  PredictorTable table = random_table(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(1)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_linear_model(table, "y"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitLinearModel)->Args({500, 10})->Args({3000, 25});

void BM_SentenceChrf(benchmark::State& state) {
  std::string hyp = "the translation model produced this output sentence";
  std::string ref = "the translation system produced this reference sentence";
  for (auto _ : state) {
    benchmark::DoNotOptimize(sentence_chrf(hyp, ref));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SentenceChrf);

void BM_SentenceBleu(benchmark::State& state) {
  std::vector<std::string> hyp = {"the", "model", "produced", "this", "output", "sentence"};
  std::vector<std::string> ref = {"the", "system", "produced", "this", "reference", "sentence"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(sentence_bleu(hyp, ref));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SentenceBleu);

}  // namespace

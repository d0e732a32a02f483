#include <benchmark/benchmark.h>

#include <random>

#include "polymt/alignment.hpp"
#include "polymt/bpe.hpp"
#include "polymt/evaluation.hpp"
#include "polymt/lexicon.hpp"
#include "polymt/netag.hpp"
#include "synthetic.hpp"

using namespace polymt;

namespace {

std::vector<Tokens> sentences(std::size_t n) {
  std::mt19937_64 rng(1);
  std::vector<Tokens> out;
  for (std::size_t s = 0; s < n; ++s) {
    Tokens t;
    for (std::size_t i = 0, len = 5 + rng() % 20; i < len; ++i) t.push_back(synth::syllables(rng, 1 + rng() % 4, false));
    out.push_back(t);
  }
  return out;
}

void BM_BpeLearn(benchmark::State& state) {
  const auto corpus = sentences(2000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(learn_bpe(corpus, static_cast<std::size_t>(state.range(0)), {}, VocabSide::source, nullptr));
  }
}
BENCHMARK(BM_BpeLearn)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BpeApply(benchmark::State& state) {
  const auto corpus = sentences(2000);
  const auto model = learn_bpe(corpus, 1000, {}, VocabSide::source, nullptr);
  for (auto _ : state) {
    for (const auto& s : corpus) benchmark::DoNotOptimize(apply_bpe(model, s));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus.size()));
}
BENCHMARK(BM_BpeApply)->Unit(benchmark::kMillisecond);

void BM_EmIteration(benchmark::State& state) {
  const auto b = synth::planted_bitext(3, static_cast<std::size_t>(state.range(0)), 200, 10);
  for (auto _ : state) benchmark::DoNotOptimize(train_em(b.pairs, 1, {}, nullptr, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EmIteration)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CorpusBleu(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto hyps = synth::random_sentences(rng, 3000, 30, 200);
  const auto refs = synth::random_sentences(rng, 3000, 30, 200);
  for (auto _ : state) benchmark::DoNotOptimize(corpus_bleu(hyps, refs));
}
BENCHMARK(BM_CorpusBleu)->Unit(benchmark::kMillisecond);

void BM_TagTrainingPair(benchmark::State& state) {
  const auto world = synth::entity_world(4, 1000);
  for (auto _ : state) {
    for (const auto& [src, tgt] : world.pairs) benchmark::DoNotOptimize(tag_training_pair(src, tgt, world.table, "en", "sw"));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(world.pairs.size()));
}
BENCHMARK(BM_TagTrainingPair)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

#include <doctest.h>

#include <random>

#include "check.hpp"
#include "oracles.hpp"
#include "polymt/evaluation.hpp"
#include "synthetic.hpp"

using namespace polymt;
using testing::error_code;

namespace {

std::vector<RubricJudgment> judgments(std::size_t acc, std::size_t almost, std::size_t bad) {
  std::vector<RubricJudgment> out;
  for (std::size_t i = 0; i < acc; ++i) out.push_back({true, true, true, RubricCategory::accurate});
  for (std::size_t i = 0; i < almost; ++i) out.push_back({false, false, true, RubricCategory::almost_accurate});
  for (std::size_t i = 0; i < bad; ++i) out.push_back({true, true, false, RubricCategory::inaccurate});
  return out;
}

}  // namespace

TEST_SUITE("evaluation") {
TEST_CASE("bleu basics") {
  const std::vector<Tokens> refs{tokenize("the cat is on the mat"), tokenize("there is a cat here")};
  const auto same = corpus_bleu(refs, refs);
  CHECK(same.score == 100.0);
  CHECK(same.brevity_penalty == 1.0);

  const std::vector<Tokens> hyp{tokenize("the the the the the the the")};
  const std::vector<Tokens> ref{tokenize("the cat is on the mat")};
  const auto r = corpus_bleu(hyp, ref);
  CHECK(r.precisions[0] == 2.0 / 7.0);
  CHECK(r.matches[0] == 2);
  CHECK(r.totals[0] == 7);
  CHECK(r.score == 0.0);

  const std::vector<Tokens> short_hyp{tokenize("the cat is on")};
  const auto bp = corpus_bleu(short_hyp, ref);
  CHECK(bp.brevity_penalty == doctest::Approx(std::exp(1.0 - 6.0 / 4.0)));
  CHECK(bp.score == doctest::Approx(100.0 * std::exp(1.0 - 6.0 / 4.0)));

  CHECK(error_code([&] { corpus_bleu(hyp, refs); }) == Errc::length_mismatch);
  CHECK(error_code([] { corpus_bleu(std::vector<Tokens>{}, std::vector<Tokens>{}); }) == Errc::empty_corpus);
  CHECK(error_code([&] { corpus_bleu(hyp, ref, 0); }) == Errc::invalid_argument);
}

TEST_CASE("bleu agrees with brute-force counting and ignores sentence order") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const auto hyps = synth::random_sentences(rng, n, 12, 5);
    const auto refs = synth::random_sentences(rng, n, 12, 5);
    const int max_n = 1 + static_cast<int>(rng() % 4);
    std::vector<double> p;
    const double expected = oracle::bleu(hyps, refs, max_n, &p);
    const auto got = corpus_bleu(hyps, refs, max_n);
    CHECK(std::abs(got.score - expected) < 1e-9);
    for (int k = 0; k < max_n; ++k) CHECK(std::abs(got.precisions[k] - p[k]) < 1e-12);
    CHECK(got.score >= 0.0);
    CHECK(got.score <= 100.0);

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Tokens> h2, r2;
    for (auto i : perm) {
      h2.push_back(hyps[i]);
      r2.push_back(refs[i]);
    }
    CHECK(corpus_bleu(h2, r2, max_n).score == got.score);
  }
}

TEST_CASE("sentence bleu smoothing") {
  const auto ref = tokenize("the cat is on the mat");
  CHECK(sentence_bleu(ref, ref) == doctest::Approx(100.0));
  CHECK(sentence_bleu(tokenize("the cat sat"), ref, 4, false) == 0.0);
  CHECK(sentence_bleu(tokenize("the cat sat"), ref, 4, true) > 0.0);
  CHECK(sentence_bleu(Tokens{}, ref) == 0.0);
}

TEST_CASE("reports") {
  const std::vector<Tokens> refs{tokenize("a b c d")};
  const auto r = corpus_bleu(refs, refs);
  CHECK(format_bleu_summary(r).starts_with("BLEU = 100.00, 100.0/100.0/100.0/100.0"));
  CHECK(format_bleu_tsv(r).find("bleu\t100.0000\n") != std::string::npos);
}

TEST_CASE("judging") {
  const DecodeTable d{{1, {"Noah", "Noa"}}, {2, {"Shem", "Sem"}}};
  const auto ref = tokenize("Noa och Sem");
  CHECK(judge_sentence(tokenize("Noa och Sem"), ref, d, true).category == RubricCategory::accurate);
  CHECK(judge_sentence(tokenize("Noa och"), ref, d, true).category == RubricCategory::almost_accurate);
  CHECK(judge_sentence(tokenize("Sem och Noa"), ref, d, true).category == RubricCategory::almost_accurate);
  CHECK(judge_sentence(tokenize("Noa och Sem"), ref, d, false).category == RubricCategory::inaccurate);
  CHECK(judge_sentence(tokenize("Noa och Sem"), ref, d, std::nullopt).category == RubricCategory::pending);
  CHECK(rubric_category_name(RubricCategory::pending) == "pending-human");
}

TEST_CASE("aggregation") {
  const auto s = aggregate_rubric(judgments(194, 108, 18));
  CHECK(s.count == 320);
  CHECK(s.accurate_pct == 60.6);
  CHECK(s.almost_accurate_pct == 33.8);
  CHECK(s.inaccurate_pct == 5.6);
  const auto all = aggregate_rubric(judgments(5, 0, 0));
  CHECK(all.accurate_pct == 100.0);
  CHECK(all.inaccurate_pct == 0.0);
  const auto thirds = aggregate_rubric(judgments(1, 1, 1));
  CHECK(thirds.accurate_pct == 33.3);
  CHECK(thirds.almost_accurate_pct == 33.3);
  CHECK(thirds.inaccurate_pct == 33.3);
  auto pending = judgments(1, 0, 0);
  pending.push_back({true, true, std::nullopt, RubricCategory::pending});
  CHECK(error_code([&] { aggregate_rubric(pending); }) == Errc::unresolved_judgments);
  CHECK(error_code([] { aggregate_rubric(std::vector<RubricJudgment>{}); }) == Errc::empty_corpus);
}

TEST_CASE("aggregate percentages sum to 100 within rounding") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = aggregate_rubric(judgments(rng() % 50, rng() % 50, 1 + rng() % 50));
    CHECK(std::abs(s.accurate_pct + s.almost_accurate_pct + s.inaccurate_pct - 100.0) <= 0.15 + 1e-9);
  }
}

TEST_CASE("the 194/108/18 triple is the only one over 320 matching the reported percentages") {
  std::size_t hits = 0;
  for (std::size_t a = 0; a <= 320; ++a) {
    for (std::size_t b = 0; a + b <= 320; ++b) {
      const auto s = aggregate_rubric(judgments(a, b, 320 - a - b));
      if (s.accurate_pct == 60.6 && s.almost_accurate_pct == 33.8 && s.inaccurate_pct == 5.6) {
        ++hits;
        CHECK(a == 194);
        CHECK(b == 108);
      }
    }
  }
  CHECK(hits == 1);
}

TEST_CASE("rubric JSON lines") {
  auto j = judgments(1, 1, 1);
  j.push_back({false, false, std::nullopt, RubricCategory::pending});
  const std::string text = format_rubric_jsonl(j);
  CHECK(text.find("\"meaning\":null") != std::string::npos);
  const auto back = parse_rubric_jsonl(text);
  REQUIRE(back.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back[i].category == j[i].category);
    CHECK(back[i].meaning_accurate == j[i].meaning_accurate);
  }
  CHECK(error_code([] { parse_rubric_jsonl("{\"set_correct\":true}\n"); }) == Errc::parse_error);
}
}

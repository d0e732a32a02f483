// Acceptance checks. One line per criterion; nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "polymt/alignment.hpp"
#include "polymt/bpe.hpp"
#include "polymt/corpus.hpp"
#include "polymt/evaluation.hpp"
#include "polymt/harness.hpp"
#include "polymt/labeling.hpp"
#include "polymt/languages.hpp"
#include "polymt/lexicon.hpp"
#include "polymt/netag.hpp"
#include "synthetic.hpp"

using namespace polymt;

namespace {

// Tolerances and limits.
constexpr double kBleuTol = 1e-9;
constexpr double kGlExpected = 0.2247;
constexpr double kGlTol = 1e-4;
constexpr double kLogTol = 0.005;
constexpr double kFitTol = 1e-9;
constexpr double kEmTol = 1e-9;
constexpr double kMinAlignPrecision = 0.95;
constexpr double kMinEntityRecovery = 0.90;
constexpr double kSplitTol = 1.0;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double limit_seconds;  // 0 = no runtime bound
  std::function<Outcome()> check;
};

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const std::vector<std::pair<double, double>> kWordCountScores = {
    {53589, 25.2},  {107262, 30.6}, {161332, 32.9}, {214185, 32.7}, {268228, 34.2},
    {322116, 34.2}, {375439, 33.8}, {429470, 33.6}, {483440, 34.3}, {538030, 34.9}};
const double kPublishedLogs[] = {4.73, 5.03, 5.21, 5.33, 5.43, 5.51, 5.57, 5.63, 5.68, 5.73};

Outcome ac1() {
  Outcome o;
  const std::string got = join(label_tokens(language("fr"), language("en"), LabelMode::language_plus_family));
  o.require(got == "__opt_family_src_romance __opt_family_tgt_germanic __opt_src_fr __opt_tgt_en", "got '" + got + "'");
  return o;
}

bool dense_increasing(const Tokens& text, std::uint32_t k) {
  std::uint32_t expect = 1;
  for (const auto& t : text) {
    if (const auto i = placeholder_index(t)) {
      if (*i != expect) return false;
      ++expect;
    }
  }
  return expect == k + 1;
}

Outcome ac2() {
  Outcome o;
  const auto world = synth::entity_world(2024, 1000, 10);
  std::size_t restored = 0, ordered = 0, max_k = 0;
  for (const auto& [src, tgt] : world.pairs) {
    const auto p = tag_training_pair(src, tgt, world.table, "en", "sw");
    restored += restore_placeholders(p.target.text, p.decode) == tgt;
    ordered += dense_increasing(p.source.text, p.source.k);
    max_k = std::max<std::size_t>(max_k, p.source.k);
  }
  o.require(world.pairs.size() == 1000, "corpus size");
  o.require(restored == 1000, fmt("restored %.0f/1000", static_cast<double>(restored)));
  o.require(ordered == 1000, fmt("dense indices %.0f/1000", static_cast<double>(ordered)));
  o.require(max_k >= 5, "too few planted entities to exercise ordering");
  o.detail = o.ok ? "1000/1000 restored, max k=" + std::to_string(max_k) : o.detail;
  return o;
}

Outcome ac3() {
  Outcome o;
  std::vector<LexiconEntry> rows;
  const char* pairs[][2] = {{"Noah", "Noa"}, {"Shem", "Sem"}, {"Ham", "Ham"}, {"Japheth", "Jafet"}};
  for (std::size_t i = 0; i < 4; ++i) {
    LexiconEntry e;
    e.id = i + 1;
    e.surfaces = {{"en", pairs[i][0]}, {"sw", pairs[i][1]}};
    rows.push_back(e);
  }
  const LexiconTable table(rows);
  const auto t = tag_source(tokenize("And Noah fathered three sons, Shem, Ham, and Japheth."), table, "en", "sw");
  o.require(join(t.sentence.text) == "And $NE1 fathered three sons , $NE2 , $NE3 , and $NE4 .",
            "tagged '" + join(t.sentence.text) + "'");
  o.require(t.sentence.k == 4, "k != 4");
  for (std::uint32_t i = 1; i <= 4; ++i) {
    o.require(t.decode.count(i) && t.decode.at(i).target == pairs[i - 1][1], "decode target " + std::to_string(i));
  }
  const auto restored = restore_placeholders(tokenize("Och $NE1 födde tre söner, $NE2 $NE3 och $NE4"), t.decode);
  o.require(restored == tokenize("Och Noa födde tre söner, Sem Ham och Jafet"), "restored '" + join(restored) + "'");
  return o;
}

Outcome ac4() {
  Outcome o;
  std::mt19937_64 rng(404);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 10;
    const auto hyps = synth::random_sentences(rng, n, 12, 5);
    const auto refs = synth::random_sentences(rng, n, 12, 5);
    worst = std::max(worst, std::abs(corpus_bleu(hyps, refs).score - oracle::bleu(hyps, refs, 4, nullptr)));
  }
  o.require(worst <= kBleuTol, fmt("max |diff| %.3g", worst));
  const std::vector<Tokens> refs{tokenize("the cat is on the mat"), tokenize("a b c d e")};
  o.require(corpus_bleu(refs, refs).score == 100.0, "identity score != 100");
  const std::vector<Tokens> hyp{tokenize("the the the the the the the")};
  const std::vector<Tokens> ref{tokenize("the cat is on the mat")};
  o.require(corpus_bleu(hyp, ref).precisions[0] == 2.0 / 7.0, "p1 != 2/7");
  if (o.ok) o.detail = fmt("max |diff| %.3g over 100 corpora", worst);
  return o;
}

Outcome ac5() {
  Outcome o;
  GlState s;
  s = gl_update(s, 1, 40.0).state;
  s = gl_update(s, 2, 44.5).state;
  const auto r = gl_update(s, 3, 44.4);
  o.require(std::abs(r.gl - kGlExpected) <= kGlTol, fmt("gl %.6f", r.gl));
  o.require(r.decision == GlDecision::stop, "decision is not stop");
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    GlState m;
    double v = static_cast<double>(rng() % 100);
    for (std::size_t e = 1; e <= 30; ++e) {
      v += static_cast<double>(rng() % 3);  // non-decreasing
      const auto step = gl_update(m, e, v);
      o.require(step.decision == GlDecision::continue_training, "monotone sequence stopped");
      m = step.state;
    }
  }
  if (o.ok) o.detail = fmt("gl %.4f", r.gl);
  return o;
}

Outcome ac6() {
  Outcome o;
  o.require(format_log10(log10_rounded(53589)) == "4.73", "log10(53589) printed as " + format_log10(log10_rounded(53589)));
  for (std::size_t i = 0; i < kWordCountScores.size(); ++i) {
    const auto words = static_cast<std::uint64_t>(kWordCountScores[i].first);
    const double rounded = *log10_rounded(words);
    o.require(std::abs(rounded - kPublishedLogs[i]) <= kLogTol, "row " + std::to_string(i + 1));
    o.require(std::abs(std::log10(kWordCountScores[i].first) - kPublishedLogs[i]) <= kLogTol, "raw row " + std::to_string(i + 1));
  }
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto f = fit_power_law(kWordCountScores);
  const auto e = oracle::least_squares_log10(kWordCountScores);
  o.require(f.slope > 0, "slope not positive");
  o.require(std::abs(f.slope - e.slope) <= kFitTol, "slope differs");
  o.require(std::abs(f.intercept - e.intercept) <= kFitTol, "intercept differs");
  o.require(std::abs(f.r_squared - e.r_squared) <= kFitTol, "r2 differs");
  if (o.ok) o.detail = fmt("slope %.4f, r2 %.4f", f.slope, f.r_squared);
  return o;
}

Outcome ac8() {
  Outcome o;
  std::vector<std::string> ids;
  for (int i = 0; i < 10000; ++i) ids.push_back("V" + std::to_string(100000 + i));
  const AblationPlan plan{0.2, 8, 10000};
  const auto a = sample_low_resource(ids, {}, plan);
  const auto b = sample_low_resource(ids, {}, plan);
  const std::set<std::string> distinct(a.ids.begin(), a.ids.end());
  o.require(a.ids.size() == 10000, "size " + std::to_string(a.ids.size()));
  o.require(distinct.size() <= 2000, "distinct " + std::to_string(distinct.size()));
  std::multiset<std::string> ma(a.ids.begin(), a.ids.end()), mb(b.ids.begin(), b.ids.end());
  o.require(ma == mb, "same seed gave different multisets");
  if (o.ok) o.detail = std::to_string(distinct.size()) + " distinct of 10000";
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto b = synth::planted_bitext(17, 200, 20, 10);
  EmTrace trace;
  const auto table = train_em(b.pairs, 5, {}, &trace);
  std::size_t correct = 0, total = 0;
  for (std::size_t p = 0; p < b.pairs.size(); ++p) {
    for (const auto& l : viterbi_align(table, table.params, b.pairs[p])) {
      ++total;
      correct += std::find(b.gold[p].begin(), b.gold[p].end(), l) != b.gold[p].end();
    }
  }
  const double precision = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  o.require(precision >= kMinAlignPrecision, fmt("precision %.4f", precision));

  AlignerSet aligners;
  aligners.emplace("sw", table);
  const auto lex = assemble_table(b.entities, synth::as_corpus(b.pairs), aligners, {});
  std::size_t recovered = 0;
  for (const auto& name : b.entities) {
    const LexiconEntry* e = lex.find_english(name);
    recovered += e != nullptr && e->surface("sw") == b.dictionary.at(name);
  }
  const double recovery = static_cast<double>(recovered) / static_cast<double>(b.entities.size());
  o.require(b.entities.size() == 10, "entity count");
  o.require(recovery >= kMinEntityRecovery, fmt("entity recovery %.2f", recovery));

  for (std::size_t k = 1; k < trace.log_likelihood.size(); ++k) {
    o.require(trace.log_likelihood[k] >= trace.log_likelihood[k - 1] - kEmTol, "log-likelihood decreased");
  }

  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SentencePair> small;
    std::vector<std::pair<Tokens, Tokens>> plain;
    const std::size_t pairs = 2 + rng() % 5;
    for (std::size_t p = 0; p < pairs; ++p) {
      SentencePair sp;
      for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) sp.source.push_back("s" + std::to_string(rng() % 4));
      for (std::size_t j = 0, m = 1 + rng() % 3; j < m; ++j) sp.target.push_back("t" + std::to_string(rng() % 4));
      small.push_back(sp);
      plain.emplace_back(sp.source, sp.target);
    }
    const auto expected = oracle::em_step_by_enumeration(plain, oracle::uniform_table(plain), 0.0, 0.0, nullptr);
    const auto got = train_em(small, 1, {0.0, 0.0}, nullptr, 1);
    std::size_t seen = 0;
    got.for_each_sorted([&](const std::string& e, const std::string& f, double p) {
      const auto it = expected.find({e, f});
      o.require(it != expected.end() && std::abs(it->second - p) <= kEmTol, "Model 1 entry " + e + "/" + f);
      ++seen;
    });
    o.require(seen == expected.size(), "Model 1 table size");
  }
  if (o.ok) o.detail = fmt("precision %.4f, entities %.0f/10", precision, static_cast<double>(recovered));
  return o;
}

std::string random_word(std::mt19937_64& rng) {
  static const char* const kPieces[] = {"a", "b", "c", "l", "o", "w", "é", "ö", "ß", "я", "ж", "q", "x", "ł"};
  std::string w;
  for (std::size_t i = 0, len = 1 + rng() % 7; i < len; ++i) w += kPieces[rng() % 14];
  return w;
}

bool reserved_shape(const std::string& t) { return is_placeholder(t) || t.starts_with("__opt_"); }

Outcome ac10() {
  Outcome o;
  std::mt19937_64 rng(1010);
  std::vector<Tokens> corpus;
  for (int s = 0; s < 1000; ++s) {
    Tokens t;
    for (std::size_t i = 0, len = rng() % 14; i < len; ++i) {
      switch (rng() % 6) {
        case 0: t.push_back(placeholder(static_cast<std::uint32_t>(1 + rng() % 20))); break;
        case 1: t.push_back(std::string(rng() % 2 ? "__opt_src_" : "__opt_family_tgt_") + (rng() % 2 ? "sw" : "germanic")); break;
        default: t.push_back(random_word(rng));
      }
    }
    corpus.push_back(t);
  }
  const auto model = learn_bpe(corpus, 300, {}, VocabSide::source, nullptr);
  std::size_t identical = 0;
  for (const auto& s : corpus) {
    const auto pieces = apply_bpe(model, s);
    identical += revert_bpe(pieces) == s;
    std::size_t in_reserved = 0, out_reserved = 0;
    for (const auto& t : s) in_reserved += reserved_shape(t);
    for (const auto& p : pieces) {
      out_reserved += reserved_shape(p);
      o.require(reserved_shape(p) || (p.find("$NE") == std::string::npos && p.find("__opt") == std::string::npos),
                "reserved token split into '" + p + "'");
    }
    o.require(in_reserved == out_reserved, "reserved token count changed");
  }
  o.require(identical == 1000, fmt("round trip %.0f/1000", static_cast<double>(identical)));

  // Merge sequence versus brute-force pair counting on the non-reserved words.
  std::map<std::string, std::uint64_t> counts;
  for (const auto& s : corpus) {
    for (const auto& t : s) {
      if (!reserved_shape(t)) ++counts[t];
    }
  }
  const auto expected = oracle::learn_merges(counts, 300, {});
  o.require(model.merges().size() == expected.size(), "merge count differs from oracle");
  for (std::size_t k = 0; k < std::min(expected.size(), model.merges().size()); ++k) {
    o.require(model.merges()[k] == expected[k], "merge " + std::to_string(k + 1) + " differs from oracle");
  }
  if (o.ok) o.detail = std::to_string(model.merges().size()) + " merges, 1000/1000 round trips";
  return o;
}

Outcome ac11() {
  Outcome o;
  const auto corpus = synth::id_corpus(23000);
  const auto a = split_corpus(corpus, {0.75, 0.15, 0.10}, 42);
  const auto b = split_corpus(corpus, {0.75, 0.15, 0.10}, 42);
  auto near = [](std::size_t got, double want) { return std::abs(static_cast<double>(got) - want) <= kSplitTol; };
  o.require(near(a.train.size(), 17250) && near(a.val.size(), 3450) && near(a.test.size(), 2300),
            "sizes " + std::to_string(a.train.size()) + "/" + std::to_string(a.val.size()) + "/" +
                std::to_string(a.test.size()));
  o.require(a.train == b.train && a.val == b.val && a.test == b.test, "not deterministic");
  if (o.ok) {
    o.detail = std::to_string(a.train.size()) + "/" + std::to_string(a.val.size()) + "/" + std::to_string(a.test.size());
  }
  return o;
}

Outcome ac12() {
  Outcome o;
  std::vector<RubricJudgment> j;
  for (int i = 0; i < 194; ++i) j.push_back({true, true, true, categorize(true, true, true)});
  for (int i = 0; i < 108; ++i) j.push_back({false, false, true, categorize(false, false, true)});
  for (int i = 0; i < 18; ++i) j.push_back({true, true, false, categorize(true, true, false)});
  const auto s = aggregate_rubric(j);
  o.require(s.accurate_pct == 60.6 && s.almost_accurate_pct == 33.8 && s.inaccurate_pct == 5.6,
            fmt("got %.1f/%.1f", s.accurate_pct, s.almost_accurate_pct) + fmt("/%.1f", s.inaccurate_pct));
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "label format", 1.0, ac1},
      {"AC2", "entity round trip on 1000 pairs", 10.0, ac2},
      {"AC3", "four-entity tagging and restoration", 0, ac3},
      {"AC4", "BLEU oracle equivalence", 0, ac4},
      {"AC5", "generalization loss arithmetic", 0, ac5},
      {"AC6", "published word-count log10 consistency", 0, ac6},
      {"AC7", "power-law fit", 0, ac7},
      {"AC8", "ablation sampler", 5.0, ac8},
      {"AC9", "alignment recovery", 60.0, ac9},
      {"AC10", "BPE properties", 0, ac10},
      {"AC11", "split exactness", 0, ac11},
      {"AC12", "rubric aggregation", 0, ac12},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.ok = false;
      o.detail = fmt("took %.2f s, limit %.0f s", secs, c.limit_seconds);
    }
    failures += !o.ok;
    std::printf("[%s] %s %s (%.3f s)%s%s\n", o.ok ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

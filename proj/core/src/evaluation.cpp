#include "polymt/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "polymt/io.hpp"

namespace polymt {

namespace {

using json = nlohmann::json;
using NgramCounts = std::map<std::vector<std::string>, std::uint64_t>;

NgramCounts count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

std::uint64_t clipped_matches(const NgramCounts& hyp, const NgramCounts& ref) {
  std::uint64_t m = 0;
  for (const auto& [gram, c] : hyp) {
    const auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(c, it->second);
  }
  return m;
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

}  // namespace

BleuReport corpus_bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references, int max_n) {
  if (hypotheses.size() != references.size()) {
    throw Error(Errc::length_mismatch, std::to_string(hypotheses.size()) + " hypotheses vs " +
                                           std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) throw Error(Errc::empty_corpus, "nothing to score");
  if (max_n < 1) throw Error(Errc::invalid_argument, "max_n must be at least 1");

  BleuReport r;
  const auto n_max = static_cast<std::size_t>(max_n);
  r.matches.assign(n_max, 0);
  r.totals.assign(n_max, 0);
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    r.hyp_length += hypotheses[s].size();
    r.ref_length += references[s].size();
    for (std::size_t n = 1; n <= n_max; ++n) {
      const NgramCounts h = count_ngrams(hypotheses[s], n);
      r.matches[n - 1] += clipped_matches(h, count_ngrams(references[s], n));
      if (hypotheses[s].size() >= n) r.totals[n - 1] += hypotheses[s].size() - n + 1;
    }
  }
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < n_max; ++n) {
    const double p = r.totals[n] == 0 ? 0.0 : static_cast<double>(r.matches[n]) / static_cast<double>(r.totals[n]);
    r.precisions.push_back(p);
    if (p == 0.0) zero = true;
    else log_sum += std::log(p);
  }
  if (r.hyp_length == 0) r.brevity_penalty = 0.0;
  else if (r.hyp_length < r.ref_length)
    r.brevity_penalty = std::exp(1.0 - static_cast<double>(r.ref_length) / static_cast<double>(r.hyp_length));
  r.score = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / static_cast<double>(n_max));
  return r;
}

double sentence_bleu(std::span<const std::string> hypothesis, std::span<const std::string> reference, int max_n,
                     bool smooth) {
  if (max_n < 1) throw Error(Errc::invalid_argument, "max_n must be at least 1");
  if (hypothesis.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n); ++n) {
    const auto m = clipped_matches(count_ngrams(hypothesis, n), count_ngrams(reference, n));
    const std::uint64_t total = hypothesis.size() >= n ? hypothesis.size() - n + 1 : 0;
    double p = 0.0;
    if (smooth && n > 1) p = static_cast<double>(m + 1) / static_cast<double>(total + 1);
    else if (total > 0) p = static_cast<double>(m) / static_cast<double>(total);
    if (p == 0.0) return 0.0;
    log_sum += std::log(p);
  }
  const double c = static_cast<double>(hypothesis.size());
  const double ref = static_cast<double>(reference.size());
  const double bp = c < ref ? std::exp(1.0 - ref / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / max_n);
}

std::string format_bleu_tsv(const BleuReport& r) {
  std::string out = "metric\tvalue\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "bleu\t%.4f\n", r.score);
  out += buf;
  for (std::size_t n = 0; n < r.precisions.size(); ++n) {
    std::snprintf(buf, sizeof buf, "p%zu\t%.6f\n", n + 1, r.precisions[n]);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "bp\t%.6f\n", r.brevity_penalty);
  out += buf;
  out += "hyp_len\t" + std::to_string(r.hyp_length) + "\n";
  out += "ref_len\t" + std::to_string(r.ref_length) + "\n";
  return out;
}

std::string format_bleu_summary(const BleuReport& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "BLEU = %.2f, ", r.score);
  std::string out = buf;
  for (std::size_t n = 0; n < r.precisions.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%s%.1f", n == 0 ? "" : "/", 100.0 * r.precisions[n]);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " (BP=%.3f, hyp_len=%llu, ref_len=%llu)", r.brevity_penalty,
                static_cast<unsigned long long>(r.hyp_length), static_cast<unsigned long long>(r.ref_length));
  return out + buf;
}

std::string_view rubric_category_name(RubricCategory c) noexcept {
  switch (c) {
    case RubricCategory::accurate: return "accurate";
    case RubricCategory::almost_accurate: return "almost-accurate";
    case RubricCategory::inaccurate: return "inaccurate";
    case RubricCategory::pending: return "pending-human";
  }
  return "pending-human";
}

RubricCategory categorize(bool set_correct, bool order_correct, std::optional<bool> meaning) noexcept {
  if (!meaning) return RubricCategory::pending;
  if (!*meaning) return RubricCategory::inaccurate;
  return set_correct && order_correct ? RubricCategory::accurate : RubricCategory::almost_accurate;
}

RubricJudgment judge_sentence(std::span<const std::string> hyp, std::span<const std::string> ref,
                              const DecodeTable& decode, std::optional<bool> meaning) {
  const EntityOrderJudgment order = check_entity_order(hyp, ref, decode);
  RubricJudgment j;
  j.set_correct = order.set_correct;
  j.order_correct = order.order_correct;
  j.meaning_accurate = meaning;
  j.category = categorize(j.set_correct, j.order_correct, meaning);
  return j;
}

RubricSummary aggregate_rubric(std::span<const RubricJudgment> judgments) {
  if (judgments.empty()) throw Error(Errc::empty_corpus, "no judgments to aggregate");
  RubricSummary s;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    switch (judgments[i].category) {
      case RubricCategory::accurate: ++s.accurate; break;
      case RubricCategory::almost_accurate: ++s.almost_accurate; break;
      case RubricCategory::inaccurate: ++s.inaccurate; break;
      case RubricCategory::pending:
        throw Error(Errc::unresolved_judgments, "judgment " + std::to_string(i + 1) + " still lacks a meaning flag");
    }
  }
  s.count = judgments.size();
  const double n = static_cast<double>(s.count);
  s.accurate_pct = round1(100.0 * static_cast<double>(s.accurate) / n);
  s.almost_accurate_pct = round1(100.0 * static_cast<double>(s.almost_accurate) / n);
  s.inaccurate_pct = round1(100.0 * static_cast<double>(s.inaccurate) / n);
  return s;
}

std::string format_rubric_jsonl(std::span<const RubricJudgment> judgments) {
  std::string out;
  for (std::size_t i = 0; i < judgments.size(); ++i) {
    const RubricJudgment& j = judgments[i];
    json rec = {{"line", i + 1},
                {"set_correct", j.set_correct},
                {"order_correct", j.order_correct},
                {"meaning", j.meaning_accurate ? json(*j.meaning_accurate) : json(nullptr)},
                {"category", rubric_category_name(j.category)}};
    out += rec.dump() + '\n';
  }
  return out;
}

std::vector<RubricJudgment> parse_rubric_jsonl(std::string_view content) {
  std::vector<RubricJudgment> out;
  std::size_t lineno = 0;
  for (const std::string& line : io::split_lines(content)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const json rec = json::parse(line);
      RubricJudgment j;
      j.set_correct = rec.at("set_correct").get<bool>();
      j.order_correct = rec.at("order_correct").get<bool>();
      const json& m = rec.at("meaning");
      if (!m.is_null()) j.meaning_accurate = m.get<bool>();
      j.category = categorize(j.set_correct, j.order_correct, j.meaning_accurate);
      out.push_back(j);
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, "rubric line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace polymt

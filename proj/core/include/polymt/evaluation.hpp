#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polymt/error.hpp"
#include "polymt/netag.hpp"
#include "polymt/text.hpp"

namespace polymt {

struct BleuReport {
  std::vector<double> precisions;  // p1..p_max_n
  std::vector<std::uint64_t> matches;
  std::vector<std::uint64_t> totals;
  double brevity_penalty = 1.0;
  double score = 0.0;  // 0..100
  std::uint64_t hyp_length = 0;
  std::uint64_t ref_length = 0;
};

/// Unsmoothed corpus BLEU with one reference per hypothesis.
BleuReport corpus_bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references, int max_n = 4);

/// Sentence-level BLEU for diagnostics; with `smooth`, n > 1 precisions use
/// add-one counts.
double sentence_bleu(std::span<const std::string> hypothesis, std::span<const std::string> reference,
                     int max_n = 4, bool smooth = true);

std::string format_bleu_tsv(const BleuReport& report);
std::string format_bleu_summary(const BleuReport& report);

enum class RubricCategory { accurate, almost_accurate, inaccurate, pending };
std::string_view rubric_category_name(RubricCategory c) noexcept;

struct RubricJudgment {
  bool set_correct = false;
  bool order_correct = false;
  std::optional<bool> meaning_accurate;
  RubricCategory category = RubricCategory::pending;
};

RubricCategory categorize(bool set_correct, bool order_correct, std::optional<bool> meaning) noexcept;

RubricJudgment judge_sentence(std::span<const std::string> hyp, std::span<const std::string> ref,
                              const DecodeTable& decode, std::optional<bool> meaning);

struct RubricSummary {
  std::size_t count = 0;
  std::size_t accurate = 0;
  std::size_t almost_accurate = 0;
  std::size_t inaccurate = 0;
  // Percentages rounded to one decimal.
  double accurate_pct = 0.0;
  double almost_accurate_pct = 0.0;
  double inaccurate_pct = 0.0;
};

RubricSummary aggregate_rubric(std::span<const RubricJudgment> judgments);

/// JSON Lines record per sentence:
/// `{"line": n, "set_correct": b, "order_correct": b, "meaning": b|null}`.
/// The category is written for readers and recomputed on import.
std::string format_rubric_jsonl(std::span<const RubricJudgment> judgments);
std::vector<RubricJudgment> parse_rubric_jsonl(std::string_view content);

}  // namespace polymt

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polymt/error.hpp"
#include "polymt/text.hpp"

namespace polymt {

inline constexpr std::string_view kNullWord = "<NULL>";

/// Diagonal alignment prior: a target position j of m prefers source
/// positions i of n near the diagonal, weight exp(-tension * |i/n - j/m|);
/// the NULL word takes a fixed share `null_prob`.
struct DiagonalParams {
  double tension = 4.0;
  double null_prob = 0.08;

  void validate() const;
};

struct SentencePair {
  Tokens source;
  Tokens target;
};

/// A link from a target position to a source position; NULL links are never
/// materialized.
struct AlignmentLink {
  std::size_t src_index;
  std::size_t tgt_index;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

/// Sparse lexical table t(target | source) over co-occurring pairs. Source
/// vocabulary always contains kNullWord.
class TranslationTable {
public:
  using WordId = std::uint32_t;
  static constexpr WordId kNullId = 0;

  TranslationTable();

  std::optional<WordId> source_id(std::string_view word) const;
  std::optional<WordId> target_id(std::string_view word) const;
  const std::string& source_word(WordId id) const { return source_words_.at(id); }
  const std::string& target_word(WordId id) const { return target_words_.at(id); }
  std::size_t source_vocab_size() const noexcept { return source_words_.size(); }
  std::size_t target_vocab_size() const noexcept { return target_words_.size(); }
  std::size_t entry_count() const noexcept;

  /// Zero for pairs that never co-occurred.
  double prob(WordId source, WordId target) const;
  double prob(std::string_view source, std::string_view target) const;
  double row_sum(WordId source) const;

  /// Visits every stored entry sorted by (source word, target word).
  void for_each_sorted(const std::function<void(const std::string&, const std::string&, double)>& fn) const;

  DiagonalParams params;
  int iterations = 0;

  /// TSV `source<TAB>target<TAB>probability`, sorted, after a
  /// `# lambda=.. p0=.. iterations=..` header line.
  std::string serialize() const;
  static TranslationTable parse(std::string_view content);

  // Construction interface used by training and parsing.
  WordId intern_source(std::string_view word);
  WordId intern_target(std::string_view word);
  /// Rows must be finalized (sorted) before prob() is called.
  void set_row(WordId source, std::vector<WordId> targets, std::vector<double> probs);
  const std::vector<WordId>& row_targets(WordId source) const { return rows_.at(source).targets; }
  std::vector<double>& row_probs(WordId source) { return rows_.at(source).probs; }
  const std::vector<double>& row_probs(WordId source) const { return rows_.at(source).probs; }
  /// Index of `target` within the source row, if present.
  std::optional<std::size_t> find_in_row(WordId source, WordId target) const;

private:
  struct Row {
    std::vector<WordId> targets;  // ascending
    std::vector<double> probs;
  };
  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::unordered_map<std::string, WordId> source_index_;
  std::unordered_map<std::string, WordId> target_index_;
  std::vector<Row> rows_;
};

/// Unnormalized diagonal weight for 1-based positions.
double diagonal_weight(std::size_t i, std::size_t j, std::size_t m, std::size_t n, double tension);

struct EmTrace {
  /// Corpus log-likelihood under the table entering each iteration.
  std::vector<double> log_likelihood;
};

/// Uniform initialization: t(f|e) = 1 / |targets co-occurring with e|.
TranslationTable initial_table(std::span<const SentencePair> bitext);

/// EM with the diagonal prior held fixed. The E-step runs over fixed-size
/// blocks of sentence pairs on `workers` threads (0 = hardware concurrency);
/// expected counts are reduced in block order, so the result does not depend
/// on the worker count.
TranslationTable train_em(std::span<const SentencePair> bitext, int iterations, const DiagonalParams& params,
                          EmTrace* trace = nullptr, unsigned workers = 0);

double corpus_log_likelihood(const TranslationTable& table, const DiagonalParams& params,
                             std::span<const SentencePair> bitext);

/// Per target position, the argmax over source positions and NULL of
/// prior * t. NULL links are dropped; target words the table has never seen
/// are reported as "UnseenTargetWord".
std::vector<AlignmentLink> viterbi_align(const TranslationTable& table, const DiagonalParams& params,
                                         const SentencePair& pair, Diagnostics* diagnostics = nullptr);

std::string format_links(std::span<const AlignmentLink> links);

}  // namespace polymt

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polymt/error.hpp"
#include "polymt/text.hpp"

namespace polymt {

inline constexpr std::string_view kEndOfWord = "</w>";
inline constexpr std::string_view kContinuation = "@@";

enum class VocabSide { source, target };
std::string_view vocab_side_name(VocabSide side) noexcept;
VocabSide parse_vocab_side(std::string_view name);

using SymbolPair = std::pair<std::string, std::string>;

struct SymbolPairHash {
  std::size_t operator()(const SymbolPair& p) const noexcept;
};

/// Learned merge list for one side of the bitext. Immutable after
/// construction; apply() is safe to call concurrently.
class BpeModel {
public:
  BpeModel() = default;
  BpeModel(VocabSide side, std::vector<SymbolPair> merges, std::set<std::string> reserved);

  VocabSide side() const noexcept { return side_; }
  const std::vector<SymbolPair>& merges() const noexcept { return merges_; }
  const std::set<std::string>& reserved() const noexcept { return reserved_; }

  /// Explicitly listed tokens plus the built-in label (`__opt_*`) and
  /// placeholder (`$NE<k>`) patterns.
  bool is_reserved(std::string_view token) const;

  /// Subword pieces of a single word; every piece but the last carries the
  /// `@@` continuation suffix.
  Tokens segment(std::string_view word) const;

  /// Model file: `#bpe v1 <side>`, one `left right` merge per line in
  /// priority order, then `#reserved` followed by one token per line.
  std::string serialize() const;
  static BpeModel parse(std::string_view content);

private:
  VocabSide side_ = VocabSide::source;
  std::vector<SymbolPair> merges_;
  std::set<std::string> reserved_;
  std::unordered_map<SymbolPair, std::size_t, SymbolPairHash> ranks_;
};

/// Initial symbol sequence of a word: its codepoints, with the end-of-word
/// marker glued to the last one.
std::vector<std::string> initial_symbols(std::string_view word);

/// Learns exactly `num_merges` greedy most-frequent-pair merges (fewer only if
/// every word collapses to one symbol, reported as "MergesExhausted"). Ties
/// on frequency go to the lexicographically smallest (left, right) pair.
/// Reserved tokens contribute no statistics.
BpeModel learn_bpe(std::span<const Tokens> corpus, std::size_t num_merges, const std::set<std::string>& reserved,
                   VocabSide side = VocabSide::source, Diagnostics* diagnostics = nullptr);
BpeModel learn_bpe_from_counts(const std::map<std::string, std::uint64_t>& word_counts, std::size_t num_merges,
                               const std::set<std::string>& reserved, VocabSide side = VocabSide::source,
                               Diagnostics* diagnostics = nullptr);

Tokens apply_bpe(const BpeModel& model, std::span<const std::string> sentence);

/// Joins `@@`-suffixed pieces back into words. Throws
/// Errc::dangling_continuation when the sequence ends mid-word.
Tokens revert_bpe(std::span<const std::string> pieces);

}  // namespace polymt

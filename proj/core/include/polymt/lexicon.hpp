#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polymt/alignment.hpp"
#include "polymt/corpus.hpp"
#include "polymt/error.hpp"
#include "polymt/text.hpp"

namespace polymt {

/// One named-entity concept across languages. Surfaces are stored as
/// space-joined tokens, so multi-token names compare token by token.
struct LexiconEntry {
  std::size_t id = 0;
  std::map<std::string, std::string> surfaces;     // lang code -> surface
  std::map<std::string, std::size_t> frequencies;  // lang code -> corpus occurrences

  const std::string& english() const;
  /// Empty when the cell is missing.
  std::string_view surface(std::string_view lang) const;
  std::size_t frequency(std::string_view lang) const;
};

class LexiconTable {
public:
  LexiconTable() = default;
  /// Rejects duplicate ids, missing English surfaces, and repeated English
  /// surfaces (Errc::duplicate_entry).
  explicit LexiconTable(std::vector<LexiconEntry> entries);

  const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const LexiconEntry* find_english(std::string_view surface) const;
  /// Languages with at least one non-empty cell, in lexicon column order.
  std::vector<std::string> languages() const;

  /// `id<TAB>en<TAB>de<TAB>...` with all 23 columns; empty cell = missing.
  std::string serialize() const;
  /// `id<TAB>lang<TAB>count` rows for every recorded frequency.
  std::string serialize_frequencies() const;
  static LexiconTable parse(std::string_view table_tsv, std::optional<std::string_view> frequency_tsv = {});

private:
  std::vector<LexiconEntry> entries_;
};

/// Sibling path of the frequency file: `lex.tsv` -> `lex.freq.tsv`.
std::filesystem::path frequency_path_for(const std::filesystem::path& table_path);
void save_lexicon(const LexiconTable& table, const std::filesystem::path& path);
LexiconTable load_lexicon(const std::filesystem::path& path);

/// Cleans raw candidate names: edge punctuation stripped, stoplist words
/// (case-insensitive) and names under two characters dropped,
/// case-insensitive duplicates merged onto the capitalized spelling.
/// Output sorted; Errc::empty_result when nothing survives.
std::vector<std::string> filter_seed_list(std::span<const std::string> raw, const std::set<std::string>& stoplist);

/// Leftmost-longest, case-sensitive, non-overlapping phrase matching over
/// token sequences.
class PhraseMatcher {
public:
  struct Match {
    std::size_t begin;
    std::size_t end;  // exclusive
    std::size_t phrase;
  };

  /// Phrases are token sequences; an empty phrase is ignored. When two phrases
  /// are identical the first one wins.
  explicit PhraseMatcher(std::span<const Tokens> phrases);

  std::vector<Match> find(std::span<const std::string> tokens) const;

private:
  std::vector<Tokens> phrases_;
  // first token -> phrase indices, longest first
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

struct LexiconMatch {
  std::size_t begin;
  std::size_t end;    // exclusive
  std::size_t entry;  // index into LexiconTable::entries()

  friend bool operator==(const LexiconMatch&, const LexiconMatch&) = default;
};

/// Precompiled lookup over one language column. Holds a reference to the
/// table, which must outlive it.
class LexiconMatcher {
public:
  LexiconMatcher(const LexiconTable& table, std::string_view lang);

  std::vector<LexiconMatch> find(std::span<const std::string> tokens) const;
  const LexiconTable& table() const noexcept { return *table_; }

private:
  const LexiconTable* table_;
  std::vector<std::size_t> phrase_entry_;
  PhraseMatcher matcher_;
};

std::vector<LexiconMatch> lookup_rows(const LexiconTable& table, std::string_view lang,
                                      std::span<const std::string> sentence);

/// Aligners keyed by language code; each is trained with English as the
/// source side and that language as the target side.
using AlignerSet = std::map<std::string, TranslationTable>;

struct AssembleOptions {
  std::size_t min_votes = 2;
};

/// Projects every seed name into each non-English corpus language through
/// Viterbi links and keeps the majority candidate per cell.
LexiconTable assemble_table(std::span<const std::string> seed, const ParallelCorpus& corpus,
                            const AlignerSet& aligners, AssembleOptions options = {},
                            Diagnostics* diagnostics = nullptr);

struct TrimPolicy {
  enum class Kind { none, frequency_one, manual_selection };
  Kind kind = Kind::none;
  std::filesystem::path selection_file;

  static TrimPolicy none() { return {}; }
  static TrimPolicy frequency_one() { return {Kind::frequency_one, {}}; }
  static TrimPolicy manual(std::filesystem::path file) { return {Kind::manual_selection, std::move(file)}; }
  static TrimPolicy parse(std::string_view name, std::filesystem::path selection = {});
};

/// When `corpus` is given, English frequencies are recounted from it before
/// the frequency-one policy is applied.
LexiconTable trim_table(const LexiconTable& table, const TrimPolicy& policy, const ParallelCorpus* corpus = nullptr);

/// Occurrences of `phrase` in `tokens`, scanning left to right without overlap.
std::size_t count_occurrences(std::span<const std::string> tokens, std::span<const std::string> phrase);

}  // namespace polymt

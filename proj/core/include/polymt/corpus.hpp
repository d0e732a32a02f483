#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polymt/error.hpp"
#include "polymt/languages.hpp"

namespace polymt {

/// verse id -> NFC text for one language; ordered by id.
using VerseMap = std::map<std::string, std::string>;

struct LanguageFile {
  Language lang;
  VerseMap verses;
};

/// Reads a `verse_id<TAB>text` file. Blank lines are ignored; records whose
/// text is empty after trimming are dropped with a diagnostic.
VerseMap ingest_language_file(const std::filesystem::path& path, const Language& lang,
                              Diagnostics* diagnostics = nullptr);
VerseMap parse_language_tsv(std::string_view content, std::string_view source_name,
                            Diagnostics* diagnostics = nullptr);
std::string format_language_tsv(const VerseMap& verses);

struct Verse {
  std::string id;
  std::map<std::string, std::string> texts;  // language code -> text
};

/// Verse-aligned multilingual corpus. Stored column-wise: one text vector per
/// language, parallel to the sorted id vector.
class ParallelCorpus {
public:
  ParallelCorpus() = default;
  /// `columns` must hold one vector per language, each the length of `ids`.
  /// `ids` are sorted here; columns are permuted to match.
  ParallelCorpus(std::vector<Language> languages, std::vector<std::string> ids,
                 std::map<std::string, std::vector<std::string>> columns);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<Language>& languages() const noexcept { return languages_; }
  bool has_language(std::string_view code) const noexcept;

  /// Throws Errc::unknown_language when the language is absent.
  const std::vector<std::string>& column(std::string_view code) const;
  const std::string& text(std::string_view code, std::size_t index) const { return column(code).at(index); }
  std::optional<std::size_t> index_of(std::string_view id) const;
  Verse verse(std::size_t index) const;

  /// Restriction to the listed ids (unknown ids are ignored).
  ParallelCorpus subset(std::span<const std::string> ids) const;

private:
  std::vector<Language> languages_;
  std::vector<std::string> ids_;
  std::map<std::string, std::vector<std::string>, std::less<>> columns_;
};

/// Keeps the verse ids present in every input. An empty result is reported
/// through `diagnostics` ("EmptyIntersection") rather than thrown.
ParallelCorpus intersect_alignment(std::span<const LanguageFile> maps, Diagnostics* diagnostics = nullptr);

/// On-disk store: one `<code>.tsv` file per language.
void write_corpus_dir(const ParallelCorpus& corpus, const std::filesystem::path& dir);
ParallelCorpus read_corpus_dir(const std::filesystem::path& dir, std::span<const Language> langs,
                               Diagnostics* diagnostics = nullptr);

enum class SplitPart { train, val, test };
std::string_view split_part_name(SplitPart part) noexcept;
SplitPart parse_split_part(std::string_view name);

struct SplitRatios {
  double train = 0.75;
  double val = 0.15;
  double test = 0.10;
};

struct SplitAssignment {
  std::vector<std::string> train;  // each sorted by id
  std::vector<std::string> val;
  std::vector<std::string> test;
  SplitRatios ratios;
  std::uint64_t seed = 0;

  const std::vector<std::string>& part(SplitPart p) const;
  std::size_t total() const noexcept { return train.size() + val.size() + test.size(); }
};

/// Seeded permutation of the sorted ids, cut at floor(n*train) and
/// floor(n*val); the test part takes the remainder.
SplitAssignment split_corpus(const ParallelCorpus& corpus, SplitRatios ratios, std::uint64_t seed);

std::string format_split(const SplitAssignment& split);
SplitAssignment parse_split(std::string_view content);

struct CorpusStats {
  std::string lang;
  std::size_t verses = 0;
  std::size_t tokens = 0;
  std::size_t unique_tokens = 0;
  std::optional<double> log10_tokens;  // absent for an empty corpus
};

CorpusStats corpus_stats(const ParallelCorpus& corpus, const Language& lang);

/// log10 of a count rounded to two decimals; absent for zero.
std::optional<double> log10_rounded(std::uint64_t count);
std::string format_log10(std::optional<double> value);
std::string format_stats_tsv(std::span<const CorpusStats> stats);

}  // namespace polymt

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polymt/error.hpp"
#include "polymt/lexicon.hpp"
#include "polymt/text.hpp"

namespace polymt {

struct TaggedSentence {
  Tokens text;
  std::uint32_t k = 0;  // number of placeholders
};

struct DecodeEntry {
  std::string source;
  std::string target;

  friend bool operator==(const DecodeEntry&, const DecodeEntry&) = default;
};

/// Placeholder index -> surfaces.
using DecodeTable = std::map<std::uint32_t, DecodeEntry>;

struct TaggedPair {
  TaggedSentence source;
  TaggedSentence target;
  DecodeTable decode;
};

/// Replaces lexicon entities found in both sentences by `$NE1..$NEk`, numbered
/// by source position. Entities whose target surface is missing from the row
/// or from the target sentence are left untagged on both sides and reported
/// as "EntityNotInTarget".
TaggedPair tag_training_pair(std::span<const std::string> source, std::span<const std::string> target,
                             const LexiconTable& table, std::string_view src_lang, std::string_view tgt_lang,
                             Diagnostics* diagnostics = nullptr);

struct TaggedSource {
  TaggedSentence sentence;
  DecodeTable decode;
};

/// Source-only tagging for translation input; decode targets come from the
/// table row.
TaggedSource tag_source(std::span<const std::string> source, const LexiconTable& table, std::string_view src_lang,
                        std::string_view tgt_lang);

/// Replaces each `$NEi` with the decode target surface (split back into its
/// tokens). Errc::unknown_placeholder for an index the table lacks.
Tokens restore_placeholders(std::span<const std::string> translated, const DecodeTable& decode);

struct EntityOrderJudgment {
  bool set_correct = false;
  bool order_correct = false;  // false whenever the sets differ
  std::vector<std::string> missing;   // in the reference, not in the hypothesis
  std::vector<std::string> spurious;  // in the hypothesis, not in the reference
};

/// Compares the decode-table target surfaces found in hyp and ref, as
/// multisets and as left-to-right sequences.
EntityOrderJudgment check_entity_order(std::span<const std::string> hyp, std::span<const std::string> ref,
                                       const DecodeTable& decode);

/// `{"line": n, "map": {"1": {"src": "...", "tgt": "..."}}}`
std::string format_decode_record(std::size_t line, const DecodeTable& decode);
std::pair<std::size_t, DecodeTable> parse_decode_record(std::string_view json_line);
/// One record per line; line numbers must be 1..n in order.
std::vector<DecodeTable> parse_decode_jsonl(std::string_view content);

}  // namespace polymt

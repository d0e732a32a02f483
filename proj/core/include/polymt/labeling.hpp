#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polymt/corpus.hpp"
#include "polymt/languages.hpp"
#include "polymt/text.hpp"

namespace polymt {

enum class LabelMode { language_only, language_plus_family };
LabelMode parse_label_mode(std::string_view name);

/// `__opt_family_src_<f> __opt_family_tgt_<f> __opt_src_<s> __opt_tgt_<t>`,
/// or just the last two tokens in language-only mode.
Tokens label_tokens(const Language& src, const Language& tgt, LabelMode mode);

struct LabeledExample {
  Tokens source;  // label prefix followed by the tokenized source sentence
  Tokens target;
  Language src;
  Language tgt;
  std::string verse_id;
};

/// Calls `sink` once per ordered language pair (s != t) and verse of the
/// chosen split part, ordered by (src code, tgt code, verse id).
void for_each_multiway_pair(std::span<const Language> langs, const ParallelCorpus& corpus,
                            const SplitAssignment& split, LabelMode mode,
                            const std::function<void(LabeledExample&&)>& sink,
                            SplitPart part = SplitPart::train);

std::vector<LabeledExample> expand_multiway_pairs(std::span<const Language> langs, const ParallelCorpus& corpus,
                                                  const SplitAssignment& split, LabelMode mode,
                                                  SplitPart part = SplitPart::train);

/// True iff every family in `families` has a member in `langs`.
bool language_set_spans(std::span<const Language> langs, std::span<const Family> families);

enum class AdditionMode { family, sparse };
AdditionMode parse_addition_mode(std::string_view name);
std::string_view addition_mode_name(AdditionMode mode) noexcept;

/// Order in which neighbouring families are added after the anchor's own.
struct FamilyProximity {
  std::vector<Family> order;

  static FamilyProximity default_order();
  static FamilyProximity parse(std::string_view csv);
};

struct AdditionSchedule {
  AdditionMode mode = AdditionMode::family;
  Language anchor;
  std::vector<std::vector<Language>> steps;  // cumulative, each sorted by code
};

/// Family mode grows by whole families: the anchor's family first, then the
/// others in proximity order. Sparse mode reuses the same step sizes but
/// fills each step with seeded random languages, covering uncovered families
/// first so the cumulative set spans all eight as early as the sizes allow.
/// The anchor is part of every step in both modes.
AdditionSchedule build_addition_schedule(const Language& anchor, AdditionMode mode, std::uint64_t seed,
                                         const FamilyProximity& proximity = FamilyProximity::default_order());

std::string format_schedule_tsv(const AdditionSchedule& schedule);
/// Parses `step<TAB>codes` rows; returns the language sets in step order.
std::vector<std::vector<Language>> parse_schedule_tsv(std::string_view content);

}  // namespace polymt

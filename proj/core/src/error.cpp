#include "polymt/error.hpp"

#include <algorithm>

namespace polymt {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::duplicate_verse_id: return "DuplicateVerseId";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::empty_file: return "EmptyFile";
    case Errc::bad_ratios: return "BadRatios";
    case Errc::unknown_language: return "UnknownLanguage";
    case Errc::empty_split: return "EmptySplit";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::dangling_continuation: return "DanglingContinuation";
    case Errc::empty_bitext: return "EmptyBitext";
    case Errc::empty_sentence: return "EmptySentence";
    case Errc::empty_result: return "EmptyResult";
    case Errc::missing_aligner: return "MissingAligner";
    case Errc::missing_selection_file: return "MissingSelectionFile";
    case Errc::duplicate_entry: return "DuplicateEntry";
    case Errc::unknown_placeholder: return "UnknownPlaceholder";
    case Errc::bad_fraction: return "BadFraction";
    case Errc::non_monotone_epoch: return "NonMonotoneEpoch";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::unknown_profile: return "UnknownProfile";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unresolved_judgments: return "UnresolvedJudgments";
    case Errc::unknown_subcommand: return "UnknownSubcommand";
    case Errc::missing_argument: return "MissingArgument";
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::stage_failed: return "StageFailed";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void Diagnostics::warn(std::string code, std::string message) {
  entries_.push_back({std::move(code), std::move(message)});
}

std::size_t Diagnostics::count(std::string_view code) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

}  // namespace polymt

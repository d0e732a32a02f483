#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polymt {

/// Every recoverable failure in the library is reported as an Error carrying
/// one of these codes. The CLI maps them onto process exit statuses.
enum class Errc {
  // corpus
  duplicate_verse_id,
  malformed_line,
  empty_file,
  bad_ratios,
  unknown_language,
  // labeling
  empty_split,
  // subword
  empty_corpus,
  dangling_continuation,
  // alignment
  empty_bitext,
  empty_sentence,
  // lexicon
  empty_result,
  missing_aligner,
  missing_selection_file,
  duplicate_entry,
  // netag
  unknown_placeholder,
  // harness
  bad_fraction,
  non_monotone_epoch,
  degenerate_input,
  unknown_profile,
  // evaluation
  length_mismatch,
  unresolved_judgments,
  // pipeline / cli
  unknown_subcommand,
  missing_argument,
  cycle_detected,
  stage_failed,
  // general
  invalid_argument,
  parse_error,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

/// Non-fatal findings (empty intersections, unseen words, degraded tagging).
struct Diagnostic {
  std::string code;
  std::string message;
};

class Diagnostics {
public:
  void warn(std::string code, std::string message);

  const std::vector<Diagnostic>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t count(std::string_view code) const noexcept;
  bool has(std::string_view code) const noexcept { return count(code) > 0; }
  void clear() noexcept { entries_.clear(); }

private:
  std::vector<Diagnostic> entries_;
};

// Null-tolerant helper used by functions that take an optional sink.
inline void warn(Diagnostics* sink, std::string code, std::string message) {
  if (sink != nullptr) sink->warn(std::move(code), std::move(message));
}

}  // namespace polymt

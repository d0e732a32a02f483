#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polymt {

using Tokens = std::vector<std::string>;

/// NFC-normalize UTF-8 text. Invalid byte sequences raise Errc::parse_error.
std::string nfc_normalize(std::string_view text);

/// Strip leading and trailing Unicode whitespace.
std::string trim(std::string_view text);

/// Split on Unicode whitespace. No punctuation handling; used for text that
/// is already tokenized (BPE input, hypotheses, tagged output).
Tokens split_whitespace(std::string_view text);

/// The toolkit tokenizer: split on Unicode whitespace, then peel leading and
/// trailing punctuation off each chunk as one-codepoint tokens. Interior
/// punctuation ("Ir-Fittim", "Pharaoh's") stays. Connector punctuation (`_`)
/// is not peeled, so label tokens like `__opt_src_fr` survive intact.
Tokens tokenize(std::string_view text);

std::string join(std::span<const std::string> tokens, std::string_view separator = " ");

/// UTF-8 codepoints of `text`, each as its own string.
std::vector<std::string> codepoints(std::string_view text);
std::size_t codepoint_count(std::string_view text);

/// Unicode general category P* other than Pc.
bool is_punctuation(char32_t cp) noexcept;
/// True when every codepoint of a non-empty token is punctuation.
bool is_punctuation_token(std::string_view token);
/// Remove punctuation codepoints from both ends.
std::string strip_edge_punctuation(std::string_view text);

/// Full Unicode lowercase mapping (root locale).
std::string to_lower(std::string_view text);
bool starts_with_uppercase(std::string_view text);

// Reserved vocabulary shared by labeling, subword and netag.
inline constexpr std::string_view kLabelPrefix = "__opt_";
inline constexpr std::string_view kPlaceholderPrefix = "$NE";

bool is_label_token(std::string_view token) noexcept;
/// `$NE<k>` with k a positive integer without leading zeros.
std::optional<std::uint32_t> placeholder_index(std::string_view token) noexcept;
inline bool is_placeholder(std::string_view token) noexcept {
  return placeholder_index(token).has_value();
}
std::string placeholder(std::uint32_t index);

/// Seeded generator with a platform-independent bounded draw, so shuffles
/// and samples are byte-identical across standard libraries.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace polymt

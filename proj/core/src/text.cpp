#include "polymt/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <charconv>

#include "polymt/error.hpp"

namespace polymt {
namespace {

struct Codepoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

// Decodes one codepoint at `pos`; throws on malformed UTF-8.
Codepoint decode_at(std::string_view text, std::size_t pos) {
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  auto offset = static_cast<std::int32_t>(pos);
  UChar32 cp = 0;
  U8_NEXT(bytes, offset, length, cp);
  if (cp < 0) {
    throw Error(Errc::parse_error, "invalid UTF-8 at byte " + std::to_string(pos));
  }
  return {static_cast<char32_t>(cp), pos, static_cast<std::size_t>(offset)};
}

template <typename Fn>
void for_each_codepoint(std::string_view text, Fn&& fn) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const Codepoint cp = decode_at(text, pos);
    fn(cp);
    pos = cp.end;
  }
}

bool is_space(char32_t cp) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

std::string to_utf8(const icu::UnicodeString& text) {
  std::string out;
  text.toUTF8String(out);
  return out;
}

icu::UnicodeString from_utf8(std::string_view text) {
  // Validate first so malformed input surfaces as an error, not U+FFFD.
  for_each_codepoint(text, [](const Codepoint&) {});
  return icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
}

}  // namespace

std::string nfc_normalize(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(Errc::io_error, "ICU NFC normalizer unavailable");
  const icu::UnicodeString source = from_utf8(text);
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error(Errc::parse_error, "NFC normalization failed");
  return to_utf8(normalized);
}

std::string trim(std::string_view text) {
  std::size_t first = text.size();
  std::size_t last = 0;
  for_each_codepoint(text, [&](const Codepoint& cp) {
    if (is_space(cp.value)) return;
    if (first == text.size()) first = cp.begin;
    last = cp.end;
  });
  if (first == text.size()) return {};
  return std::string(text.substr(first, last - first));
}

Tokens split_whitespace(std::string_view text) {
  Tokens out;
  std::size_t start = std::string_view::npos;
  for_each_codepoint(text, [&](const Codepoint& cp) {
    if (is_space(cp.value)) {
      if (start != std::string_view::npos) {
        out.emplace_back(text.substr(start, cp.begin - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = cp.begin;
    }
  });
  if (start != std::string_view::npos) out.emplace_back(text.substr(start));
  return out;
}

Tokens tokenize(std::string_view text) {
  Tokens out;
  for (const std::string& chunk : split_whitespace(text)) {
    std::vector<Codepoint> cps;
    for_each_codepoint(chunk, [&](const Codepoint& cp) { cps.push_back(cp); });
    std::size_t lo = 0;
    std::size_t hi = cps.size();
    while (lo < hi && is_punctuation(cps[lo].value)) ++lo;
    while (hi > lo && is_punctuation(cps[hi - 1].value)) --hi;
    for (std::size_t i = 0; i < lo; ++i) {
      out.push_back(chunk.substr(cps[i].begin, cps[i].end - cps[i].begin));
    }
    if (lo < hi) out.push_back(chunk.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin));
    for (std::size_t i = hi; i < cps.size(); ++i) {
      out.push_back(chunk.substr(cps[i].begin, cps[i].end - cps[i].begin));
    }
  }
  return out;
}

std::string join(std::span<const std::string> tokens, std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.append(separator);
    out.append(tokens[i]);
  }
  return out;
}

std::vector<std::string> codepoints(std::string_view text) {
  std::vector<std::string> out;
  for_each_codepoint(text, [&](const Codepoint& cp) {
    out.emplace_back(text.substr(cp.begin, cp.end - cp.begin));
  });
  return out;
}

std::size_t codepoint_count(std::string_view text) {
  std::size_t n = 0;
  for_each_codepoint(text, [&](const Codepoint&) { ++n; });
  return n;
}

bool is_punctuation(char32_t cp) noexcept {
  const auto c = static_cast<UChar32>(cp);
  return u_ispunct(c) != 0 && u_charType(c) != U_CONNECTOR_PUNCTUATION;
}

bool is_punctuation_token(std::string_view token) {
  if (token.empty()) return false;
  bool all = true;
  for_each_codepoint(token, [&](const Codepoint& cp) { all = all && is_punctuation(cp.value); });
  return all;
}

std::string strip_edge_punctuation(std::string_view text) {
  std::vector<Codepoint> cps;
  for_each_codepoint(text, [&](const Codepoint& cp) { cps.push_back(cp); });
  std::size_t lo = 0;
  std::size_t hi = cps.size();
  while (lo < hi && is_punctuation(cps[lo].value)) ++lo;
  while (hi > lo && is_punctuation(cps[hi - 1].value)) --hi;
  if (lo == hi) return {};
  return std::string(text.substr(cps[lo].begin, cps[hi - 1].end - cps[lo].begin));
}

std::string to_lower(std::string_view text) {
  icu::UnicodeString u = from_utf8(text);
  u.toLower(icu::Locale::getRoot());
  return to_utf8(u);
}

bool starts_with_uppercase(std::string_view text) {
  if (text.empty()) return false;
  return u_isupper(static_cast<UChar32>(decode_at(text, 0).value)) != 0;
}

bool is_label_token(std::string_view token) noexcept {
  return token.size() > kLabelPrefix.size() && token.starts_with(kLabelPrefix);
}

std::optional<std::uint32_t> placeholder_index(std::string_view token) noexcept {
  if (!token.starts_with(kPlaceholderPrefix)) return std::nullopt;
  const std::string_view digits = token.substr(kPlaceholderPrefix.size());
  if (digits.empty() || digits.front() == '0') return std::nullopt;
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::string placeholder(std::uint32_t index) {
  return std::string(kPlaceholderPrefix) + std::to_string(index);
}

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SeededRng::next() { return engine_(); }

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::invalid_argument, "SeededRng::below requires a positive bound");
  // Rejection sampling on the low residue keeps the draw unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace polymt

#include "polymt/netag.hpp"

#include <algorithm>

#include <json.hpp>

#include "polymt/io.hpp"
#include "polymt/languages.hpp"

namespace polymt {

namespace {

using json = nlohmann::json;

// Leftmost occurrence of `phrase` in `tokens` that avoids consumed positions.
std::optional<std::size_t> find_unconsumed(std::span<const std::string> tokens, const std::vector<bool>& consumed,
                                           const Tokens& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return std::nullopt;
  for (std::size_t pos = 0; pos + phrase.size() <= tokens.size(); ++pos) {
    bool ok = true;
    for (std::size_t k = 0; k < phrase.size() && ok; ++k) ok = !consumed[pos + k] && tokens[pos + k] == phrase[k];
    if (ok) return pos;
  }
  return std::nullopt;
}

struct Span {
  std::size_t begin;
  std::size_t end;
  std::uint32_t index;
};

Tokens substitute(std::span<const std::string> tokens, std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
  Tokens out;
  std::size_t pos = 0;
  for (const Span& s : spans) {
    out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos),
               tokens.begin() + static_cast<std::ptrdiff_t>(s.begin));
    out.push_back(placeholder(s.index));
    pos = s.end;
  }
  out.insert(out.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos), tokens.end());
  return out;
}

std::string span_text(std::span<const std::string> tokens, std::size_t begin, std::size_t end) {
  return join(tokens.subspan(begin, end - begin));
}

// Target surfaces found left to right, using the surfaces of `decode` as the
// phrase set.
std::vector<std::string> entity_sequence(std::span<const std::string> tokens, const PhraseMatcher& matcher,
                                         const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& m : matcher.find(tokens)) out.push_back(names[m.phrase]);
  return out;
}

}  // namespace

TaggedPair tag_training_pair(std::span<const std::string> source, std::span<const std::string> target,
                             const LexiconTable& table, std::string_view src_lang, std::string_view tgt_lang,
                             Diagnostics* diagnostics) {
  language(src_lang);
  language(tgt_lang);
  const auto matches = lookup_rows(table, src_lang, source);

  std::vector<bool> consumed(target.size(), false);
  std::vector<Span> src_spans;
  std::vector<Span> tgt_spans;
  TaggedPair out;
  std::uint32_t next = 1;
  for (const LexiconMatch& m : matches) {
    const LexiconEntry& entry = table.entries()[m.entry];
    const std::string_view surface = entry.surface(tgt_lang);
    const Tokens phrase = split_whitespace(surface);
    const auto at = find_unconsumed(target, consumed, phrase);
    if (!at) {
      warn(diagnostics, "EntityNotInTarget",
           "'" + span_text(source, m.begin, m.end) + "' has no " + std::string(tgt_lang) + " match; left untagged");
      continue;
    }
    for (std::size_t k = 0; k < phrase.size(); ++k) consumed[*at + k] = true;
    src_spans.push_back({m.begin, m.end, next});
    tgt_spans.push_back({*at, *at + phrase.size(), next});
    out.decode[next] = {span_text(source, m.begin, m.end), join(phrase)};
    ++next;
  }
  out.source = {substitute(source, src_spans), next - 1};
  out.target = {substitute(target, tgt_spans), next - 1};
  return out;
}

TaggedSource tag_source(std::span<const std::string> source, const LexiconTable& table, std::string_view src_lang,
                        std::string_view tgt_lang) {
  language(src_lang);
  language(tgt_lang);
  std::vector<Span> spans;
  TaggedSource out;
  std::uint32_t next = 1;
  for (const LexiconMatch& m : lookup_rows(table, src_lang, source)) {
    const std::string_view surface = table.entries()[m.entry].surface(tgt_lang);
    if (surface.empty()) continue;
    spans.push_back({m.begin, m.end, next});
    out.decode[next] = {span_text(source, m.begin, m.end), std::string(surface)};
    ++next;
  }
  out.sentence = {substitute(source, spans), next - 1};
  return out;
}

Tokens restore_placeholders(std::span<const std::string> translated, const DecodeTable& decode) {
  Tokens out;
  out.reserve(translated.size());
  for (const std::string& token : translated) {
    const auto index = placeholder_index(token);
    if (!index) {
      out.push_back(token);
      continue;
    }
    const auto it = decode.find(*index);
    if (it == decode.end()) {
      throw Error(Errc::unknown_placeholder,
                  token + " is not in the decode table (" + std::to_string(decode.size()) + " entries)");
    }
    for (std::string& piece : split_whitespace(it->second.target)) out.push_back(std::move(piece));
  }
  return out;
}

EntityOrderJudgment check_entity_order(std::span<const std::string> hyp, std::span<const std::string> ref,
                                       const DecodeTable& decode) {
  std::vector<std::string> names;
  for (const auto& [index, entry] : decode) {
    if (std::find(names.begin(), names.end(), entry.target) == names.end()) names.push_back(entry.target);
  }
  std::vector<Tokens> phrases;
  for (const std::string& n : names) phrases.push_back(split_whitespace(n));
  const PhraseMatcher matcher(phrases);

  const auto in_hyp = entity_sequence(hyp, matcher, names);
  const auto in_ref = entity_sequence(ref, matcher, names);
  auto sorted_hyp = in_hyp;
  auto sorted_ref = in_ref;
  std::sort(sorted_hyp.begin(), sorted_hyp.end());
  std::sort(sorted_ref.begin(), sorted_ref.end());

  EntityOrderJudgment j;
  std::set_difference(sorted_ref.begin(), sorted_ref.end(), sorted_hyp.begin(), sorted_hyp.end(),
                      std::back_inserter(j.missing));
  std::set_difference(sorted_hyp.begin(), sorted_hyp.end(), sorted_ref.begin(), sorted_ref.end(),
                      std::back_inserter(j.spurious));
  j.set_correct = j.missing.empty() && j.spurious.empty();
  j.order_correct = j.set_correct && in_hyp == in_ref;
  return j;
}

std::string format_decode_record(std::size_t line, const DecodeTable& decode) {
  json map = json::object();
  for (const auto& [index, entry] : decode) map[std::to_string(index)] = {{"src", entry.source}, {"tgt", entry.target}};
  return json{{"line", line}, {"map", map}}.dump();
}

std::pair<std::size_t, DecodeTable> parse_decode_record(std::string_view json_line) {
  try {
    const json doc = json::parse(json_line);
    std::pair<std::size_t, DecodeTable> out;
    out.first = doc.at("line").get<std::size_t>();
    for (const auto& [key, value] : doc.at("map").items()) {
      const auto index = placeholder_index(std::string(kPlaceholderPrefix) + key);
      if (!index) throw Error(Errc::parse_error, "decode key '" + key + "' is not a positive index");
      out.second[*index] = {value.at("src").get<std::string>(), value.at("tgt").get<std::string>()};
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string("decode record: ") + e.what());
  }
}

std::vector<DecodeTable> parse_decode_jsonl(std::string_view content) {
  std::vector<DecodeTable> out;
  for (const std::string& line : io::split_lines(content)) {
    if (trim(line).empty()) continue;
    auto [number, table] = parse_decode_record(line);
    if (number != out.size() + 1) {
      throw Error(Errc::parse_error,
                  "decode record numbered " + std::to_string(number) + ", expected " + std::to_string(out.size() + 1));
    }
    out.push_back(std::move(table));
  }
  return out;
}

}  // namespace polymt

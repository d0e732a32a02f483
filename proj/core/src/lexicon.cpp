#include "polymt/lexicon.hpp"

#include <algorithm>
#include <charconv>

#include "polymt/io.hpp"
#include "polymt/languages.hpp"

namespace polymt {

namespace fs = std::filesystem;

namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

Tokens surface_tokens(std::string_view surface) { return split_whitespace(surface); }

}  // namespace

const std::string& LexiconEntry::english() const {
  static const std::string empty;
  const auto it = surfaces.find("en");
  return it == surfaces.end() ? empty : it->second;
}

std::string_view LexiconEntry::surface(std::string_view lang) const {
  const auto it = surfaces.find(std::string(lang));
  return it == surfaces.end() ? std::string_view{} : std::string_view(it->second);
}

std::size_t LexiconEntry::frequency(std::string_view lang) const {
  const auto it = frequencies.find(std::string(lang));
  return it == frequencies.end() ? 0 : it->second;
}

LexiconTable::LexiconTable(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  std::set<std::size_t> ids;
  std::set<std::string> english;
  for (LexiconEntry& e : entries_) {
    std::erase_if(e.surfaces, [](const auto& kv) { return kv.second.empty(); });
    if (e.english().empty()) {
      throw Error(Errc::invalid_argument, "lexicon entry " + std::to_string(e.id) + " has no English surface");
    }
    if (!ids.insert(e.id).second) throw Error(Errc::duplicate_entry, "lexicon id " + std::to_string(e.id));
    if (!english.insert(e.english()).second) {
      throw Error(Errc::duplicate_entry, "English surface '" + e.english() + "' appears in two entries");
    }
  }
}

const LexiconEntry* LexiconTable::find_english(std::string_view surface) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const LexiconEntry& e) { return e.english() == surface; });
  return it == entries_.end() ? nullptr : &*it;
}

std::vector<std::string> LexiconTable::languages() const {
  std::vector<std::string> out;
  for (const std::string& code : LanguageRegistry::instance().lexicon_column_order()) {
    const bool any = std::any_of(entries_.begin(), entries_.end(),
                                 [&](const LexiconEntry& e) { return !e.surface(code).empty(); });
    if (any) out.push_back(code);
  }
  return out;
}

std::string LexiconTable::serialize() const {
  const auto columns = LanguageRegistry::instance().lexicon_column_order();
  std::string out = "id";
  for (const std::string& c : columns) out += '\t' + c;
  out += '\n';
  for (const LexiconEntry& e : entries_) {
    out += std::to_string(e.id);
    for (const std::string& c : columns) {
      out += '\t';
      out += e.surface(c);
    }
    out += '\n';
  }
  return out;
}

std::string LexiconTable::serialize_frequencies() const {
  const auto columns = LanguageRegistry::instance().lexicon_column_order();
  std::string out = "id\tlang\tcount\n";
  for (const LexiconEntry& e : entries_) {
    for (const std::string& c : columns) {
      const auto it = e.frequencies.find(c);
      if (it == e.frequencies.end()) continue;
      out += std::to_string(e.id) + '\t' + c + '\t' + std::to_string(it->second) + '\n';
    }
  }
  return out;
}

LexiconTable LexiconTable::parse(std::string_view table_tsv, std::optional<std::string_view> frequency_tsv) {
  const auto lines = io::split_lines(table_tsv);
  if (lines.empty()) throw Error(Errc::empty_file, "lexicon table is empty");
  const auto header = io::split_fields(lines.front());
  if (header.empty() || header.front() != "id") throw Error(Errc::parse_error, "lexicon header must start with 'id'");
  for (std::size_t c = 1; c < header.size(); ++c) language(header[c]);
  if (std::find(header.begin(), header.end(), "en") == header.end()) {
    throw Error(Errc::parse_error, "lexicon header has no 'en' column");
  }
  std::vector<LexiconEntry> entries;
  std::map<std::size_t, std::size_t> by_id;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = io::split_fields(lines[i]);
    if (fields.size() != header.size()) {
      throw Error(Errc::malformed_line, "lexicon line " + std::to_string(i + 1) + " has " +
                                            std::to_string(fields.size()) + " columns, header has " +
                                            std::to_string(header.size()));
    }
    LexiconEntry e;
    e.id = parse_count(fields[0], "lexicon id");
    for (std::size_t c = 1; c < header.size(); ++c) {
      if (!fields[c].empty()) e.surfaces[language(header[c]).code] = fields[c];
    }
    by_id[e.id] = entries.size();
    entries.push_back(std::move(e));
  }
  if (frequency_tsv) {
    for (const std::string& line : io::split_lines(*frequency_tsv)) {
      if (line.empty() || line.starts_with("id\t")) continue;
      const auto fields = io::split_fields(line);
      if (fields.size() != 3) throw Error(Errc::malformed_line, "frequency line '" + line + "'");
      const auto it = by_id.find(parse_count(fields[0], "lexicon id"));
      if (it == by_id.end()) throw Error(Errc::parse_error, "frequency row for unknown id " + fields[0]);
      entries[it->second].frequencies[language(fields[1]).code] = parse_count(fields[2], "frequency");
    }
  }
  return LexiconTable(std::move(entries));
}

fs::path frequency_path_for(const fs::path& table_path) {
  fs::path p = table_path;
  const std::string ext = p.extension().string();
  p.replace_extension();
  p += ".freq" + (ext.empty() ? std::string(".tsv") : ext);
  return p;
}

void save_lexicon(const LexiconTable& table, const fs::path& path) {
  io::write_file_atomic(path, table.serialize());
  io::write_file_atomic(frequency_path_for(path), table.serialize_frequencies());
}

LexiconTable load_lexicon(const fs::path& path) {
  const std::string table = io::read_file(path);
  const fs::path freq = frequency_path_for(path);
  if (fs::exists(freq)) return LexiconTable::parse(table, io::read_file(freq));
  return LexiconTable::parse(table);
}

std::vector<std::string> filter_seed_list(std::span<const std::string> raw, const std::set<std::string>& stoplist) {
  std::set<std::string> stop_lower;
  for (const std::string& s : stoplist) stop_lower.insert(to_lower(s));

  std::map<std::string, std::string> by_folded;
  for (const std::string& candidate : raw) {
    const Tokens words = split_whitespace(strip_edge_punctuation(trim(nfc_normalize(candidate))));
    const std::string name = join(words);
    if (codepoint_count(name) < 2) continue;
    const std::string folded = to_lower(name);
    if (stop_lower.contains(folded)) continue;
    auto [it, inserted] = by_folded.emplace(folded, name);
    if (!inserted && !starts_with_uppercase(it->second) && starts_with_uppercase(name)) it->second = name;
  }
  std::vector<std::string> out;
  for (auto& [folded, name] : by_folded) out.push_back(std::move(name));
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(Errc::empty_result, "every seed candidate was filtered out");
  return out;
}

PhraseMatcher::PhraseMatcher(std::span<const Tokens> phrases) : phrases_(phrases.begin(), phrases.end()) {
  for (std::size_t p = 0; p < phrases_.size(); ++p) {
    if (phrases_[p].empty()) continue;
    by_first_[phrases_[p].front()].push_back(p);
  }
  for (auto& [first, list] : by_first_) {
    std::stable_sort(list.begin(), list.end(),
                     [&](std::size_t a, std::size_t b) { return phrases_[a].size() > phrases_[b].size(); });
  }
}

std::vector<PhraseMatcher::Match> PhraseMatcher::find(std::span<const std::string> tokens) const {
  std::vector<Match> out;
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    const auto it = by_first_.find(tokens[pos]);
    bool matched = false;
    if (it != by_first_.end()) {
      for (const std::size_t p : it->second) {
        const Tokens& phrase = phrases_[p];
        if (pos + phrase.size() > tokens.size()) continue;
        if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos))) {
          out.push_back({pos, pos + phrase.size(), p});
          pos += phrase.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) ++pos;
  }
  return out;
}

namespace {

std::vector<Tokens> column_phrases(const LexiconTable& table, std::string_view lang, std::vector<std::size_t>& owner) {
  std::vector<Tokens> phrases;
  for (std::size_t i = 0; i < table.entries().size(); ++i) {
    const std::string_view s = table.entries()[i].surface(lang);
    if (s.empty()) continue;
    phrases.push_back(surface_tokens(s));
    owner.push_back(i);
  }
  return phrases;
}

}  // namespace

LexiconMatcher::LexiconMatcher(const LexiconTable& table, std::string_view lang)
    : table_(&table), matcher_(column_phrases(table, lang, phrase_entry_)) {}

std::vector<LexiconMatch> LexiconMatcher::find(std::span<const std::string> tokens) const {
  std::vector<LexiconMatch> out;
  for (const auto& m : matcher_.find(tokens)) out.push_back({m.begin, m.end, phrase_entry_[m.phrase]});
  return out;
}

std::vector<LexiconMatch> lookup_rows(const LexiconTable& table, std::string_view lang,
                                      std::span<const std::string> sentence) {
  return LexiconMatcher(table, lang).find(sentence);
}

std::size_t count_occurrences(std::span<const std::string> tokens, std::span<const std::string> phrase) {
  if (phrase.empty()) return 0;
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos + phrase.size() <= tokens.size()) {
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos))) {
      ++n;
      pos += phrase.size();
    } else {
      ++pos;
    }
  }
  return n;
}

LexiconTable assemble_table(std::span<const std::string> seed, const ParallelCorpus& corpus,
                            const AlignerSet& aligners, AssembleOptions options, Diagnostics* diagnostics) {
  if (!corpus.has_language("en")) throw Error(Errc::unknown_language, "lexicon projection needs an English column");
  std::vector<std::string> targets;
  for (const Language& l : corpus.languages()) {
    if (l.code == "en") continue;
    if (!aligners.contains(l.code)) throw Error(Errc::missing_aligner, "no en-" + l.code + " aligner");
    targets.push_back(l.code);
  }

  std::vector<Tokens> phrases;
  for (const std::string& s : seed) phrases.push_back(tokenize(s));
  const PhraseMatcher english_matcher(phrases);

  // Occurrences of each seed in the English column: (verse, begin, end).
  struct Occurrence {
    std::size_t verse, begin, end;
  };
  std::vector<std::vector<Occurrence>> occurrences(seed.size());
  std::vector<Tokens> english(corpus.size());
  for (std::size_t v = 0; v < corpus.size(); ++v) {
    english[v] = tokenize(corpus.text("en", v));
    for (const auto& m : english_matcher.find(english[v])) occurrences[m.phrase].push_back({v, m.begin, m.end});
  }

  std::map<std::string, std::vector<Tokens>> tokenized;
  std::map<std::pair<std::string, std::size_t>, std::vector<AlignmentLink>> link_cache;
  auto tokens_of = [&](const std::string& lang, std::size_t v) -> const Tokens& {
    auto& column = tokenized[lang];
    if (column.empty()) {
      column.reserve(corpus.size());
      for (const std::string& text : corpus.column(lang)) column.push_back(tokenize(text));
    }
    return column[v];
  };
  auto links_of = [&](const std::string& lang, std::size_t v) -> const std::vector<AlignmentLink>& {
    const auto key = std::make_pair(lang, v);
    auto it = link_cache.find(key);
    if (it == link_cache.end()) {
      const TranslationTable& table = aligners.at(lang);
      const SentencePair pair{english[v], tokens_of(lang, v)};
      it = link_cache.emplace(key, viterbi_align(table, table.params, pair)).first;
    }
    return it->second;
  };

  std::vector<LexiconEntry> entries;
  std::set<std::string> seen_english;
  for (std::size_t s = 0; s < seed.size(); ++s) {
    const std::string english_surface = join(phrases[s]);
    if (phrases[s].empty() || !seen_english.insert(english_surface).second) {
      warn(diagnostics, "DuplicateSeed", "seed '" + seed[s] + "' skipped (empty or repeated)");
      continue;
    }
    LexiconEntry entry;
    entry.id = entries.size() + 1;
    entry.surfaces["en"] = english_surface;
    entry.frequencies["en"] = occurrences[s].size();
    if (occurrences[s].empty()) {
      warn(diagnostics, "SeedNotInCorpus", "seed '" + english_surface + "' never occurs in the English column");
      entries.push_back(std::move(entry));
      continue;
    }
    const std::size_t needed = occurrences[s].size() == 1 ? 1 : options.min_votes;
    for (const std::string& lang : targets) {
      std::map<std::string, std::size_t> votes;
      for (const Occurrence& occ : occurrences[s]) {
        const Tokens& tgt = tokens_of(lang, occ.verse);
        std::vector<std::size_t> linked;
        for (const AlignmentLink& link : links_of(lang, occ.verse)) {
          if (link.src_index >= occ.begin && link.src_index < occ.end) linked.push_back(link.tgt_index);
        }
        std::sort(linked.begin(), linked.end());
        // Each contiguous run of linked target tokens casts one vote.
        for (std::size_t a = 0; a < linked.size();) {
          std::size_t b = a + 1;
          while (b < linked.size() && linked[b] == linked[b - 1] + 1) ++b;
          Tokens run;
          for (std::size_t k = a; k < b; ++k) {
            if (!is_punctuation_token(tgt[linked[k]])) run.push_back(tgt[linked[k]]);
          }
          if (!run.empty()) ++votes[join(run)];
          a = b;
        }
      }
      const std::pair<const std::string, std::size_t>* best = nullptr;
      std::size_t qualifying = 0;
      for (const auto& kv : votes) {
        if (kv.second >= needed) ++qualifying;
        if (best == nullptr || kv.second > best->second) best = &kv;
      }
      if (best == nullptr || best->second < needed) continue;
      if (qualifying > 1) {
        warn(diagnostics, "SurfaceVariants", "'" + english_surface + "' in " + lang + ": kept '" + best->first +
                                                 "' over " + std::to_string(qualifying - 1) + " other variant(s)");
      }
      entry.surfaces[lang] = best->first;
      const Tokens surface = surface_tokens(best->first);
      std::size_t freq = 0;
      for (std::size_t v = 0; v < corpus.size(); ++v) freq += count_occurrences(tokens_of(lang, v), surface);
      entry.frequencies[lang] = freq;
    }
    entries.push_back(std::move(entry));
  }
  return LexiconTable(std::move(entries));
}

TrimPolicy TrimPolicy::parse(std::string_view name, fs::path selection) {
  if (name == "none") return none();
  if (name == "freq1" || name == "frequency-equals-one") return frequency_one();
  if (name == "manual" || name == "manual-selection") return manual(std::move(selection));
  throw Error(Errc::invalid_argument, "unknown trim policy '" + std::string(name) + "'");
}

LexiconTable trim_table(const LexiconTable& table, const TrimPolicy& policy, const ParallelCorpus* corpus) {
  switch (policy.kind) {
    case TrimPolicy::Kind::none:
      return table;
    case TrimPolicy::Kind::frequency_one: {
      std::vector<LexiconEntry> entries = table.entries();
      if (corpus != nullptr) {
        std::vector<Tokens> phrases;
        for (const LexiconEntry& e : entries) phrases.push_back(surface_tokens(e.english()));
        const PhraseMatcher matcher(phrases);
        std::vector<std::size_t> counts(entries.size(), 0);
        for (const std::string& text : corpus->column("en")) {
          for (const auto& m : matcher.find(tokenize(text))) ++counts[m.phrase];
        }
        for (std::size_t i = 0; i < entries.size(); ++i) entries[i].frequencies["en"] = counts[i];
      }
      std::erase_if(entries, [](const LexiconEntry& e) { return e.frequency("en") != 1; });
      return LexiconTable(std::move(entries));
    }
    case TrimPolicy::Kind::manual_selection: {
      if (policy.selection_file.empty() || !fs::exists(policy.selection_file)) {
        throw Error(Errc::missing_selection_file, "selection file '" + policy.selection_file.string() + "' not found");
      }
      std::set<std::string> keep;
      for (const std::string& line : io::read_lines(policy.selection_file)) {
        const std::string name = join(split_whitespace(line));
        if (!name.empty()) keep.insert(name);
      }
      std::vector<LexiconEntry> entries;
      for (const LexiconEntry& e : table.entries()) {
        if (keep.contains(e.english())) entries.push_back(e);
      }
      return LexiconTable(std::move(entries));
    }
  }
  return table;
}

}  // namespace polymt

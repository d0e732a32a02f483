#include "polymt/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "polymt/io.hpp"
#include "polymt/text.hpp"

namespace polymt {

namespace fs = std::filesystem;

namespace {

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

VerseMap parse_language_tsv(std::string_view content, std::string_view source_name,
                            Diagnostics* diagnostics) {
  VerseMap verses;
  std::size_t line_no = 0;
  for (const std::string& line : io::split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = io::split_fields(line);
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    if (fields.size() != 2) {
      throw Error(Errc::malformed_line, where + ": expected 2 tab-separated columns, got " +
                                            std::to_string(fields.size()));
    }
    std::string id = trim(fields[0]);
    if (id.empty()) throw Error(Errc::malformed_line, where + ": empty verse id");
    std::string text = trim(nfc_normalize(fields[1]));
    if (text.empty()) {
      warn(diagnostics, "EmptyVerseText", where + ": verse " + id + " has no text; dropped");
      continue;
    }
    if (!verses.emplace(id, std::move(text)).second) {
      throw Error(Errc::duplicate_verse_id, where + ": verse id '" + id + "' repeated");
    }
  }
  if (verses.empty()) throw Error(Errc::empty_file, std::string(source_name) + " has no records");
  return verses;
}

VerseMap ingest_language_file(const fs::path& path, const Language& lang, Diagnostics* diagnostics) {
  return parse_language_tsv(io::read_file(path), path.string() + " [" + lang.code + "]", diagnostics);
}

std::string format_language_tsv(const VerseMap& verses) {
  std::string out;
  for (const auto& [id, text] : verses) {
    out += id;
    out += '\t';
    out += text;
    out += '\n';
  }
  return out;
}

ParallelCorpus::ParallelCorpus(std::vector<Language> languages, std::vector<std::string> ids,
                               std::map<std::string, std::vector<std::string>> columns)
    : languages_(std::move(languages)) {
  std::sort(languages_.begin(), languages_.end());
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
  ids_.reserve(ids.size());
  for (const std::size_t i : order) ids_.push_back(ids[i]);
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw Error(Errc::duplicate_verse_id, "corpus verse ids must be unique");
  }
  for (const Language& lang : languages_) {
    auto it = columns.find(lang.code);
    if (it == columns.end() || it->second.size() != ids.size()) {
      throw Error(Errc::invalid_argument, "column for '" + lang.code + "' missing or misaligned");
    }
    std::vector<std::string> column;
    column.reserve(order.size());
    for (const std::size_t i : order) column.push_back(std::move(it->second[i]));
    columns_.emplace(lang.code, std::move(column));
  }
}

bool ParallelCorpus::has_language(std::string_view code) const noexcept {
  return columns_.find(code) != columns_.end();
}

const std::vector<std::string>& ParallelCorpus::column(std::string_view code) const {
  const auto it = columns_.find(code);
  if (it == columns_.end()) {
    throw Error(Errc::unknown_language, "language '" + std::string(code) + "' not in corpus");
  }
  return it->second;
}

std::optional<std::size_t> ParallelCorpus::index_of(std::string_view id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

Verse ParallelCorpus::verse(std::size_t index) const {
  Verse v{ids_.at(index), {}};
  for (const auto& [code, column] : columns_) v.texts.emplace(code, column[index]);
  return v;
}

ParallelCorpus ParallelCorpus::subset(std::span<const std::string> ids) const {
  std::vector<std::size_t> picked;
  for (const std::string& id : ids) {
    if (auto idx = index_of(id)) picked.push_back(*idx);
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  std::vector<std::string> out_ids;
  std::map<std::string, std::vector<std::string>> cols;
  for (const std::size_t i : picked) out_ids.push_back(ids_[i]);
  for (const auto& [code, column] : columns_) {
    auto& dst = cols[code];
    for (const std::size_t i : picked) dst.push_back(column[i]);
  }
  return ParallelCorpus(languages_, std::move(out_ids), std::move(cols));
}

ParallelCorpus intersect_alignment(std::span<const LanguageFile> maps, Diagnostics* diagnostics) {
  if (maps.empty()) throw Error(Errc::invalid_argument, "intersect_alignment needs at least one language");
  std::vector<Language> langs;
  for (const LanguageFile& f : maps) {
    if (std::find(langs.begin(), langs.end(), f.lang) != langs.end()) {
      throw Error(Errc::invalid_argument, "language '" + f.lang.code + "' given twice");
    }
    langs.push_back(f.lang);
  }
  std::vector<std::string> ids;
  for (const auto& [id, text] : maps.front().verses) {
    const bool everywhere = std::all_of(maps.begin() + 1, maps.end(), [&](const LanguageFile& f) {
      return f.verses.find(id) != f.verses.end();
    });
    if (everywhere) ids.push_back(id);
  }
  std::map<std::string, std::vector<std::string>> columns;
  for (const LanguageFile& f : maps) {
    auto& column = columns[f.lang.code];
    column.reserve(ids.size());
    for (const std::string& id : ids) column.push_back(f.verses.at(id));
  }
  if (ids.empty()) {
    warn(diagnostics, "EmptyIntersection", "no verse id is shared by all " + std::to_string(maps.size()) +
                                               " languages");
  }
  return ParallelCorpus(std::move(langs), std::move(ids), std::move(columns));
}

void write_corpus_dir(const ParallelCorpus& corpus, const fs::path& dir) {
  for (const Language& lang : corpus.languages()) {
    VerseMap verses;
    const auto& column = corpus.column(lang.code);
    for (std::size_t i = 0; i < corpus.size(); ++i) verses.emplace(corpus.ids()[i], column[i]);
    io::write_file_atomic(dir / (lang.code + ".tsv"), format_language_tsv(verses));
  }
}

ParallelCorpus read_corpus_dir(const fs::path& dir, std::span<const Language> langs, Diagnostics* diagnostics) {
  std::vector<LanguageFile> files;
  for (const Language& lang : langs) {
    const fs::path path = dir / (lang.code + ".tsv");
    if (!fs::exists(path)) {
      throw Error(Errc::unknown_language, "corpus store has no file for '" + lang.code + "': " + path.string());
    }
    files.push_back({lang, ingest_language_file(path, lang, diagnostics)});
  }
  return intersect_alignment(files, diagnostics);
}

std::string_view split_part_name(SplitPart part) noexcept {
  switch (part) {
    case SplitPart::train: return "train";
    case SplitPart::val: return "val";
    case SplitPart::test: return "test";
  }
  return "train";
}

SplitPart parse_split_part(std::string_view name) {
  if (name == "train") return SplitPart::train;
  if (name == "val") return SplitPart::val;
  if (name == "test") return SplitPart::test;
  throw Error(Errc::invalid_argument, "unknown split part '" + std::string(name) + "'");
}

const std::vector<std::string>& SplitAssignment::part(SplitPart p) const {
  switch (p) {
    case SplitPart::train: return train;
    case SplitPart::val: return val;
    case SplitPart::test: return test;
  }
  return train;
}

SplitAssignment split_corpus(const ParallelCorpus& corpus, SplitRatios ratios, std::uint64_t seed) {
  const bool positive = ratios.train > 0 && ratios.val > 0 && ratios.test > 0;
  const double sum = ratios.train + ratios.val + ratios.test;
  if (!positive || std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::bad_ratios, "ratios must be positive and sum to 1 (got " + shortest(ratios.train) + ", " +
                                      shortest(ratios.val) + ", " + shortest(ratios.test) + ")");
  }
  std::vector<std::string> ids = corpus.ids();
  SeededRng rng(seed);
  rng.shuffle(ids);

  const auto n = static_cast<double>(ids.size());
  // The epsilon absorbs products like 0.29 * 100 = 28.999999999999996.
  const auto n_train = static_cast<std::size_t>(std::floor(n * ratios.train + 1e-9));
  const auto n_val = std::min(ids.size() - n_train, static_cast<std::size_t>(std::floor(n * ratios.val + 1e-9)));

  SplitAssignment out;
  out.ratios = ratios;
  out.seed = seed;
  out.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                 ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::string format_split(const SplitAssignment& split) {
  std::vector<std::pair<std::string_view, SplitPart>> rows;
  rows.reserve(split.total());
  for (const SplitPart p : {SplitPart::train, SplitPart::val, SplitPart::test}) {
    for (const std::string& id : split.part(p)) rows.emplace_back(id, p);
  }
  std::sort(rows.begin(), rows.end());
  std::string out = "# ratios=" + shortest(split.ratios.train) + "," + shortest(split.ratios.val) + "," +
                    shortest(split.ratios.test) + " seed=" + std::to_string(split.seed) + "\n";
  for (const auto& [id, p] : rows) {
    out += id;
    out += '\t';
    out += split_part_name(p);
    out += '\n';
  }
  return out;
}

SplitAssignment parse_split(std::string_view content) {
  SplitAssignment out;
  std::set<std::string> seen;
  for (const std::string& line : io::split_lines(content)) {
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      for (const std::string& kv : io::split_fields(line.substr(1), ' ')) {
        if (kv.starts_with("seed=")) out.seed = std::stoull(kv.substr(5));
        if (kv.starts_with("ratios=")) {
          const auto parts = io::split_list(kv.substr(7));
          if (parts.size() == 3) {
            out.ratios = {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
          }
        }
      }
      continue;
    }
    const auto fields = io::split_fields(line);
    if (fields.size() != 2) throw Error(Errc::malformed_line, "split line '" + line + "'");
    if (!seen.insert(fields[0]).second) throw Error(Errc::duplicate_verse_id, fields[0]);
    switch (parse_split_part(fields[1])) {
      case SplitPart::train: out.train.push_back(fields[0]); break;
      case SplitPart::val: out.val.push_back(fields[0]); break;
      case SplitPart::test: out.test.push_back(fields[0]); break;
    }
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.val.begin(), out.val.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::optional<double> log10_rounded(std::uint64_t count) {
  if (count == 0) return std::nullopt;
  return std::round(std::log10(static_cast<double>(count)) * 100.0) / 100.0;
}

std::string format_log10(std::optional<double> value) {
  if (!value) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *value);
  return buf;
}

CorpusStats corpus_stats(const ParallelCorpus& corpus, const Language& lang) {
  const auto& column = corpus.column(lang.code);
  CorpusStats stats;
  stats.lang = lang.code;
  stats.verses = column.size();
  std::unordered_set<std::string> vocab;
  for (const std::string& text : column) {
    for (std::string& token : tokenize(text)) {
      ++stats.tokens;
      vocab.insert(std::move(token));
    }
  }
  stats.unique_tokens = vocab.size();
  stats.log10_tokens = log10_rounded(stats.tokens);
  return stats;
}

std::string format_stats_tsv(std::span<const CorpusStats> stats) {
  std::string out = "lang\tverses\ttokens\tunique_tokens\tlog10_tokens\n";
  for (const CorpusStats& s : stats) {
    out += s.lang + '\t' + std::to_string(s.verses) + '\t' + std::to_string(s.tokens) + '\t' +
           std::to_string(s.unique_tokens) + '\t' + format_log10(s.log10_tokens) + '\n';
  }
  return out;
}

}  // namespace polymt

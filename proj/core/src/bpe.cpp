#include "polymt/bpe.hpp"

#include <algorithm>
#include <functional>

#include "polymt/io.hpp"

namespace polymt {

namespace {

bool builtin_reserved(std::string_view token) { return is_label_token(token) || is_placeholder(token); }

bool reserved_in(const std::set<std::string>& reserved, std::string_view token) {
  return builtin_reserved(token) || reserved.contains(std::string(token));
}

struct Word {
  std::vector<std::string> symbols;
  std::uint64_t count;
};

// Frequency-ordered pair statistics: highest count first, then the
// lexicographically smallest pair.
class PairStats {
public:
  void add(const SymbolPair& pair, std::int64_t delta) {
    if (delta == 0) return;
    auto it = counts_.find(pair);
    std::int64_t old = 0;
    if (it != counts_.end()) {
      old = it->second;
      queue_.erase({old, pair});
    }
    const std::int64_t updated = old + delta;
    if (updated > 0) {
      counts_[pair] = updated;
      queue_.insert({updated, pair});
    } else if (it != counts_.end()) {
      counts_.erase(it);
    }
  }

  bool empty() const { return queue_.empty(); }
  const std::pair<std::int64_t, SymbolPair>& best() const { return *queue_.begin(); }

private:
  struct Order {
    bool operator()(const std::pair<std::int64_t, SymbolPair>& a,
                    const std::pair<std::int64_t, SymbolPair>& b) const {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    }
  };
  std::unordered_map<SymbolPair, std::int64_t, SymbolPairHash> counts_;
  std::set<std::pair<std::int64_t, SymbolPair>, Order> queue_;
};

// Replaces every non-overlapping occurrence of `pair`, scanning left to right.
bool merge_in_place(std::vector<std::string>& symbols, const SymbolPair& pair) {
  if (symbols.size() < 2) return false;
  std::vector<std::string> out;
  out.reserve(symbols.size());
  bool changed = false;
  for (std::size_t i = 0; i < symbols.size();) {
    if (i + 1 < symbols.size() && symbols[i] == pair.first && symbols[i + 1] == pair.second) {
      out.push_back(symbols[i] + symbols[i + 1]);
      i += 2;
      changed = true;
    } else {
      out.push_back(std::move(symbols[i]));
      ++i;
    }
  }
  symbols = std::move(out);
  return changed;
}

}  // namespace

std::string_view vocab_side_name(VocabSide side) noexcept {
  return side == VocabSide::source ? "source" : "target";
}

VocabSide parse_vocab_side(std::string_view name) {
  if (name == "source" || name == "src") return VocabSide::source;
  if (name == "target" || name == "tgt") return VocabSide::target;
  throw Error(Errc::invalid_argument, "unknown vocabulary side '" + std::string(name) + "'");
}

std::size_t SymbolPairHash::operator()(const SymbolPair& p) const noexcept {
  const std::size_t h = std::hash<std::string>{}(p.first);
  return h ^ (std::hash<std::string>{}(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

BpeModel::BpeModel(VocabSide side, std::vector<SymbolPair> merges, std::set<std::string> reserved)
    : side_(side), merges_(std::move(merges)), reserved_(std::move(reserved)) {
  for (std::size_t i = 0; i < merges_.size(); ++i) ranks_.emplace(merges_[i], i);
}

bool BpeModel::is_reserved(std::string_view token) const { return reserved_in(reserved_, token); }

std::vector<std::string> initial_symbols(std::string_view word) {
  std::vector<std::string> symbols = codepoints(word);
  if (!symbols.empty()) symbols.back() += kEndOfWord;
  return symbols;
}

Tokens BpeModel::segment(std::string_view word) const {
  if (is_reserved(word)) return {std::string(word)};
  std::vector<std::string> symbols = initial_symbols(word);
  while (symbols.size() > 1) {
    std::size_t best_rank = merges_.size();
    const SymbolPair* best = nullptr;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto it = ranks_.find({symbols[i], symbols[i + 1]});
      if (it != ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = &it->first;
      }
    }
    if (best == nullptr) break;
    merge_in_place(symbols, *best);
  }
  Tokens pieces = std::move(symbols);
  if (!pieces.empty()) {
    std::string& last = pieces.back();
    last.erase(last.size() - kEndOfWord.size());
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) pieces[i] += kContinuation;
  }
  return pieces;
}

std::string BpeModel::serialize() const {
  std::string out = "#bpe v1 " + std::string(vocab_side_name(side_)) + "\n";
  for (const auto& [left, right] : merges_) out += left + ' ' + right + '\n';
  out += "#reserved\n";
  for (const std::string& token : reserved_) out += token + '\n';
  return out;
}

BpeModel BpeModel::parse(std::string_view content) {
  const auto lines = io::split_lines(content);
  if (lines.empty() || !lines.front().starts_with("#bpe v1 ")) {
    throw Error(Errc::parse_error, "BPE model must start with '#bpe v1 <side>'");
  }
  const VocabSide side = parse_vocab_side(lines.front().substr(8));
  std::vector<SymbolPair> merges;
  std::set<std::string> reserved;
  bool in_reserved = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (!in_reserved && line == "#reserved") {
      in_reserved = true;
      continue;
    }
    if (in_reserved) {
      reserved.insert(line);
      continue;
    }
    const auto fields = io::split_fields(line, ' ');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(Errc::parse_error, "bad merge at line " + std::to_string(i + 1) + ": '" + line + "'");
    }
    merges.emplace_back(fields[0], fields[1]);
  }
  return BpeModel(side, std::move(merges), std::move(reserved));
}

BpeModel learn_bpe_from_counts(const std::map<std::string, std::uint64_t>& word_counts, std::size_t num_merges,
                               const std::set<std::string>& reserved, VocabSide side, Diagnostics* diagnostics) {
  std::vector<Word> words;
  for (const auto& [word, count] : word_counts) {
    if (count == 0 || word.empty() || reserved_in(reserved, word)) continue;
    words.push_back({initial_symbols(word), count});
  }
  if (num_merges > 0 && words.empty()) {
    throw Error(Errc::empty_corpus, "cannot learn merges from a corpus without (non-reserved) tokens");
  }

  PairStats stats;
  std::unordered_map<SymbolPair, std::vector<std::size_t>, SymbolPairHash> where;
  auto account = [&](std::size_t w, std::int64_t sign) {
    const Word& word = words[w];
    const auto weight = sign * static_cast<std::int64_t>(word.count);
    for (std::size_t i = 0; i + 1 < word.symbols.size(); ++i) {
      SymbolPair pair{word.symbols[i], word.symbols[i + 1]};
      if (sign > 0) where[pair].push_back(w);
      stats.add(pair, weight);
    }
  };
  for (std::size_t w = 0; w < words.size(); ++w) account(w, +1);

  std::vector<SymbolPair> merges;
  merges.reserve(num_merges);
  while (merges.size() < num_merges) {
    if (stats.empty()) {
      warn(diagnostics, "MergesExhausted",
           "stopped after " + std::to_string(merges.size()) + " of " + std::to_string(num_merges) +
               " merges: no symbol pairs left");
      break;
    }
    const SymbolPair best = stats.best().second;
    // The index may hold stale or repeated entries; dedupe and re-check.
    std::vector<std::size_t> affected = std::move(where[best]);
    where.erase(best);
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    for (const std::size_t w : affected) {
      std::vector<std::string> merged = words[w].symbols;
      if (!merge_in_place(merged, best)) continue;
      account(w, -1);
      words[w].symbols = std::move(merged);
      account(w, +1);
    }
    merges.push_back(best);
  }
  return BpeModel(side, std::move(merges), reserved);
}

BpeModel learn_bpe(std::span<const Tokens> corpus, std::size_t num_merges, const std::set<std::string>& reserved,
                   VocabSide side, Diagnostics* diagnostics) {
  std::map<std::string, std::uint64_t> counts;
  for (const Tokens& sentence : corpus) {
    for (const std::string& token : sentence) ++counts[token];
  }
  return learn_bpe_from_counts(counts, num_merges, reserved, side, diagnostics);
}

Tokens apply_bpe(const BpeModel& model, std::span<const std::string> sentence) {
  Tokens out;
  out.reserve(sentence.size());
  for (const std::string& token : sentence) {
    Tokens pieces = model.segment(token);
    out.insert(out.end(), std::make_move_iterator(pieces.begin()), std::make_move_iterator(pieces.end()));
  }
  return out;
}

Tokens revert_bpe(std::span<const std::string> pieces) {
  Tokens out;
  std::string pending;
  bool open = false;
  for (const std::string& piece : pieces) {
    if (piece.size() > kContinuation.size() && piece.ends_with(kContinuation)) {
      pending.append(piece, 0, piece.size() - kContinuation.size());
      open = true;
      continue;
    }
    pending += piece;
    out.push_back(std::move(pending));
    pending.clear();
    open = false;
  }
  if (open) throw Error(Errc::dangling_continuation, "sequence ends inside a word: '" + pending + "@@'");
  return out;
}

}  // namespace polymt

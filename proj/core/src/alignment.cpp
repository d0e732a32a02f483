#include "polymt/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

#include "polymt/io.hpp"

namespace polymt {

namespace {

constexpr std::size_t kBlockSize = 64;

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::parse_error, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

struct EncodedPair {
  std::vector<TranslationTable::WordId> source;
  std::vector<TranslationTable::WordId> target;
};

// Position prior for one target position: prior[0] is NULL, prior[i] source i.
void position_prior(std::size_t j, std::size_t m, std::size_t n, const DiagonalParams& params,
                    std::vector<double>& prior) {
  prior.assign(n + 1, 0.0);
  prior[0] = params.null_prob;
  double z = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    prior[i] = diagonal_weight(i, j, m, n, params.tension);
    z += prior[i];
  }
  for (std::size_t i = 1; i <= n; ++i) prior[i] *= (1.0 - params.null_prob) / z;
}

struct BlockResult {
  std::vector<std::pair<std::size_t, double>> counts;  // flat entry index, expected count
  double log_likelihood = 0;
};

void estep_block(const TranslationTable& table, const DiagonalParams& params, std::span<const EncodedPair> pairs,
                 const std::vector<std::size_t>& row_offset, BlockResult& result) {
  std::vector<double> prior;
  std::vector<double> joint;
  std::vector<std::size_t> slot;
  for (const EncodedPair& pair : pairs) {
    const std::size_t n = pair.source.size();
    const std::size_t m = pair.target.size();
    for (std::size_t j = 0; j < m; ++j) {
      const auto f = pair.target[j];
      position_prior(j + 1, m, n, params, prior);
      joint.assign(n + 1, 0.0);
      slot.assign(n + 1, 0);
      double total = 0;
      for (std::size_t i = 0; i <= n; ++i) {
        const auto e = i == 0 ? TranslationTable::kNullId : pair.source[i - 1];
        const auto k = table.find_in_row(e, f);
        slot[i] = row_offset[e] + *k;
        joint[i] = prior[i] * table.row_probs(e)[*k];
        total += joint[i];
      }
      if (total <= 0) continue;
      result.log_likelihood += std::log(total);
      for (std::size_t i = 0; i <= n; ++i) {
        if (joint[i] > 0) result.counts.emplace_back(slot[i], joint[i] / total);
      }
    }
  }
}

std::vector<EncodedPair> encode(const TranslationTable& table, std::span<const SentencePair> bitext) {
  std::vector<EncodedPair> out;
  out.reserve(bitext.size());
  for (const SentencePair& p : bitext) {
    EncodedPair e;
    for (const std::string& w : p.source) e.source.push_back(*table.source_id(w));
    for (const std::string& w : p.target) e.target.push_back(*table.target_id(w));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

void DiagonalParams::validate() const {
  if (!(tension >= 0) || !std::isfinite(tension)) {
    throw Error(Errc::invalid_argument, "diagonal tension must be a finite value >= 0");
  }
  if (!(null_prob >= 0 && null_prob < 1)) throw Error(Errc::invalid_argument, "null probability must be in [0, 1)");
}

TranslationTable::TranslationTable() { intern_source(kNullWord); }

std::optional<TranslationTable::WordId> TranslationTable::source_id(std::string_view word) const {
  const auto it = source_index_.find(std::string(word));
  if (it == source_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TranslationTable::WordId> TranslationTable::target_id(std::string_view word) const {
  const auto it = target_index_.find(std::string(word));
  if (it == target_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TranslationTable::entry_count() const noexcept {
  std::size_t n = 0;
  for (const Row& r : rows_) n += r.targets.size();
  return n;
}

TranslationTable::WordId TranslationTable::intern_source(std::string_view word) {
  const auto [it, inserted] = source_index_.emplace(std::string(word), static_cast<WordId>(source_words_.size()));
  if (inserted) {
    source_words_.emplace_back(word);
    rows_.emplace_back();
  }
  return it->second;
}

TranslationTable::WordId TranslationTable::intern_target(std::string_view word) {
  const auto [it, inserted] = target_index_.emplace(std::string(word), static_cast<WordId>(target_words_.size()));
  if (inserted) target_words_.emplace_back(word);
  return it->second;
}

void TranslationTable::set_row(WordId source, std::vector<WordId> targets, std::vector<double> probs) {
  if (targets.size() != probs.size()) throw Error(Errc::invalid_argument, "row targets/probabilities mismatch");
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return targets[a] < targets[b]; });
  Row& row = rows_.at(source);
  row.targets.clear();
  row.probs.clear();
  for (const std::size_t k : order) {
    row.targets.push_back(targets[k]);
    row.probs.push_back(probs[k]);
  }
}

std::optional<std::size_t> TranslationTable::find_in_row(WordId source, WordId target) const {
  const Row& row = rows_.at(source);
  const auto it = std::lower_bound(row.targets.begin(), row.targets.end(), target);
  if (it == row.targets.end() || *it != target) return std::nullopt;
  return static_cast<std::size_t>(it - row.targets.begin());
}

double TranslationTable::prob(WordId source, WordId target) const {
  if (source >= rows_.size()) return 0.0;
  const auto k = find_in_row(source, target);
  return k ? rows_[source].probs[*k] : 0.0;
}

double TranslationTable::prob(std::string_view source, std::string_view target) const {
  const auto e = source_id(source);
  const auto f = target_id(target);
  return (e && f) ? prob(*e, *f) : 0.0;
}

double TranslationTable::row_sum(WordId source) const {
  const auto& p = rows_.at(source).probs;
  return std::accumulate(p.begin(), p.end(), 0.0);
}

void TranslationTable::for_each_sorted(
    const std::function<void(const std::string&, const std::string&, double)>& fn) const {
  std::vector<WordId> sources(source_words_.size());
  std::iota(sources.begin(), sources.end(), WordId{0});
  std::sort(sources.begin(), sources.end(),
            [&](WordId a, WordId b) { return source_words_[a] < source_words_[b]; });
  for (const WordId e : sources) {
    const Row& row = rows_[e];
    std::vector<std::size_t> order(row.targets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return target_words_[row.targets[a]] < target_words_[row.targets[b]];
    });
    for (const std::size_t k : order) fn(source_words_[e], target_words_[row.targets[k]], row.probs[k]);
  }
}

std::string TranslationTable::serialize() const {
  std::string out = "# lambda=" + shortest(params.tension) + " p0=" + shortest(params.null_prob) +
                    " iterations=" + std::to_string(iterations) + "\n";
  for_each_sorted([&](const std::string& e, const std::string& f, double p) {
    out += e;
    out += '\t';
    out += f;
    out += '\t';
    out += shortest(p);
    out += '\n';
  });
  return out;
}

TranslationTable TranslationTable::parse(std::string_view content) {
  TranslationTable table;
  std::map<WordId, std::pair<std::vector<WordId>, std::vector<double>>> rows;
  std::size_t line_no = 0;
  for (const std::string& line : io::split_lines(content)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      for (const std::string& kv : io::split_fields(line.substr(1), ' ')) {
        if (kv.starts_with("lambda=")) table.params.tension = parse_number(kv.substr(7));
        if (kv.starts_with("p0=")) table.params.null_prob = parse_number(kv.substr(3));
        if (kv.starts_with("iterations=")) table.iterations = static_cast<int>(parse_number(kv.substr(11)));
      }
      continue;
    }
    const auto fields = io::split_fields(line);
    if (fields.size() != 3) {
      throw Error(Errc::malformed_line, "translation table line " + std::to_string(line_no) + ": '" + line + "'");
    }
    const double p = parse_number(fields[2]);
    if (!(p >= 0 && p <= 1)) throw Error(Errc::parse_error, "probability out of range at line " + std::to_string(line_no));
    const WordId e = table.intern_source(fields[0]);
    const WordId f = table.intern_target(fields[1]);
    rows[e].first.push_back(f);
    rows[e].second.push_back(p);
  }
  for (auto& [e, row] : rows) table.set_row(e, std::move(row.first), std::move(row.second));
  table.params.validate();
  return table;
}

double diagonal_weight(std::size_t i, std::size_t j, std::size_t m, std::size_t n, double tension) {
  const double rel = static_cast<double>(i) / static_cast<double>(n) - static_cast<double>(j) / static_cast<double>(m);
  return std::exp(-tension * std::abs(rel));
}

TranslationTable initial_table(std::span<const SentencePair> bitext) {
  TranslationTable table;
  std::vector<std::vector<TranslationTable::WordId>> cooc;
  for (const SentencePair& p : bitext) {
    std::vector<TranslationTable::WordId> targets;
    for (const std::string& w : p.target) targets.push_back(table.intern_target(w));
    std::vector<TranslationTable::WordId> sources{TranslationTable::kNullId};
    for (const std::string& w : p.source) sources.push_back(table.intern_source(w));
    if (cooc.size() < table.source_vocab_size()) cooc.resize(table.source_vocab_size());
    for (const auto e : sources) cooc[e].insert(cooc[e].end(), targets.begin(), targets.end());
  }
  cooc.resize(table.source_vocab_size());
  for (TranslationTable::WordId e = 0; e < cooc.size(); ++e) {
    auto& targets = cooc[e];
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    std::vector<double> probs(targets.size(), targets.empty() ? 0.0 : 1.0 / static_cast<double>(targets.size()));
    table.set_row(e, std::move(targets), std::move(probs));
  }
  return table;
}

TranslationTable train_em(std::span<const SentencePair> bitext, int iterations, const DiagonalParams& params,
                          EmTrace* trace, unsigned workers) {
  if (bitext.empty()) throw Error(Errc::empty_bitext, "EM training needs at least one sentence pair");
  if (iterations < 0) throw Error(Errc::invalid_argument, "iterations must be >= 0");
  params.validate();
  for (std::size_t k = 0; k < bitext.size(); ++k) {
    if (bitext[k].source.empty() || bitext[k].target.empty()) {
      throw Error(Errc::empty_sentence, "sentence pair " + std::to_string(k) + " has an empty side");
    }
  }

  TranslationTable table = initial_table(bitext);
  table.params = params;
  const std::vector<EncodedPair> encoded = encode(table, bitext);

  std::vector<std::size_t> row_offset(table.source_vocab_size() + 1, 0);
  for (TranslationTable::WordId e = 0; e < table.source_vocab_size(); ++e) {
    row_offset[e + 1] = row_offset[e] + table.row_targets(e).size();
  }
  const std::size_t num_blocks = (encoded.size() + kBlockSize - 1) / kBlockSize;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, num_blocks));

  std::vector<double> counts(row_offset.back());
  std::vector<BlockResult> wave(workers);
  for (int it = 0; it < iterations; ++it) {
    std::fill(counts.begin(), counts.end(), 0.0);
    double log_likelihood = 0;
    for (std::size_t first = 0; first < num_blocks; first += workers) {
      const std::size_t in_wave = std::min<std::size_t>(workers, num_blocks - first);
      auto run = [&](std::size_t w) {
        wave[w] = BlockResult{};
        const std::size_t begin = (first + w) * kBlockSize;
        const std::size_t end = std::min(encoded.size(), begin + kBlockSize);
        estep_block(table, params, std::span(encoded).subspan(begin, end - begin), row_offset, wave[w]);
      };
      if (in_wave == 1) {
        run(0);
      } else {
        std::vector<std::jthread> threads;
        for (std::size_t w = 0; w < in_wave; ++w) threads.emplace_back(run, w);
      }
      for (std::size_t w = 0; w < in_wave; ++w) {
        for (const auto& [slot, c] : wave[w].counts) counts[slot] += c;
        log_likelihood += wave[w].log_likelihood;
      }
    }
    if (trace != nullptr) trace->log_likelihood.push_back(log_likelihood);

    for (TranslationTable::WordId e = 0; e < table.source_vocab_size(); ++e) {
      auto& probs = table.row_probs(e);
      double total = 0;
      for (std::size_t k = 0; k < probs.size(); ++k) total += counts[row_offset[e] + k];
      // A row that received no mass (NULL when p0 = 0) keeps its distribution.
      if (total <= 0) continue;
      for (std::size_t k = 0; k < probs.size(); ++k) probs[k] = counts[row_offset[e] + k] / total;
    }
    table.iterations = it + 1;
  }
  return table;
}

double corpus_log_likelihood(const TranslationTable& table, const DiagonalParams& params,
                             std::span<const SentencePair> bitext) {
  std::vector<double> prior;
  double ll = 0;
  for (const SentencePair& pair : bitext) {
    const std::size_t n = pair.source.size();
    const std::size_t m = pair.target.size();
    std::vector<std::optional<TranslationTable::WordId>> src{TranslationTable::kNullId};
    for (const std::string& w : pair.source) src.push_back(table.source_id(w));
    for (std::size_t j = 0; j < m; ++j) {
      const auto f = table.target_id(pair.target[j]);
      position_prior(j + 1, m, n, params, prior);
      double total = 0;
      if (f) {
        for (std::size_t i = 0; i <= n; ++i) {
          if (src[i]) total += prior[i] * table.prob(*src[i], *f);
        }
      }
      ll += std::log(total);
    }
  }
  return ll;
}

std::vector<AlignmentLink> viterbi_align(const TranslationTable& table, const DiagonalParams& params,
                                         const SentencePair& pair, Diagnostics* diagnostics) {
  if (pair.source.empty() || pair.target.empty()) {
    throw Error(Errc::empty_sentence, "Viterbi alignment needs two non-empty sentences");
  }
  params.validate();
  const std::size_t n = pair.source.size();
  const std::size_t m = pair.target.size();
  std::vector<std::optional<TranslationTable::WordId>> src{TranslationTable::kNullId};
  for (const std::string& w : pair.source) src.push_back(table.source_id(w));

  std::vector<AlignmentLink> links;
  std::vector<double> prior;
  for (std::size_t j = 0; j < m; ++j) {
    const auto f = table.target_id(pair.target[j]);
    if (!f) {
      warn(diagnostics, "UnseenTargetWord", "'" + pair.target[j] + "' at target position " + std::to_string(j) +
                                                " is not in the table; linked to NULL");
      continue;
    }
    position_prior(j + 1, m, n, params, prior);
    std::size_t best = 0;
    double best_score = prior[0] * table.prob(TranslationTable::kNullId, *f);
    for (std::size_t i = 1; i <= n; ++i) {
      if (!src[i]) continue;
      const double score = prior[i] * table.prob(*src[i], *f);
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    if (best > 0) links.push_back({best - 1, j});
  }
  return links;
}

std::string format_links(std::span<const AlignmentLink> links) {
  std::string out;
  for (const AlignmentLink& l : links) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.src_index) + "-" + std::to_string(l.tgt_index);
  }
  return out;
}

}  // namespace polymt

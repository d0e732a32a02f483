#include "polymt/labeling.hpp"

#include <algorithm>
#include <set>

#include "polymt/error.hpp"
#include "polymt/io.hpp"

namespace polymt {

LabelMode parse_label_mode(std::string_view name) {
  if (name == "language" || name == "language-only") return LabelMode::language_only;
  if (name == "family" || name == "language-plus-family") return LabelMode::language_plus_family;
  throw Error(Errc::invalid_argument, "unknown label mode '" + std::string(name) + "'");
}

Tokens label_tokens(const Language& src, const Language& tgt, LabelMode mode) {
  // Resolve through the registry so unregistered codes fail loudly.
  const Language& s = language(src.code);
  const Language& t = language(tgt.code);
  const std::string prefix(kLabelPrefix);
  Tokens out;
  if (mode == LabelMode::language_plus_family) {
    out.push_back(prefix + "family_src_" + std::string(family_name(s.family)));
    out.push_back(prefix + "family_tgt_" + std::string(family_name(t.family)));
  }
  out.push_back(prefix + "src_" + s.code);
  out.push_back(prefix + "tgt_" + t.code);
  return out;
}

void for_each_multiway_pair(std::span<const Language> langs, const ParallelCorpus& corpus,
                            const SplitAssignment& split, LabelMode mode,
                            const std::function<void(LabeledExample&&)>& sink, SplitPart part) {
  std::vector<Language> sorted(langs.begin(), langs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const Language& l : sorted) {
    if (!corpus.has_language(l.code)) {
      throw Error(Errc::unknown_language, "language '" + l.code + "' not in corpus");
    }
  }
  const auto& ids = split.part(part);
  if (ids.empty()) {
    throw Error(Errc::empty_split, "split part '" + std::string(split_part_name(part)) + "' is empty");
  }
  std::vector<std::size_t> rows;
  rows.reserve(ids.size());
  for (const std::string& id : ids) {
    const auto idx = corpus.index_of(id);
    if (!idx) throw Error(Errc::invalid_argument, "split verse '" + id + "' not in corpus");
    rows.push_back(*idx);
  }
  std::sort(rows.begin(), rows.end());

  // Tokenize each column once rather than once per pair.
  std::vector<std::vector<Tokens>> tokenized(sorted.size());
  for (std::size_t li = 0; li < sorted.size(); ++li) {
    const auto& column = corpus.column(sorted[li].code);
    tokenized[li].reserve(rows.size());
    for (const std::size_t r : rows) tokenized[li].push_back(tokenize(column[r]));
  }

  for (std::size_t si = 0; si < sorted.size(); ++si) {
    for (std::size_t ti = 0; ti < sorted.size(); ++ti) {
      if (si == ti) continue;
      const Tokens labels = label_tokens(sorted[si], sorted[ti], mode);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        LabeledExample ex;
        ex.source = labels;
        ex.source.insert(ex.source.end(), tokenized[si][k].begin(), tokenized[si][k].end());
        ex.target = tokenized[ti][k];
        ex.src = sorted[si];
        ex.tgt = sorted[ti];
        ex.verse_id = corpus.ids()[rows[k]];
        sink(std::move(ex));
      }
    }
  }
}

std::vector<LabeledExample> expand_multiway_pairs(std::span<const Language> langs, const ParallelCorpus& corpus,
                                                  const SplitAssignment& split, LabelMode mode, SplitPart part) {
  std::vector<LabeledExample> out;
  for_each_multiway_pair(langs, corpus, split, mode, [&](LabeledExample&& ex) { out.push_back(std::move(ex)); },
                         part);
  return out;
}

bool language_set_spans(std::span<const Language> langs, std::span<const Family> families) {
  return std::all_of(families.begin(), families.end(), [&](Family f) {
    return std::any_of(langs.begin(), langs.end(), [&](const Language& l) { return l.family == f; });
  });
}

AdditionMode parse_addition_mode(std::string_view name) {
  if (name == "family" || name == "family-addition") return AdditionMode::family;
  if (name == "sparse" || name == "sparse-addition") return AdditionMode::sparse;
  throw Error(Errc::invalid_argument, "unknown addition mode '" + std::string(name) + "'");
}

std::string_view addition_mode_name(AdditionMode mode) noexcept {
  return mode == AdditionMode::family ? "family" : "sparse";
}

FamilyProximity FamilyProximity::default_order() {
  return {{Family::germanic, Family::slavic, Family::romance, Family::albanian, Family::hellenic, Family::italic,
           Family::uralic, Family::celtic}};
}

FamilyProximity FamilyProximity::parse(std::string_view csv) {
  FamilyProximity p;
  for (const std::string& name : io::split_list(csv)) {
    const Family f = parse_family(name);
    if (std::find(p.order.begin(), p.order.end(), f) != p.order.end()) {
      throw Error(Errc::invalid_argument, "family '" + name + "' listed twice in proximity order");
    }
    p.order.push_back(f);
  }
  // Families left out keep their registry order at the end.
  for (const Family f : kAllFamilies) {
    if (std::find(p.order.begin(), p.order.end(), f) == p.order.end()) p.order.push_back(f);
  }
  return p;
}

namespace {

std::vector<Language> sorted_set(const std::set<Language>& s) { return {s.begin(), s.end()}; }

std::vector<std::vector<Language>> family_steps(const Language& anchor, const FamilyProximity& proximity) {
  const auto& registry = LanguageRegistry::instance();
  std::vector<Family> order{anchor.family};
  for (const Family f : proximity.order) {
    if (f != anchor.family) order.push_back(f);
  }
  std::vector<std::vector<Language>> steps;
  std::set<Language> current;
  for (const Family f : order) {
    for (const Language& l : registry.members(f)) current.insert(l);
    steps.push_back(sorted_set(current));
  }
  return steps;
}

}  // namespace

AdditionSchedule build_addition_schedule(const Language& anchor_in, AdditionMode mode, std::uint64_t seed,
                                         const FamilyProximity& proximity) {
  const auto& registry = LanguageRegistry::instance();
  const Language& anchor = registry.at(anchor_in.code);
  AdditionSchedule schedule{mode, anchor, family_steps(anchor, proximity)};
  if (mode == AdditionMode::family) return schedule;

  SeededRng rng(seed);
  std::set<Language> current{anchor};
  std::vector<std::vector<Language>> steps;
  for (const auto& family_step : schedule.steps) {
    std::size_t budget = family_step.size() - current.size();
    std::vector<Family> uncovered;
    for (const Family f : kAllFamilies) {
      const bool covered =
          std::any_of(current.begin(), current.end(), [&](const Language& l) { return l.family == f; });
      if (!covered) uncovered.push_back(f);
    }
    rng.shuffle(uncovered);
    for (const Family f : uncovered) {
      if (budget == 0) break;
      const auto members = registry.members(f);
      current.insert(members[rng.below(members.size())]);
      --budget;
    }
    std::vector<Language> rest;
    for (const Language& l : registry.all()) {
      if (!current.contains(l)) rest.push_back(l);
    }
    rng.shuffle(rest);
    for (std::size_t i = 0; i < budget && i < rest.size(); ++i) current.insert(rest[i]);
    steps.push_back(sorted_set(current));
  }
  schedule.steps = std::move(steps);
  return schedule;
}

std::string format_schedule_tsv(const AdditionSchedule& schedule) {
  std::string out = "# mode=" + std::string(addition_mode_name(schedule.mode)) + " anchor=" + schedule.anchor.code +
                    "\n";
  for (std::size_t i = 0; i < schedule.steps.size(); ++i) {
    out += std::to_string(i + 1) + '\t' + format_language_list(schedule.steps[i]) + '\n';
  }
  return out;
}

std::vector<std::vector<Language>> parse_schedule_tsv(std::string_view content) {
  std::vector<std::vector<Language>> steps;
  for (const std::string& line : io::split_lines(content)) {
    if (line.empty() || line.starts_with("#")) continue;
    const auto fields = io::split_fields(line);
    if (fields.size() != 2) throw Error(Errc::malformed_line, "schedule line '" + line + "'");
    if (fields[0] != std::to_string(steps.size() + 1)) {
      throw Error(Errc::parse_error, "schedule steps must be numbered 1..n in order");
    }
    steps.push_back(parse_language_list(fields[1]));
  }
  return steps;
}

}  // namespace polymt

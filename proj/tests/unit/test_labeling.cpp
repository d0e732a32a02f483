#include <doctest.h>

#include <random>
#include <regex>

#include "check.hpp"
#include "polymt/labeling.hpp"
#include "polymt/languages.hpp"
#include "synthetic.hpp"

using namespace polymt;
using testing::error_code;

namespace {

ParallelCorpus multi_corpus(const std::vector<std::string>& codes, std::size_t n) {
  std::vector<Language> langs;
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> cols;
  for (const auto& c : codes) langs.push_back(language(c));
  for (std::size_t i = 0; i < n; ++i) {
    ids.push_back("V" + std::to_string(100 + i));
    for (const auto& c : codes) cols[c].push_back(c + " text , " + std::to_string(i) + ".");
  }
  return ParallelCorpus(langs, ids, cols);
}

std::vector<Language> langs_of(const std::vector<std::string>& codes) {
  std::vector<Language> out;
  for (const auto& c : codes) out.push_back(language(c));
  return out;
}

}  // namespace

TEST_SUITE("labeling") {
TEST_CASE("label strings") {
  CHECK(join(label_tokens(language("fr"), language("en"), LabelMode::language_plus_family)) ==
        "__opt_family_src_romance __opt_family_tgt_germanic __opt_src_fr __opt_tgt_en");
  CHECK(join(label_tokens(language("de"), language("sw"), LabelMode::language_plus_family)) ==
        "__opt_family_src_germanic __opt_family_tgt_germanic __opt_src_de __opt_tgt_sw");
  CHECK(join(label_tokens(language("fr"), language("en"), LabelMode::language_only)) == "__opt_src_fr __opt_tgt_en");
  CHECK(parse_label_mode("family") == LabelMode::language_plus_family);
  CHECK(parse_label_mode("language") == LabelMode::language_only);
}

TEST_CASE("label tokens match the reserved pattern for every pair") {
  const std::regex pattern("__opt_(family_)?(src|tgt)_[a-z]+");
  for (const Language& s : LanguageRegistry::instance().all()) {
    for (const Language& t : LanguageRegistry::instance().all()) {
      for (LabelMode mode : {LabelMode::language_only, LabelMode::language_plus_family}) {
        const Tokens labels = label_tokens(s, t, mode);
        CHECK(labels.size() == (mode == LabelMode::language_only ? 2u : 4u));
        for (const auto& tok : labels) CHECK(std::regex_match(tok, pattern));
      }
    }
  }
}

TEST_CASE("multiway expansion counts") {
  const auto c = multi_corpus({"en", "sw"}, 10);
  SplitAssignment all;
  all.train = c.ids();
  const auto ex = expand_multiway_pairs(c.languages(), c, all, LabelMode::language_plus_family);
  CHECK(ex.size() == 20);
  for (const auto& e : ex) {
    CHECK(e.src.code != e.tgt.code);
    CHECK(std::count_if(e.source.begin(), e.source.end(), [](const auto& t) { return is_label_token(t); }) == 4);
    CHECK(std::all_of(e.source.begin(), e.source.begin() + 4, [](const auto& t) { return is_label_token(t); }));
    CHECK(std::none_of(e.target.begin(), e.target.end(), [](const auto& t) { return is_label_token(t); }));
  }
  CHECK(ex.front().src.code == "en");
  CHECK(ex.front().source == Tokens{"__opt_family_src_germanic", "__opt_family_tgt_germanic", "__opt_src_en",
                                     "__opt_tgt_sw", "en", "text", ",", "0", "."});

  const auto g = multi_corpus({"de", "dn", "dt", "no", "sw", "en"}, 1);
  SplitAssignment one;
  one.train = g.ids();
  CHECK(expand_multiway_pairs(g.languages(), g, one, LabelMode::language_only).size() == 30);

  const std::vector<Language> single{language("en")};
  CHECK(expand_multiway_pairs(single, c, all, LabelMode::language_only).empty());
}

TEST_CASE("multiway expansion uses only the requested split part") {
  const auto c = multi_corpus({"en", "sw", "fr"}, 40);
  const auto split = split_corpus(c, {}, 9);
  const auto ex = expand_multiway_pairs(c.languages(), c, split, LabelMode::language_only, SplitPart::val);
  CHECK(ex.size() == split.val.size() * 6);
  for (const auto& e : ex) CHECK(std::binary_search(split.val.begin(), split.val.end(), e.verse_id));
  CHECK(std::is_sorted(ex.begin(), ex.end(), [](const auto& a, const auto& b) {
    return std::tie(a.src.code, a.tgt.code, a.verse_id) < std::tie(b.src.code, b.tgt.code, b.verse_id);
  }));
}

TEST_CASE("multiway expansion errors") {
  const auto c = multi_corpus({"en", "sw"}, 4);
  SplitAssignment empty;
  CHECK(error_code([&] { expand_multiway_pairs(c.languages(), c, empty, LabelMode::language_only); }) ==
        Errc::empty_split);
  SplitAssignment all;
  all.train = c.ids();
  const auto with_fr = langs_of({"en", "fr"});
  CHECK(error_code([&] { expand_multiway_pairs(with_fr, c, all, LabelMode::language_only); }) ==
        Errc::unknown_language);
}

TEST_CASE("spanning") {
  const std::vector<Family> gr{Family::germanic, Family::romance};
  CHECK(language_set_spans(langs_of({"en", "fr"}), gr));
  CHECK_FALSE(language_set_spans(langs_of({"en", "de"}), gr));
  const auto one_each = langs_of({"en", "ru", "fr", "ab", "gk", "ln", "fn", "ws"});
  CHECK(language_set_spans(one_each, kAllFamilies));
  CHECK(language_set_spans(langs_of({}), std::vector<Family>{}));
}

TEST_CASE("spanning is monotone under supersets") {
  std::mt19937_64 rng(2);
  const auto all = LanguageRegistry::instance().all();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Language> s, bigger;
    for (const auto& l : all) {
      const bool in = rng() % 3 == 0;
      if (in) s.push_back(l);
      if (in || rng() % 2) bigger.push_back(l);
    }
    std::vector<Family> fams;
    for (Family f : kAllFamilies) {
      if (rng() % 2) fams.push_back(f);
    }
    if (language_set_spans(s, fams)) CHECK(language_set_spans(bigger, fams));
  }
}

TEST_CASE("family schedule") {
  const auto sched = build_addition_schedule(language("sw"), AdditionMode::family, 0);
  REQUIRE(sched.steps.size() == 8);
  CHECK(sched.steps[0].size() == 6);
  for (const auto& l : sched.steps[0]) CHECK(l.family == Family::germanic);
  CHECK(sched.steps[1].size() == 12);
  CHECK(language_set_spans(sched.steps[1], std::vector<Family>{Family::germanic, Family::slavic}));
  CHECK(sched.steps[2].size() == 17);
  CHECK(sched.steps.back().size() == 23);

  const auto romance_first = build_addition_schedule(language("sw"), AdditionMode::family, 0,
                                                     FamilyProximity::parse("germanic,romance"));
  CHECK(language_set_spans(romance_first.steps[1], std::vector<Family>{Family::romance}));
  CHECK_FALSE(language_set_spans(romance_first.steps[1], std::vector<Family>{Family::slavic}));
}

TEST_CASE("schedules are monotone; sparse steps mirror family sizes and span early") {
  for (const char* anchor : {"sw", "fr", "gk", "ws"}) {
    const auto fam = build_addition_schedule(language(anchor), AdditionMode::family, 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto sp = build_addition_schedule(language(anchor), AdditionMode::sparse, seed);
      REQUIRE(sp.steps.size() == fam.steps.size());
      std::size_t prev_families = 0;
      for (std::size_t k = 0; k < sp.steps.size(); ++k) {
        CHECK(sp.steps[k].size() == fam.steps[k].size());
        CHECK(std::binary_search(sp.steps[k].begin(), sp.steps[k].end(), language(anchor)));
        if (k > 0) {
          CHECK(std::includes(sp.steps[k].begin(), sp.steps[k].end(), sp.steps[k - 1].begin(),
                              sp.steps[k - 1].end()));
          CHECK(std::includes(fam.steps[k].begin(), fam.steps[k].end(), fam.steps[k - 1].begin(),
                              fam.steps[k - 1].end()));
        }
        std::set<Family> fams;
        for (const auto& l : sp.steps[k]) fams.insert(l.family);
        if (sp.steps[k].size() >= 8) CHECK(language_set_spans(sp.steps[k], kAllFamilies));
        if (k > 0 && prev_families < 8) CHECK(fams.size() > prev_families);
        prev_families = fams.size();
      }
    }
  }
  const auto a = build_addition_schedule(language("sw"), AdditionMode::sparse, 4);
  const auto b = build_addition_schedule(language("sw"), AdditionMode::sparse, 4);
  CHECK(format_schedule_tsv(a) == format_schedule_tsv(b));
}

TEST_CASE("schedule file round trip") {
  const auto s = build_addition_schedule(language("sw"), AdditionMode::sparse, 3);
  const auto steps = parse_schedule_tsv(format_schedule_tsv(s));
  REQUIRE(steps.size() == s.steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) CHECK(steps[k] == s.steps[k]);
  CHECK(error_code([] { build_addition_schedule(language("xx"), AdditionMode::family, 0); }) == Errc::unknown_language);
}
}

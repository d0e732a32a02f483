#include <doctest.h>

#include <random>

#include "check.hpp"
#include "polymt/io.hpp"
#include "polymt/lexicon.hpp"
#include "synthetic.hpp"

using namespace polymt;
using testing::error_code;

namespace {

LexiconEntry entry(std::size_t id, std::map<std::string, std::string> surfaces,
                   std::map<std::string, std::size_t> freq = {}) {
  LexiconEntry e;
  e.id = id;
  e.surfaces = std::move(surfaces);
  e.frequencies = std::move(freq);
  return e;
}

LexiconTable table5() {
  const char* rows[][6] = {{"Joseph", "Joseph", "Jozef", "José", "Joseph", "Josef"},
                           {"Peter", "Petrus", "Petr", "Pedro", "Pietari", "Petrus"},
                           {"Zion", "Zion", "Sion", "Sion", "Zionin", "Sion"},
                           {"John", "Johannes", "Jan", "Juan", "Johannes", "Johannes"},
                           {"Egypt", "Ägypten", "Egyptské", "Egipto", "Egyptin", "Egyptens"},
                           {"Noah", "Noah", "Noé", "Noé", "Noa", "Noa"}};
  const char* cols[] = {"en", "de", "cz", "es", "fn", "sw"};
  std::vector<LexiconEntry> entries;
  for (std::size_t r = 0; r < 6; ++r) {
    LexiconEntry e;
    e.id = r + 1;
    for (int c = 0; c < 6; ++c) e.surfaces[cols[c]] = rows[r][c];
    entries.push_back(e);
  }
  return LexiconTable(entries);
}

}  // namespace

TEST_SUITE("lexicon") {
TEST_CASE("seed filtering") {
  const std::vector<std::string> raw{"Noah", "and", "noah", "Z"};
  CHECK(filter_seed_list(raw, {"and"}) == std::vector<std::string>{"Noah"});
  const std::vector<std::string> punct{"Noah,"};
  CHECK(filter_seed_list(punct, {}) == std::vector<std::string>{"Noah"});
  const std::vector<std::string> none;
  CHECK(error_code([&] { filter_seed_list(none, {}); }) == Errc::empty_result);
  const std::vector<std::string> mixed{"  Mount   Zion.", "the", "THE", "egypt", "Egypt", "Ai", "«Ur»"};
  CHECK(filter_seed_list(mixed, {"The"}) == std::vector<std::string>{"Ai", "Egypt", "Mount Zion", "Ur"});
}

TEST_CASE("table validation") {
  CHECK(error_code([] { LexiconTable({entry(1, {{"en", "A"}}), entry(1, {{"en", "B"}})}); }) == Errc::duplicate_entry);
  CHECK(error_code([] { LexiconTable({entry(1, {{"en", "A"}}), entry(2, {{"en", "A"}})}); }) == Errc::duplicate_entry);
  CHECK(error_code([] { LexiconTable({entry(1, {{"sw", "A"}})}); }) == Errc::invalid_argument);
  const LexiconTable t = table5();
  CHECK(t.find_english("Egypt")->surface("de") == "Ägypten");
  CHECK(t.find_english("Egypt")->surface("ru").empty());
  CHECK(t.find_english("Moses") == nullptr);
  CHECK(t.languages() == std::vector<std::string>{"en", "de", "sw", "cz", "es", "fn"});
}

TEST_CASE("table files") {
  LexiconTable t({entry(1, {{"en", "Noah"}, {"sw", "Noa"}}, {{"en", 58}, {"sw", 57}}),
                  entry(2, {{"en", "Mount Zion"}, {"de", "Berg Zion"}}, {{"en", 3}})});
  const std::string tsv = t.serialize();
  const auto header = io::split_fields(io::split_lines(tsv).front());
  CHECK(header.size() == 24);
  CHECK(header[0] == "id");
  CHECK(header[1] == "en");
  CHECK(header[2] == "de");
  const auto back = LexiconTable::parse(tsv, t.serialize_frequencies());
  CHECK(back.serialize() == tsv);
  CHECK(back.serialize_frequencies() == t.serialize_frequencies());
  CHECK(back.entries()[0].frequency("en") == 58);

  testing::TempDir dir("lex");
  save_lexicon(t, dir / "lex.tsv");
  CHECK(std::filesystem::exists(dir / "lex.freq.tsv"));
  CHECK(load_lexicon(dir / "lex.tsv").serialize_frequencies() == t.serialize_frequencies());
  CHECK(error_code([] { LexiconTable::parse("id\ten\n1\tA\tB\n"); }) == Errc::malformed_line);
  CHECK(error_code([] { LexiconTable::parse("id\tde\n1\tA\n"); }) == Errc::parse_error);
}

TEST_CASE("lookup prefers the longest match") {
  LexiconTable t({entry(1, {{"en", "New"}}), entry(2, {{"en", "New York"}}), entry(3, {{"en", "York"}})});
  CHECK(lookup_rows(t, "en", Tokens{"New", "York"}) == std::vector<LexiconMatch>{{0, 2, 1}});
  CHECK(lookup_rows(t, "en", Tokens{"New", "New", "York", "York"}) ==
        std::vector<LexiconMatch>{{0, 1, 0}, {1, 3, 1}, {3, 4, 2}});
  CHECK(lookup_rows(t, "en", Tokens{"new", "york"}).empty());
  const auto noah = lookup_rows(table5(), "en", tokenize("And Noah fathered three sons, Shem, and John."));
  CHECK(noah.size() == 2);
}

TEST_CASE("lookup matches four names in sentence order") {
  LexiconTable t({entry(1, {{"en", "Noah"}}), entry(2, {{"en", "Shem"}}), entry(3, {{"en", "Ham"}}),
                  entry(4, {{"en", "Japheth"}})});
  const auto m = lookup_rows(t, "en", tokenize("And Noah fathered three sons, Shem, Ham, and Japheth."));
  REQUIRE(m.size() == 4);
  CHECK(m[0].entry == 0);
  CHECK(m[1].entry == 1);
  CHECK(m[2].entry == 2);
  CHECK(m[3].entry == 3);
}

TEST_CASE("matches are sorted, disjoint, and rebuild the sentence with the gaps") {
  const auto world = synth::entity_world(3, 200);
  for (const auto& [src, tgt] : world.pairs) {
    const auto m = lookup_rows(world.table, "en", src);
    Tokens rebuilt;
    std::size_t pos = 0;
    for (const auto& x : m) {
      CHECK(x.begin >= pos);
      CHECK(x.end > x.begin);
      rebuilt.insert(rebuilt.end(), src.begin() + pos, src.begin() + x.begin);
      const auto surface = split_whitespace(world.table.entries()[x.entry].english());
      CHECK(Tokens(src.begin() + x.begin, src.begin() + x.end) == surface);
      rebuilt.insert(rebuilt.end(), surface.begin(), surface.end());
      pos = x.end;
    }
    rebuilt.insert(rebuilt.end(), src.begin() + pos, src.end());
    CHECK(rebuilt == src);
  }
}

TEST_CASE("count occurrences") {
  CHECK(count_occurrences(Tokens{"a", "a", "a"}, Tokens{"a", "a"}) == 1);
  CHECK(count_occurrences(Tokens{"a", "b", "a", "b"}, Tokens{"a", "b"}) == 2);
  CHECK(count_occurrences(Tokens{"a"}, Tokens{}) == 0);
}

TEST_CASE("trimming") {
  LexiconTable t({entry(1, {{"en", "Noah"}}, {{"en", 58}}), entry(2, {{"en", "Dalphon"}}, {{"en", 1}}),
                  entry(3, {{"en", "Aridai"}}, {{"en", 1}})});
  CHECK(trim_table(t, TrimPolicy::none()).serialize() == t.serialize());
  const auto f1 = trim_table(t, TrimPolicy::frequency_one());
  CHECK(f1.size() == 2);
  CHECK(f1.find_english("Noah") == nullptr);
  CHECK(f1.find_english("Dalphon") != nullptr);

  testing::TempDir dir("trim");
  io::write_file_atomic(dir / "keep.txt", "Noah\nMoses\n");
  const auto manual = trim_table(t, TrimPolicy::manual(dir / "keep.txt"));
  REQUIRE(manual.size() == 1);
  CHECK(manual.entries()[0].english() == "Noah");
  CHECK(error_code([&] { trim_table(t, TrimPolicy::manual(dir / "absent.txt")); }) == Errc::missing_selection_file);
  CHECK(TrimPolicy::parse("freq1").kind == TrimPolicy::Kind::frequency_one);
  CHECK(error_code([] { TrimPolicy::parse("half"); }) == Errc::invalid_argument);
}

TEST_CASE("trim output is a subset and recounts from the corpus") {
  const auto b = synth::planted_bitext(2, 40);
  const auto corpus = synth::as_corpus(b.pairs);
  std::vector<LexiconEntry> entries;
  for (std::size_t k = 0; k < b.entities.size(); ++k) entries.push_back(entry(k + 1, {{"en", b.entities[k]}}));
  entries.push_back(entry(99, {{"en", "Absent"}}));
  const LexiconTable t(entries);
  const auto f1 = trim_table(t, TrimPolicy::frequency_one(), &corpus);
  // 20 named verses over 10 names: each name occurs twice.
  CHECK(f1.empty());
  for (const auto& e : f1.entries()) CHECK(t.find_english(e.english()) != nullptr);
}

TEST_CASE("assembly recovers planted entity translations") {
  const auto b = synth::planted_bitext(17);
  const auto corpus = synth::as_corpus(b.pairs);
  AlignerSet aligners;
  aligners.emplace("sw", train_em(b.pairs, 5, {}));
  Diagnostics diag;
  std::vector<std::string> seeds = b.entities;
  seeds.push_back("Nobody");
  const auto table = assemble_table(seeds, corpus, aligners, {}, &diag);
  CHECK(table.size() == 11);
  std::size_t recovered = 0;
  for (const auto& name : b.entities) {
    const LexiconEntry* e = table.find_english(name);
    REQUIRE(e != nullptr);
    recovered += e->surface("sw") == b.dictionary.at(name);
    CHECK(e->frequency("en") == 10);
  }
  CHECK(recovered >= 9);
  const LexiconEntry* nobody = table.find_english("Nobody");
  REQUIRE(nobody != nullptr);
  CHECK(nobody->surface("sw").empty());
  CHECK(diag.has("SeedNotInCorpus"));

  CHECK(assemble_table(seeds, corpus, aligners, {}).serialize() == table.serialize());
  AlignerSet none;
  CHECK(error_code([&] { assemble_table(seeds, corpus, none, {}); }) == Errc::missing_aligner);
}

TEST_CASE("assembly projects de and sw surfaces through alignment") {
  auto project = [](const std::string& lang, const std::vector<std::pair<std::string, std::string>>& names,
                    std::uint64_t seed) {
    const auto b = synth::planted_bitext(seed, 200, 20, 0, names);
    const auto corpus = synth::as_corpus(b.pairs, lang);
    AlignerSet aligners;
    aligners.emplace(lang, train_em(b.pairs, 5, {}));
    std::vector<std::string> seeds;
    for (const auto& n : names) seeds.push_back(n.first);
    return assemble_table(seeds, corpus, aligners);
  };
  const auto de = project("de", {{"Egypt", "Ägypten"}, {"Noah", "Noah"}, {"Peter", "Petrus"}, {"Zion", "Zion"}}, 29);
  CHECK(de.find_english("Egypt")->surface("de") == "Ägypten");
  CHECK(de.find_english("Peter")->surface("de") == "Petrus");
  CHECK(de.find_english("Noah")->surface("de") == "Noah");
  const auto sw = project("sw", {{"Noah", "Noa"}, {"Egypt", "Egyptens"}, {"John", "Johannes"}}, 31);
  CHECK(sw.find_english("Noah")->surface("sw") == "Noa");
  CHECK(sw.find_english("Egypt")->surface("sw") == "Egyptens");
  CHECK(sw.find_english("John")->surface("sw") == "Johannes");
}
}

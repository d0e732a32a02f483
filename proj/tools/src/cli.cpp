#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "polymt/alignment.hpp"
#include "polymt/bpe.hpp"
#include "polymt/corpus.hpp"
#include "polymt/error.hpp"
#include "polymt/evaluation.hpp"
#include "polymt/harness.hpp"
#include "polymt/io.hpp"
#include "polymt/labeling.hpp"
#include "polymt/languages.hpp"
#include "polymt/lexicon.hpp"
#include "polymt/netag.hpp"
#include "polymt/text.hpp"

namespace polymt::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSubcommands = {
    "ingest",    "align",     "split",     "stats",   "label",    "schedule",   "bpe-learn",
    "bpe-apply", "align-train", "lex-filter", "lex-build", "lex-trim", "tag",     "restore",
    "sample",    "gl-monitor", "fit",      "bleu",    "rubric",   "emit-config", "run"};

std::string lines_to_text(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<Tokens> read_token_lines(const fs::path& path) {
  std::vector<Tokens> out;
  for (const std::string& line : io::read_lines(path)) out.push_back(split_whitespace(line));
  return out;
}

std::vector<Tokens> tokenize_lines(const fs::path& path) {
  std::vector<Tokens> out;
  for (const std::string& line : io::read_lines(path)) out.push_back(tokenize(line));
  return out;
}

std::string join_lines(const std::vector<Tokens>& sentences) {
  std::string out;
  for (const Tokens& s : sentences) {
    out += join(s);
    out += '\n';
  }
  return out;
}

// Languages whose `<code>.tsv` exists in the store, in registry order.
std::vector<Language> store_languages(const fs::path& dir) {
  std::vector<Language> out;
  for (const Language& l : LanguageRegistry::instance().all()) {
    if (fs::exists(dir / (l.code + ".tsv"))) out.push_back(l);
  }
  if (out.empty()) throw Error(Errc::empty_corpus, "no <lang>.tsv files in " + dir.string());
  return out;
}

ParallelCorpus load_corpus(const fs::path& dir, const std::string& langs, Diagnostics* diag) {
  const std::vector<Language> wanted = langs.empty() ? store_languages(dir) : parse_language_list(langs);
  return read_corpus_dir(dir, wanted, diag);
}

void report(const Diagnostics& diag, std::ostream& err) {
  for (const Diagnostic& d : diag.entries()) err << "warning: " << d.code << ": " << d.message << '\n';
}

std::set<std::string> read_word_set(const std::string& path) {
  std::set<std::string> out;
  if (path.empty()) return out;
  for (const std::string& line : io::read_lines(path)) {
    const std::string t = trim(line);
    if (!t.empty() && !t.starts_with('#')) out.insert(t);
  }
  return out;
}

fs::path sidecar_for(const fs::path& out) {
  fs::path p = out;
  p += ".decode.jsonl";
  return p;
}

// Logs every option that was given, so a run can be repeated from stderr.
void log_parameters(const CLI::App& sub, std::ostream& err) {
  err << "polymt " << sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    err << ' ' << opt->get_name();
    for (const std::string& r : opt->results()) err << '=' << r;
  }
  err << '\n';
}

double parse_double(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::parse_error, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
}

unsigned long long parse_unsigned(std::string_view text, std::string_view what) {
  try {
    std::size_t used = 0;
    if (text.empty() || text.front() == '-') throw std::invalid_argument("sign");
    const unsigned long long v = std::stoull(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw Error(Errc::parse_error, "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
}

struct Options {
  std::string in, out, lang, langs, corpus, split_file, mode = "family", part = "train", anchor, proximity;
  std::string ratios = "0.75,0.15,0.10", model, side = "source", reserved, src, tgt, src_file, tgt_file;
  std::string stoplist, seeds, aligners, lexicon, policy = "none", selection, decode, target_in, target_out;
  std::string manifest_out, hyp, ref, meaning, profile = "multilingual", manifest, tsv;
  std::vector<std::string> inputs;
  unsigned long long seed = 0;
  std::size_t merges = 0, total = 0, min_votes = 2;
  int iterations = 5, max_n = 4;
  unsigned workers = 0;
  double tension = DiagonalParams{}.tension, null_prob = DiagonalParams{}.null_prob, fraction = 1.0;
  double alpha = kDefaultGlThreshold;
  bool revert = false, force = false;
};

void add_seed(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "random seed (default $POLYMT_SEED or 0)");
}

int run_subcommand(const std::string& name, Options& o, const Streams& s) {
  std::ostream& out = *s.out;
  std::ostream& err = *s.err;
  Diagnostics diag;

  if (name == "ingest") {
    const Language& lang = language(o.lang);
    const VerseMap verses = ingest_language_file(o.in, lang, &diag);
    io::write_file_atomic(fs::path(o.out) / (lang.code + ".tsv"), format_language_tsv(verses));
    out << "ingested " << verses.size() << " verses for " << lang.code << '\n';
  } else if (name == "align") {
    const ParallelCorpus corpus = load_corpus(o.in, o.langs, &diag);
    write_corpus_dir(corpus, o.out);
    out << "aligned " << corpus.size() << " verses across " << corpus.languages().size() << " languages\n";
  } else if (name == "split") {
    const ParallelCorpus corpus = load_corpus(o.corpus, o.langs, &diag);
    const auto r = io::split_list(o.ratios);
    if (r.size() != 3) throw Error(Errc::bad_ratios, "expected three ratios, got '" + o.ratios + "'");
    const SplitRatios ratios{parse_double(r[0], "ratio"), parse_double(r[1], "ratio"), parse_double(r[2], "ratio")};
    const SplitAssignment split = split_corpus(corpus, ratios, o.seed);
    io::write_file_atomic(o.out, format_split(split));
    out << "train " << split.train.size() << " val " << split.val.size() << " test " << split.test.size() << '\n';
  } else if (name == "stats") {
    const ParallelCorpus corpus = load_corpus(o.corpus, o.langs, &diag);
    std::vector<CorpusStats> stats;
    for (const Language& l : corpus.languages()) stats.push_back(corpus_stats(corpus, l));
    const std::string tsv = format_stats_tsv(stats);
    if (o.out.empty()) out << tsv;
    else io::write_file_atomic(o.out, tsv);
  } else if (name == "label") {
    const ParallelCorpus corpus = load_corpus(o.corpus, o.langs, &diag);
    const SplitAssignment split = parse_split(io::read_file(o.split_file));
    std::string src, tgt, meta;
    std::size_t n = 0;
    for_each_multiway_pair(
        corpus.languages(), corpus, split, parse_label_mode(o.mode),
        [&](LabeledExample&& ex) {
          src += join(ex.source) + '\n';
          tgt += join(ex.target) + '\n';
          meta += ex.verse_id + '\t' + ex.src.code + '\t' + ex.tgt.code + '\n';
          ++n;
        },
        parse_split_part(o.part));
    io::write_file_atomic(o.out + ".src", src);
    io::write_file_atomic(o.out + ".tgt", tgt);
    io::write_file_atomic(o.out + ".meta", meta);
    out << "wrote " << n << " labeled pairs\n";
  } else if (name == "schedule") {
    const FamilyProximity prox = o.proximity.empty() ? FamilyProximity::default_order() : FamilyProximity::parse(o.proximity);
    const AdditionSchedule sched = build_addition_schedule(language(o.anchor), parse_addition_mode(o.mode), o.seed, prox);
    const std::string tsv = format_schedule_tsv(sched);
    if (o.out.empty()) out << tsv;
    else io::write_file_atomic(o.out, tsv);
  } else if (name == "bpe-learn") {
    std::vector<Tokens> sentences;
    for (const std::string& path : o.inputs) {
      auto part = read_token_lines(path);
      sentences.insert(sentences.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    const BpeModel model = learn_bpe(sentences, o.merges, read_word_set(o.reserved), parse_vocab_side(o.side), &diag);
    io::write_file_atomic(o.out, model.serialize());
    out << "learned " << model.merges().size() << " merges\n";
  } else if (name == "bpe-apply") {
    const std::vector<Tokens> lines = read_token_lines(o.in);
    std::vector<Tokens> result;
    result.reserve(lines.size());
    if (o.revert) {
      for (const Tokens& l : lines) result.push_back(revert_bpe(l));
    } else {
      if (o.model.empty()) throw Error(Errc::missing_argument, "--model is required unless --revert is given");
      const BpeModel model = BpeModel::parse(io::read_file(o.model));
      for (const Tokens& l : lines) result.push_back(apply_bpe(model, l));
    }
    io::write_file_atomic(o.out, join_lines(result));
  } else if (name == "align-train") {
    std::vector<SentencePair> bitext;
    if (!o.corpus.empty()) {
      if (o.src.empty() || o.tgt.empty()) throw Error(Errc::missing_argument, "--src and --tgt are required with --corpus");
      const ParallelCorpus corpus = load_corpus(o.corpus, o.src + "," + o.tgt, &diag);
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        bitext.push_back({tokenize(corpus.text(language(o.src).code, i)), tokenize(corpus.text(language(o.tgt).code, i))});
      }
    } else {
      if (o.src_file.empty() || o.tgt_file.empty()) {
        throw Error(Errc::missing_argument, "give --corpus with --src/--tgt, or --source-text and --target-text");
      }
      const auto a = read_token_lines(o.src_file);
      const auto b = read_token_lines(o.tgt_file);
      if (a.size() != b.size()) throw Error(Errc::length_mismatch, "source and target files differ in line count");
      for (std::size_t i = 0; i < a.size(); ++i) bitext.push_back({a[i], b[i]});
    }
    std::erase_if(bitext, [](const SentencePair& p) { return p.source.empty() || p.target.empty(); });
    EmTrace trace;
    const TranslationTable table = train_em(bitext, o.iterations, {o.tension, o.null_prob}, &trace, o.workers);
    io::write_file_atomic(o.out, table.serialize());
    for (std::size_t i = 0; i < trace.log_likelihood.size(); ++i) {
      err << "iteration " << i + 1 << " log-likelihood " << trace.log_likelihood[i] << '\n';
    }
    out << "trained on " << bitext.size() << " pairs, " << table.entry_count() << " entries\n";
  } else if (name == "lex-filter") {
    const std::vector<std::string> raw = io::read_lines(o.in);
    const auto seeds = filter_seed_list(raw, read_word_set(o.stoplist));
    io::write_file_atomic(o.out, lines_to_text(seeds));
    out << "kept " << seeds.size() << " of " << raw.size() << " candidates\n";
  } else if (name == "lex-build") {
    const ParallelCorpus corpus = load_corpus(o.corpus, o.langs, &diag);
    AlignerSet aligners;
    for (const Language& l : corpus.languages()) {
      if (l.code == "en") continue;
      const fs::path p = fs::path(o.aligners) / ("en-" + l.code + ".tsv");
      if (fs::exists(p)) aligners.emplace(l.code, TranslationTable::parse(io::read_file(p)));
    }
    std::vector<std::string> seeds;
    for (const std::string& line : io::read_lines(o.seeds)) {
      if (!trim(line).empty()) seeds.push_back(trim(line));
    }
    const LexiconTable table = assemble_table(seeds, corpus, aligners, {o.min_votes}, &diag);
    save_lexicon(table, o.out);
    out << "lexicon rows " << table.size() << '\n';
  } else if (name == "lex-trim") {
    const LexiconTable table = load_lexicon(o.lexicon);
    std::optional<ParallelCorpus> corpus;
    if (!o.corpus.empty()) corpus = load_corpus(o.corpus, "en", &diag);
    const LexiconTable trimmed = trim_table(table, TrimPolicy::parse(o.policy, o.selection), corpus ? &*corpus : nullptr);
    save_lexicon(trimmed, o.out);
    out << "kept " << trimmed.size() << " of " << table.size() << " rows\n";
  } else if (name == "tag") {
    const LexiconTable table = load_lexicon(o.lexicon);
    const auto sources = tokenize_lines(o.in);
    const fs::path decode_path = o.decode.empty() ? sidecar_for(o.out) : fs::path(o.decode);
    std::vector<Tokens> tagged_src;
    std::string decode;
    std::size_t placeholders = 0;
    if (!o.target_in.empty()) {
      if (o.target_out.empty()) throw Error(Errc::missing_argument, "--target-out is required with --target-in");
      const auto targets = tokenize_lines(o.target_in);
      if (targets.size() != sources.size()) throw Error(Errc::length_mismatch, "source and target differ in line count");
      std::vector<Tokens> tagged_tgt;
      for (std::size_t i = 0; i < sources.size(); ++i) {
        TaggedPair p = tag_training_pair(sources[i], targets[i], table, o.src, o.tgt, &diag);
        placeholders += p.source.k;
        decode += format_decode_record(i + 1, p.decode) + '\n';
        tagged_src.push_back(std::move(p.source.text));
        tagged_tgt.push_back(std::move(p.target.text));
      }
      io::write_file_atomic(o.target_out, join_lines(tagged_tgt));
    } else {
      for (std::size_t i = 0; i < sources.size(); ++i) {
        TaggedSource t = tag_source(sources[i], table, o.src, o.tgt);
        placeholders += t.sentence.k;
        decode += format_decode_record(i + 1, t.decode) + '\n';
        tagged_src.push_back(std::move(t.sentence.text));
      }
    }
    io::write_file_atomic(o.out, join_lines(tagged_src));
    io::write_file_atomic(decode_path, decode);
    out << "tagged " << sources.size() << " sentences, " << placeholders << " placeholders\n";
  } else if (name == "restore") {
    const auto lines = read_token_lines(o.in);
    const auto tables = parse_decode_jsonl(io::read_file(o.decode));
    if (tables.size() != lines.size()) {
      throw Error(Errc::length_mismatch, std::to_string(lines.size()) + " lines vs " + std::to_string(tables.size()) +
                                             " decode records");
    }
    std::vector<Tokens> restored;
    for (std::size_t i = 0; i < lines.size(); ++i) restored.push_back(restore_placeholders(lines[i], tables[i]));
    io::write_file_atomic(o.out, join_lines(restored));
  } else if (name == "sample") {
    std::vector<std::string> ids, texts;
    if (!o.corpus.empty()) {
      const ParallelCorpus corpus = load_corpus(o.corpus, o.lang, &diag);
      std::vector<std::string> keep = corpus.ids();
      if (!o.split_file.empty()) keep = parse_split(io::read_file(o.split_file)).part(parse_split_part(o.part));
      const ParallelCorpus sub = corpus.subset(keep);
      ids = sub.ids();
      texts = sub.column(language(o.lang).code);
    } else {
      for (const auto& [id, text] : parse_language_tsv(io::read_file(o.in), o.in, &diag)) {
        ids.push_back(id);
        texts.push_back(text);
      }
    }
    const AblationPlan plan{o.fraction, o.seed, o.total};
    const AblationSample sample = sample_low_resource(ids, texts, plan);
    std::map<std::string, const std::string*> by_id;
    for (std::size_t i = 0; i < ids.size(); ++i) by_id[ids[i]] = &texts[i];
    std::string body;
    for (const std::string& id : sample.ids) body += id + '\t' + *by_id.at(id) + '\n';
    io::write_file_atomic(o.out, body);
    const std::string row = format_ablation_row(plan, sample);
    if (!o.manifest_out.empty()) {
      std::string existing = fs::exists(o.manifest_out) ? io::read_file(o.manifest_out) : std::string(kAblationHeader) + '\n';
      io::write_file_atomic(o.manifest_out, existing + row + '\n');
    }
    out << kAblationHeader << '\n' << row << '\n';
  } else if (name == "gl-monitor") {
    GlState state;
    state.alpha = o.alpha;
    std::string line;
    std::size_t lineno = 0;
    out << "epoch\tscore\tgl\tdecision\n";
    while (std::getline(*s.in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty() || line.starts_with('#')) continue;
      const auto f = io::split_fields(trim(line));
      if (f.size() != 2) throw Error(Errc::malformed_line, "line " + std::to_string(lineno) + ": expected epoch<TAB>score");
      const GlResult r = gl_update(state, parse_unsigned(f[0], "epoch"), parse_double(f[1], "score"));
      char gl[32];
      std::snprintf(gl, sizeof gl, "%.4f", r.gl);
      out << f[0] << '\t' << f[1] << '\t' << gl << '\t' << gl_decision_name(r.decision) << '\n';
      out.flush();
      state = r.state;
      if (r.decision == GlDecision::stop) break;
    }
  } else if (name == "fit") {
    std::vector<std::pair<double, double>> points;
    for (const std::string& line : io::read_lines(o.in)) {
      const std::string t = trim(line);
      if (t.empty() || t.starts_with('#')) continue;
      const auto f = io::split_fields(t);
      if (f.size() != 2) throw Error(Errc::malformed_line, "expected words<TAB>score, got '" + t + "'");
      points.emplace_back(parse_double(f[0], "word count"), parse_double(f[1], "score"));
    }
    const PowerLawFit fit = fit_power_law(points);
    char buf[128];
    std::snprintf(buf, sizeof buf, "slope\t%.12g\nintercept\t%.12g\nr2\t%.12g\n", fit.slope, fit.intercept, fit.r_squared);
    out << buf;
  } else if (name == "bleu") {
    const auto hyps = read_token_lines(o.hyp);
    const auto refs = read_token_lines(o.ref);
    const BleuReport report = corpus_bleu(hyps, refs, o.max_n);
    out << format_bleu_summary(report) << '\n';
    if (!o.tsv.empty()) io::write_file_atomic(o.tsv, format_bleu_tsv(report));
  } else if (name == "rubric") {
    std::vector<RubricJudgment> judgments;
    if (!o.hyp.empty()) {
      if (o.ref.empty() || o.decode.empty()) throw Error(Errc::missing_argument, "--ref and --decode are required with --hyp");
      const auto hyps = read_token_lines(o.hyp);
      const auto refs = read_token_lines(o.ref);
      const auto tables = parse_decode_jsonl(io::read_file(o.decode));
      if (hyps.size() != refs.size() || hyps.size() != tables.size()) {
        throw Error(Errc::length_mismatch, "hypothesis, reference and decode files differ in length");
      }
      std::vector<std::string> flags;
      if (!o.meaning.empty()) flags = io::read_lines(o.meaning);
      for (std::size_t i = 0; i < hyps.size(); ++i) {
        std::optional<bool> m;
        const std::string flag = i < flags.size() ? trim(flags[i]) : std::string();
        if (flag == "1" || flag == "true") m = true;
        else if (flag == "0" || flag == "false") m = false;
        else if (!flag.empty()) throw Error(Errc::parse_error, "meaning flag '" + flag + "' on line " + std::to_string(i + 1));
        judgments.push_back(judge_sentence(hyps[i], refs[i], tables[i], m));
      }
      if (o.out.empty()) throw Error(Errc::missing_argument, "--out is required with --hyp");
      io::write_file_atomic(o.out, format_rubric_jsonl(judgments));
      const bool pending = std::any_of(judgments.begin(), judgments.end(),
                                       [](const RubricJudgment& j) { return j.category == RubricCategory::pending; });
      if (pending) {
        out << "judgments written; meaning flags pending\n";
        return kOk;
      }
    } else {
      if (o.in.empty()) throw Error(Errc::missing_argument, "give --in judgments.jsonl or --hyp/--ref/--decode");
      judgments = parse_rubric_jsonl(io::read_file(o.in));
    }
    const RubricSummary sum = aggregate_rubric(judgments);
    char buf[160];
    std::snprintf(buf, sizeof buf, "accurate\t%zu\t%.1f\nalmost-accurate\t%zu\t%.1f\ninaccurate\t%zu\t%.1f\n", sum.accurate,
                  sum.accurate_pct, sum.almost_accurate, sum.almost_accurate_pct, sum.inaccurate, sum.inaccurate_pct);
    out << buf;
  } else if (name == "emit-config") {
    const std::string text = emit_trainer_config(parse_trainer_profile(o.profile)).serialize();
    if (o.out.empty()) out << text;
    else io::write_file_atomic(o.out, text);
  } else if (name == "run") {
    run_manifest(o.manifest, o.force, s);
  }
  report(diag, err);
  return kOk;
}

void configure(CLI::App& app, Options& o) {
  auto* ingest = app.add_subcommand("ingest", "normalize one language file into a corpus store");
  ingest->add_option("--lang", o.lang, "language code")->required();
  ingest->add_option("--in", o.in, "id<TAB>text file")->required();
  ingest->add_option("--out", o.out, "store directory")->required();

  auto* align = app.add_subcommand("align", "keep verses present in every language");
  align->add_option("--in", o.in, "store directory")->required();
  align->add_option("--langs", o.langs, "comma-separated codes (default: all in store)");
  align->add_option("--out", o.out, "output directory")->required();

  auto* split = app.add_subcommand("split", "seeded train/val/test split");
  split->add_option("--corpus", o.corpus)->required();
  split->add_option("--langs", o.langs);
  split->add_option("--ratios", o.ratios, "train,val,test");
  split->add_option("--out", o.out)->required();
  add_seed(split, o);

  auto* stats = app.add_subcommand("stats", "per-language token statistics");
  stats->add_option("--corpus", o.corpus)->required();
  stats->add_option("--langs", o.langs);
  stats->add_option("--out", o.out, "TSV file (default stdout)");

  auto* label = app.add_subcommand("label", "labeled multi-way training pairs");
  label->add_option("--corpus", o.corpus)->required();
  label->add_option("--langs", o.langs);
  label->add_option("--split", o.split_file)->required();
  label->add_option("--mode", o.mode, "language | family");
  label->add_option("--part", o.part, "train | val | test");
  label->add_option("--out", o.out, "prefix for .src/.tgt/.meta")->required();

  auto* sched = app.add_subcommand("schedule", "family or sparse addition schedule");
  sched->add_option("--anchor", o.anchor)->required();
  sched->add_option("--mode", o.mode, "family | sparse");
  sched->add_option("--proximity", o.proximity, "family order, comma-separated");
  sched->add_option("--out", o.out);
  add_seed(sched, o);

  auto* learn = app.add_subcommand("bpe-learn", "learn BPE merges from tokenized text");
  learn->add_option("--in", o.inputs, "tokenized text files")->required();
  learn->add_option("--merges", o.merges, "number of merge operations")->required();
  learn->add_option("--side", o.side, "source | target");
  learn->add_option("--reserved", o.reserved, "file of extra reserved tokens");
  learn->add_option("--out", o.out)->required();

  auto* apply = app.add_subcommand("bpe-apply", "segment (or --revert) tokenized text");
  apply->add_option("--model", o.model);
  apply->add_option("--in", o.in)->required();
  apply->add_option("--out", o.out)->required();
  apply->add_flag("--revert", o.revert);

  auto* at = app.add_subcommand("align-train", "EM word alignment with a diagonal prior");
  at->add_option("--corpus", o.corpus);
  at->add_option("--src", o.src);
  at->add_option("--tgt", o.tgt);
  at->add_option("--source-text", o.src_file);
  at->add_option("--target-text", o.tgt_file);
  at->add_option("--iterations", o.iterations);
  at->add_option("--tension", o.tension);
  at->add_option("--null-prob", o.null_prob);
  at->add_option("--workers", o.workers);
  at->add_option("--out", o.out)->required();

  auto* lf = app.add_subcommand("lex-filter", "clean a raw seed name list");
  lf->add_option("--in", o.in)->required();
  lf->add_option("--stoplist", o.stoplist);
  lf->add_option("--out", o.out)->required();

  auto* lb = app.add_subcommand("lex-build", "project seeds into every corpus language");
  lb->add_option("--seeds", o.seeds)->required();
  lb->add_option("--corpus", o.corpus)->required();
  lb->add_option("--langs", o.langs);
  lb->add_option("--aligners", o.aligners, "directory of en-<lang>.tsv tables")->required();
  lb->add_option("--min-votes", o.min_votes);
  lb->add_option("--out", o.out)->required();

  auto* lt = app.add_subcommand("lex-trim", "trim a lexicon table");
  lt->add_option("--lexicon", o.lexicon)->required();
  lt->add_option("--policy", o.policy, "none | freq1 | manual");
  lt->add_option("--selection", o.selection);
  lt->add_option("--corpus", o.corpus, "recount English frequencies from this store");
  lt->add_option("--out", o.out)->required();

  auto* tag = app.add_subcommand("tag", "replace lexicon entities by $NE placeholders");
  tag->add_option("--lexicon", o.lexicon)->required();
  tag->add_option("--src", o.src)->required();
  tag->add_option("--tgt", o.tgt)->required();
  tag->add_option("--in", o.in)->required();
  tag->add_option("--out", o.out)->required();
  tag->add_option("--target-in", o.target_in);
  tag->add_option("--target-out", o.target_out);
  tag->add_option("--decode", o.decode, "sidecar path (default <out>.decode.jsonl)");

  auto* restore = app.add_subcommand("restore", "restore placeholders from a decode sidecar");
  restore->add_option("--in", o.in)->required();
  restore->add_option("--decode", o.decode)->required();
  restore->add_option("--out", o.out)->required();

  auto* sample = app.add_subcommand("sample", "low-resource ablation sample");
  sample->add_option("--in", o.in, "id<TAB>text file");
  sample->add_option("--corpus", o.corpus);
  sample->add_option("--lang", o.lang);
  sample->add_option("--split", o.split_file);
  sample->add_option("--part", o.part);
  sample->add_option("--fraction", o.fraction)->required();
  sample->add_option("--total", o.total, "N (default: all verses)");
  sample->add_option("--manifest", o.manifest_out, "ablation TSV to append to");
  sample->add_option("--out", o.out)->required();
  add_seed(sample, o);

  auto* gl = app.add_subcommand("gl-monitor", "read epoch<TAB>score from stdin, print stop decisions");
  gl->add_option("--alpha", o.alpha);

  auto* fit = app.add_subcommand("fit", "score vs log10(words) least squares");
  fit->add_option("--in", o.in, "words<TAB>score lines")->required();

  auto* bleu = app.add_subcommand("bleu", "corpus BLEU");
  bleu->add_option("--hyp", o.hyp)->required();
  bleu->add_option("--ref", o.ref)->required();
  bleu->add_option("--max-n", o.max_n);
  bleu->add_option("--tsv", o.tsv);

  auto* rubric = app.add_subcommand("rubric", "judge or aggregate the accuracy rubric");
  rubric->add_option("--in", o.in, "judgments JSONL to aggregate");
  rubric->add_option("--hyp", o.hyp);
  rubric->add_option("--ref", o.ref);
  rubric->add_option("--decode", o.decode);
  rubric->add_option("--meaning", o.meaning, "one flag per line: 1, 0 or blank");
  rubric->add_option("--out", o.out);

  auto* cfg = app.add_subcommand("emit-config", "trainer configuration");
  cfg->add_option("--profile", o.profile, "multilingual | single-pair");
  cfg->add_option("--out", o.out);

  auto* run = app.add_subcommand("run", "run a pipeline manifest");
  run->add_option("--manifest", o.manifest)->required();
  run->add_flag("--force", o.force, "ignore recorded state");
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::unknown_subcommand:
    case Errc::missing_argument:
      return kUsage;
    default:
      return kDataError;
  }
}

}  // namespace

unsigned long long default_seed() {
  const char* env = std::getenv("POLYMT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  return parse_unsigned(env, "POLYMT_SEED");
}

int dispatch(const std::vector<std::string>& args, const Streams& s) {
  std::ostream& err = *s.err;
  try {
    if (args.empty() || args.front().starts_with('-')) {
      if (!args.empty() && (args.front() == "--help" || args.front() == "-h")) {
        *s.out << "usage: polymt <subcommand> [options]\nsubcommands:";
        for (const std::string& c : kSubcommands) *s.out << ' ' << c;
        *s.out << '\n';
        return kOk;
      }
      throw Error(Errc::missing_argument, "no subcommand given");
    }
    if (std::find(kSubcommands.begin(), kSubcommands.end(), args.front()) == kSubcommands.end()) {
      throw Error(Errc::unknown_subcommand, "'" + args.front() + "'");
    }

    CLI::App app{"polymt: low-resource multilingual translation pipeline tools", "polymt"};
    app.require_subcommand(1);
    Options o;
    o.seed = default_seed();
    configure(app, o);

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("polymt");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& a : argv_store) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, *s.out, err);
    } catch (const CLI::RequiredError& e) {
      err << "error: MissingArgument: " << e.what() << '\n';
      return kUsage;
    } catch (const CLI::ParseError& e) {
      err << "error: usage: " << e.what() << '\n';
      return kUsage;
    }
    CLI::App* sub = app.get_subcommands().front();
    log_parameters(*sub, err);
    return run_subcommand(sub->get_name(), o, s);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int dispatch(const std::vector<std::string>& args) { return dispatch(args, {&std::cin, &std::cout, &std::cerr}); }

}  // namespace polymt::cli

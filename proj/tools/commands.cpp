#include "commands.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "xlmap/curve.hpp"
#include "xlmap/dict_build.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/error.hpp"
#include "xlmap/eval.hpp"
#include "xlmap/sent_embed.hpp"
#include "xlmap/synth.hpp"
#include "xlmap/word_align.hpp"
#include "xlmap/xmap.hpp"

namespace xlmap::cli {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  return in;
}

// Writes through a string buffer so a failing command never leaves a partial file.
void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ostringstream buffer;
  body(buffer);
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << buffer.str();
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

void write_or_print(const std::string& path, std::ostream& out,
                    const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-")
    body(out);
  else
    write_file(path, body);
}

EmbeddingTable read_vectors(const std::string& path, const std::string& space) {
  auto in = open_in(path);
  return load_word_vectors(in, space);
}

TokenEmbeddingCorpus read_tokens(const std::string& path, const std::string& space = {}) {
  auto in = open_in(path);
  return load_token_embeddings(in, space);
}

std::vector<Sentence> read_sentences(const std::string& path) {
  auto in = open_in(path);
  return load_sentences(in);
}

ParallelCorpus read_parallel(const std::string& src, const std::string& tgt) {
  auto s = open_in(src);
  auto t = open_in(tgt);
  return load_parallel(s, t);
}

OrthogonalMap read_map(const std::string& path) {
  auto in = open_in(path);
  return load_map(in);
}

WordPairList read_pairs(const std::string& path) {
  auto in = open_in(path);
  return load_static_pairs(in);
}

// SIF weights from a frequency file, or counted from `fallback` text.
SifWeights weights_for(const std::string& freq_path, std::span<const Sentence> fallback, double a) {
  if (!freq_path.empty()) {
    auto in = open_in(freq_path);
    return sif_weights(load_frequencies(in), a);
  }
  return sif_weights(count_frequencies(fallback), a);
}

// Options shared by several subcommands.
struct Options {
  // inputs
  std::string src_text, tgt_text;
  std::string src_vectors, tgt_vectors;
  std::string src_tokens, tgt_tokens;
  std::string src_embs, tgt_embs;
  std::string src_freqs, tgt_freqs;
  std::string pairs, ttable, links, dict, map, src_map, tgt_map, gold;
  std::string vectors, tokens, embs, text, freqs;
  // curve inputs
  std::string train_src, train_tgt, test_src, test_tgt;
  std::string src_train_tokens, tgt_train_tokens, src_test_tokens, tgt_test_tokens;
  // settings
  std::size_t iterations = 5;
  bool diagonal = false;
  double tension = kDefaultDiagonalTension;
  std::string kind;
  std::size_t cap = kDefaultContextualCap;
  std::string weighting = "sif";
  double sif_a = kDefaultSifA;
  bool remove_pc = false;
  std::string normalize = "auto";
  std::string level;
  std::string src_space = "src", tgt_space = "tgt";
  std::string metric;
  std::vector<std::size_t> ks{1, 5};
  std::vector<std::string> systems;
  std::vector<std::size_t> sizes;
  // outputs
  std::string out_dir = ".";
  std::string out, out_links, out_ttable, audit;
  // synthetic world
  SynthOptions synth;
  std::uint64_t seed = 1;
  int threads = 0;
};

Ibm1Options aligner_options(const Options& o) {
  Ibm1Options opt;
  opt.iterations = o.iterations;
  opt.diagonal_tension = o.diagonal ? o.tension : 0.0;
  return opt;
}

void add_aligner_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--iterations", o.iterations, "EM iterations")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_flag("--diagonal", o.diagonal, "Enable the diagonal alignment prior");
  cmd->add_option("--tension", o.tension, "Diagonal prior strength when enabled")->capture_default_str()->check(CLI::NonNegativeNumber);
}

const std::vector<std::string> kWeightings{"sif", "mean"};

// ---------------------------------------------------------------- subcommands

int cmd_align(const Options& o, std::ostream& err) {
  const ParallelCorpus corpus = read_parallel(o.src_text, o.tgt_text);
  const TranslationTable table = train_ibm1(corpus, aligner_options(o));
  const auto links = align_corpus(table, corpus);
  const std::string links_path = o.out_links.empty() ? (fs::path(o.out_dir) / "alignment.pharaoh").string() : o.out_links;
  const std::string table_path = o.out_ttable.empty() ? (fs::path(o.out_dir) / "ttable.tsv").string() : o.out_ttable;
  write_file(links_path, [&](std::ostream& out) { write_pharaoh(out, links, corpus.size()); });
  write_file(table_path, [&](std::ostream& out) { write_translation_table(out, table); });
  err << "align: pairs=" << corpus.size() << " dropped=" << corpus.dropped_pairs << " links=" << links.size()
      << " loglik=" << format_double(table.log_likelihood_trace().back()) << '\n';
  return kSuccess;
}

// Aligns two batch embedding sets on the sentences both kept.
struct PairedBatches {
  DenseMatrix x;
  DenseMatrix y;
  std::vector<std::string> labels;
  std::size_t unpaired = 0;
};

PairedBatches pair_batches(const BatchEmbeddings& s, const BatchEmbeddings& t) {
  if (s.corpus_size() != t.corpus_size())
    throw Error(ErrorCode::LineCountMismatch, "source and target sentence counts differ");
  std::map<std::size_t, std::size_t> tcol;
  for (std::size_t c = 0; c < t.kept.size(); ++c) tcol[t.kept[c]] = c;
  std::vector<std::pair<std::size_t, std::size_t>> cols;
  PairedBatches p;
  for (std::size_t c = 0; c < s.kept.size(); ++c)
    if (auto it = tcol.find(s.kept[c]); it != tcol.end()) {
      cols.emplace_back(c, it->second);
      p.labels.push_back(std::to_string(s.kept[c]));
    }
  p.x = DenseMatrix(s.embeddings.rows(), cols.size());
  p.y = DenseMatrix(t.embeddings.rows(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::ranges::copy(s.embeddings.col(cols[c].first), p.x.col(c).begin());
    std::ranges::copy(t.embeddings.col(cols[c].second), p.y.col(c).begin());
  }
  p.unpaired = s.corpus_size() - cols.size();
  return p;
}

BatchEmbeddings read_batch(const std::string& path) {
  auto in = open_in(path);
  return load_sentence_embeddings(in);
}

MappingDictionary sentence_dictionary(const Options& o) {
  BatchEmbeddings s;
  BatchEmbeddings t;
  if (!o.src_embs.empty() || !o.tgt_embs.empty()) {
    s = read_batch(o.src_embs);
    t = read_batch(o.tgt_embs);
  } else if (!o.src_tokens.empty()) {
    s = embed_corpus(read_tokens(o.src_tokens));
    t = embed_corpus(read_tokens(o.tgt_tokens));
  } else {
    if (o.src_text.empty() || o.src_vectors.empty())
      throw Error(ErrorCode::InvalidParameter, "sentence dictionary needs embeddings, token dumps, or text plus vectors");
    const ParallelCorpus corpus = read_parallel(o.src_text, o.tgt_text);
    const auto sv = read_vectors(o.src_vectors, o.src_space);
    const auto tv = read_vectors(o.tgt_vectors, o.tgt_space);
    std::optional<SifWeights> sw;
    std::optional<SifWeights> tw;
    if (o.weighting == "sif") {
      sw = weights_for(o.src_freqs, corpus.source, o.sif_a);
      tw = weights_for(o.tgt_freqs, corpus.target, o.sif_a);
    }
    s = embed_corpus(corpus.source, sv, sw ? &*sw : nullptr);
    t = embed_corpus(corpus.target, tv, tw ? &*tw : nullptr);
  }
  auto p = pair_batches(s, t);
  auto dict = build_sentence_dictionary(p.x, p.y);
  dict.labels = std::move(p.labels);
  dict.skipped = p.unpaired;
  return dict;
}

int cmd_build_dict(const Options& o, std::ostream& err) {
  MappingDictionary dict;
  const DictProvenance kind = parse_provenance(o.kind);
  switch (kind) {
    case DictProvenance::StaticDict:
    case DictProvenance::ProbDict: {
      WordPairList pairs;
      if (kind == DictProvenance::StaticDict) {
        pairs = read_pairs(o.pairs);
      } else {
        auto in = open_in(o.ttable);
        pairs = extract_prob_pairs(read_translation_table(in));
      }
      dict = pairs_to_dictionary(pairs, read_vectors(o.src_vectors, o.src_space),
                                 read_vectors(o.tgt_vectors, o.tgt_space), kind);
      break;
    }
    case DictProvenance::Contextual: {
      auto in = open_in(o.links);
      dict = build_contextual_dictionary(read_tokens(o.src_tokens), read_tokens(o.tgt_tokens), read_pharaoh(in), o.cap);
      break;
    }
    case DictProvenance::Sentence:
      dict = sentence_dictionary(o);
      break;
  }
  write_file(o.out, [&](std::ostream& out) { save_dictionary(out, dict); });
  if (!o.audit.empty()) write_file(o.audit, [&](std::ostream& out) { write_dictionary_audit(out, dict); });
  err << "build-dict: kind=" << to_string(dict.provenance) << " pairs=" << dict.size() << " skipped=" << dict.skipped
      << '\n';
  return kSuccess;
}

int cmd_learn_map(const Options& o, std::ostream& err) {
  auto in = open_in(o.dict);
  const MappingDictionary dict = load_dictionary(in);
  const MapLevel level = o.level.empty() ? level_for(dict.provenance) : parse_map_level(o.level);
  MappingPolicy policy = default_policy(level);
  if (o.normalize != "auto") policy.normalize_dictionary = o.normalize == "on";
  const OrthogonalMap map = learn_mapping(dict, policy, o.src_space, o.tgt_space);
  write_file(o.out, [&](std::ostream& out) { save_map(out, map); });
  err << "learn-map: level=" << to_string(level) << " n=" << dict.size() << " d=" << dict.dim()
      << " normalized=" << (policy.normalize_dictionary ? "yes" : "no") << '\n';
  return kSuccess;
}

int cmd_apply_map(const Options& o, std::ostream& err) {
  const OrthogonalMap map = read_map(o.map);
  if (!o.vectors.empty()) {
    const auto mapped = map_words(map, read_vectors(o.vectors, map.source_space()));
    write_file(o.out, [&](std::ostream& out) { save_word_vectors(out, mapped); });
    err << "apply-map: words=" << mapped.size() << '\n';
  } else if (!o.tokens.empty()) {
    const auto mapped = map_token_corpus(map, read_tokens(o.tokens, map.source_space()));
    write_file(o.out, [&](std::ostream& out) { save_token_embeddings(out, mapped); });
    err << "apply-map: sentences=" << mapped.sentences.size() << '\n';
  } else if (!o.embs.empty()) {
    BatchEmbeddings batch = read_batch(o.embs);
    batch.embeddings = apply_map(map, batch.embeddings);
    write_file(o.out, [&](std::ostream& out) { save_sentence_embeddings(out, batch); });
    err << "apply-map: sentences=" << batch.kept.size() << '\n';
  } else {
    throw Error(ErrorCode::InvalidParameter, "apply-map needs --vectors, --tokens or --embs");
  }
  return kSuccess;
}

int cmd_embed_sents(const Options& o, std::ostream& err) {
  BatchEmbeddings batch;
  if (!o.tokens.empty()) {
    batch = embed_corpus(read_tokens(o.tokens));
  } else {
    if (o.text.empty() || o.vectors.empty())
      throw Error(ErrorCode::InvalidParameter, "embed-sents needs --tokens, or --text with --vectors");
    const auto sentences = read_sentences(o.text);
    const auto table = read_vectors(o.vectors, o.src_space);
    std::optional<SifWeights> weights;
    if (o.weighting == "sif") weights = weights_for(o.freqs, sentences, o.sif_a);
    batch = embed_corpus(sentences, table, weights ? &*weights : nullptr);
  }
  if (o.remove_pc) remove_common_component(batch.embeddings);
  write_file(o.out, [&](std::ostream& out) { save_sentence_embeddings(out, batch); });
  err << "embed-sents: embedded=" << batch.kept.size() << " dropped=" << batch.dropped.size() << '\n';
  return kSuccess;
}

// Optional map pair for evaluation; both maps must share a pivot.
struct EvalMaps {
  std::optional<OrthogonalMap> src;
  std::optional<OrthogonalMap> tgt;
};

EvalMaps eval_maps(const Options& o) {
  EvalMaps m;
  if (!o.src_map.empty()) m.src = read_map(o.src_map);
  if (!o.tgt_map.empty()) m.tgt = read_map(o.tgt_map);
  if (m.src && m.tgt) to_pivot_pair(*m.src, *m.tgt);
  return m;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const EvalMaps maps = eval_maps(o);
  if (o.metric == "retrieval") {
    auto p = pair_batches(read_batch(o.src_embs), read_batch(o.tgt_embs));
    DenseMatrix& x = p.x;
    DenseMatrix& y = p.y;
    if (maps.src) x = apply_map(*maps.src, x);
    if (maps.tgt) y = apply_map(*maps.tgt, y);
    const auto report = retrieval_accuracy(x, y, p.unpaired, o.src_space, o.tgt_space);
    write_or_print(o.out, out, [&](std::ostream& os) {
      os << "source\ttarget\tn\tcorrect\taccuracy\tdropped\tzero_vectors\n";
      os << report.source_space << '\t' << report.target_space << '\t' << report.n << '\t' << report.correct << '\t'
         << format_double(report.accuracy) << '\t' << report.dropped << '\t' << report.zero_vectors.size() << '\n';
    });
    err << "eval: retrieval accuracy=" << format_double(report.accuracy) << " n=" << report.n << '\n';
    return kSuccess;
  }

  EmbeddingTable src = read_vectors(o.src_vectors, o.src_space);
  EmbeddingTable tgt = read_vectors(o.tgt_vectors, o.tgt_space);
  if (maps.src) src = map_words(*maps.src, src);
  if (maps.tgt) tgt = map_words(*maps.tgt, tgt);
  if (o.metric == "wordtrans") {
    const WordPairList gold = read_pairs(o.gold);
    std::vector<PrecisionReport> reports;
    for (std::size_t k : o.ks) reports.push_back(word_translation_precision(src, tgt, gold, k));
    write_or_print(o.out, out, [&](std::ostream& os) {
      os << "k\tprecision\tcorrect\tevaluated\tskipped_oov\n";
      for (const auto& r : reports)
        os << r.k << '\t' << format_double(r.precision) << '\t' << r.correct << '\t' << r.evaluated << '\t'
           << r.skipped_oov << '\n';
    });
    return kSuccess;
  }
  // similarity
  auto gi = open_in(o.gold);
  const auto gold = load_similarity_gold(gi);
  const auto r = similarity_correlation(gold, src, tgt);
  write_or_print(o.out, out, [&](std::ostream& os) {
    os << "n\tpearson\tspearman\tharmonic_mean\tskipped_oov\n";
    os << r.n << '\t' << format_double(r.pearson) << '\t' << format_double(r.spearman) << '\t'
       << (r.harmonic_mean ? format_double(*r.harmonic_mean) : std::string("NA")) << '\t' << r.skipped_oov << '\n';
  });
  return kSuccess;
}

int cmd_curve(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<SystemConfig> systems;
  for (const auto& name : o.systems) {
    SystemConfig sys;
    sys.name = name;
    sys.kind = parse_system_kind(name);
    sys.sif = o.weighting == "sif";
    systems.push_back(sys);
  }
  const bool need_static = std::ranges::any_of(systems, [](const auto& s) {
    return s.kind == SystemKind::StaticDict || s.kind == SystemKind::StaticWord || s.kind == SystemKind::StaticSentence;
  });
  const bool need_ctx = std::ranges::any_of(systems, [](const auto& s) {
    return s.kind == SystemKind::ContextualWord || s.kind == SystemKind::ContextualSentence;
  });

  std::optional<ParallelCorpus> train, test;
  std::optional<EmbeddingTable> sv, tv;
  std::optional<SifWeights> sw, tw;
  std::optional<WordPairList> pairs;
  std::optional<TokenEmbeddingCorpus> s_train, t_train, s_test, t_test;
  CurveData data;
  data.source_space = o.src_space;
  data.target_space = o.tgt_space;
  if (need_static) {
    test = read_parallel(o.test_src, o.test_tgt);
    sv = read_vectors(o.src_vectors, o.src_space);
    tv = read_vectors(o.tgt_vectors, o.tgt_space);
    data.test_text = &*test;
    data.src_vectors = &*sv;
    data.tgt_vectors = &*tv;
    if (!o.train_src.empty()) {
      train = read_parallel(o.train_src, o.train_tgt);
      data.train_text = &*train;
    }
    if (o.weighting == "sif") {
      if (!train && (o.src_freqs.empty() || o.tgt_freqs.empty()))
        throw Error(ErrorCode::InvalidParameter, "SIF weighting needs frequency files or a training corpus");
      sw = weights_for(o.src_freqs, train ? std::span<const Sentence>(train->source) : std::span<const Sentence>{}, o.sif_a);
      tw = weights_for(o.tgt_freqs, train ? std::span<const Sentence>(train->target) : std::span<const Sentence>{}, o.sif_a);
      data.src_weights = &*sw;
      data.tgt_weights = &*tw;
    }
    if (!o.pairs.empty()) {
      pairs = read_pairs(o.pairs);
      data.static_pairs = &*pairs;
    }
  }
  if (need_ctx) {
    s_train = read_tokens(o.src_train_tokens, o.src_space);
    t_train = read_tokens(o.tgt_train_tokens, o.tgt_space);
    s_test = read_tokens(o.src_test_tokens, o.src_space);
    t_test = read_tokens(o.tgt_test_tokens, o.tgt_space);
    data.src_train_ctx = &*s_train;
    data.tgt_train_ctx = &*t_train;
    data.src_test_ctx = &*s_test;
    data.tgt_test_ctx = &*t_test;
  }

  std::vector<std::size_t> sizes = o.sizes;
  if (sizes.empty()) {
    std::size_t n = 0;
    if (train) n = train->size();
    if (s_train) n = n == 0 ? s_train->sentences.size() : std::min(n, s_train->sentences.size());
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "curve needs a training corpus or explicit --sizes");
    sizes = default_split_sizes(n);
  }
  CurveOptions options;
  options.aligner = aligner_options(o);
  options.contextual_cap = o.cap;
  const auto rows = learning_curve(data, systems, sizes, options);
  write_or_print(o.out, out, [&](std::ostream& os) { write_curve(os, systems, rows); });
  err << "curve: systems=" << systems.size() << " splits=" << rows.size() << '\n';
  return kSuccess;
}

int cmd_synth(const Options& o, std::ostream& err) {
  SynthOptions opt = o.synth;
  opt.seed = o.seed;
  const SyntheticWorld w = make_synthetic_world(opt);
  const fs::path dir(o.out_dir);
  auto path = [&](const char* name) { return (dir / name).string(); };
  auto write_text = [&](const char* name, const std::vector<Sentence>& sentences) {
    write_file(path(name), [&](std::ostream& out) {
      for (const auto& s : sentences) {
        for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
        out << '\n';
      }
    });
  };
  write_file(path("src.vec"), [&](std::ostream& out) { save_word_vectors(out, w.src_vectors); });
  write_file(path("tgt.vec"), [&](std::ostream& out) { save_word_vectors(out, w.tgt_vectors); });
  write_text("train.src", w.train.source);
  write_text("train.tgt", w.train.target);
  write_text("test.src", w.test.source);
  write_text("test.tgt", w.test.target);
  write_file(path("train.src.ctx"), [&](std::ostream& out) { save_token_embeddings(out, w.src_train_ctx); });
  write_file(path("train.tgt.ctx"), [&](std::ostream& out) { save_token_embeddings(out, w.tgt_train_ctx); });
  write_file(path("test.src.ctx"), [&](std::ostream& out) { save_token_embeddings(out, w.src_test_ctx); });
  write_file(path("test.tgt.ctx"), [&](std::ostream& out) { save_token_embeddings(out, w.tgt_test_ctx); });
  write_file(path("lexicon.txt"), [&](std::ostream& out) {
    for (const auto& [s, t] : w.lexicon.pairs()) out << s << ' ' << t << '\n';
  });
  write_file(path("src.freq"), [&](std::ostream& out) { save_frequencies(out, count_frequencies(w.train.source)); });
  write_file(path("tgt.freq"), [&](std::ostream& out) { save_frequencies(out, count_frequencies(w.train.target)); });
  write_file(path("rotation.map"), [&](std::ostream& out) {
    save_map(out, OrthogonalMap(w.rotation, MapInfo{"src", "tgt", MapLevel::Word}));
  });
  err << "synth: dim=" << opt.dim << " vocab=" << opt.vocab << " train=" << opt.train_sentences
      << " test=" << opt.test_sentences << " noise=" << format_double(opt.noise) << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"xlmap: orthogonal cross-lingual embedding mappings at word, contextual and sentence level"};
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();

  auto* align = app.add_subcommand("align", "Train IBM Model 1 and write Pharaoh links plus a translation table");
  align->add_option("--src", o.src_text, "Source-language text, one sentence per line")->required()->check(CLI::ExistingFile);
  align->add_option("--tgt", o.tgt_text, "Target-language text, line-aligned")->required()->check(CLI::ExistingFile);
  add_aligner_flags(align, o);
  align->add_option("--out-dir", o.out_dir, "Directory for default output names")->capture_default_str();
  align->add_option("--out-links", o.out_links, "Pharaoh output (default <out-dir>/alignment.pharaoh)");
  align->add_option("--out-ttable", o.out_ttable, "Translation table TSV (default <out-dir>/ttable.tsv)");

  auto* build = app.add_subcommand("build-dict", "Build a mapping dictionary");
  build->add_option("--kind", o.kind, "Dictionary kind")->required()->check(CLI::IsMember({"static", "prob", "contextual", "sentence"}));
  build->add_option("--pairs", o.pairs, "Static dictionary: 'source target' per line")->check(CLI::ExistingFile);
  build->add_option("--ttable", o.ttable, "Translation table TSV from align")->check(CLI::ExistingFile);
  build->add_option("--links", o.links, "Pharaoh alignment file")->check(CLI::ExistingFile);
  build->add_option("--src-vectors", o.src_vectors, "Source word vectors")->check(CLI::ExistingFile);
  build->add_option("--tgt-vectors", o.tgt_vectors, "Target word vectors")->check(CLI::ExistingFile);
  build->add_option("--src-tokens", o.src_tokens, "Source contextual token dump")->check(CLI::ExistingFile);
  build->add_option("--tgt-tokens", o.tgt_tokens, "Target contextual token dump")->check(CLI::ExistingFile);
  build->add_option("--src-embs", o.src_embs, "Source sentence embeddings")->check(CLI::ExistingFile);
  build->add_option("--tgt-embs", o.tgt_embs, "Target sentence embeddings")->check(CLI::ExistingFile);
  build->add_option("--src-text", o.src_text, "Source text (sentence kind)")->check(CLI::ExistingFile);
  build->add_option("--tgt-text", o.tgt_text, "Target text (sentence kind)")->check(CLI::ExistingFile);
  build->add_option("--src-freqs", o.src_freqs, "Source frequency TSV for SIF")->check(CLI::ExistingFile);
  build->add_option("--tgt-freqs", o.tgt_freqs, "Target frequency TSV for SIF")->check(CLI::ExistingFile);
  build->add_option("--weighting", o.weighting, "Static averaging")->capture_default_str()->check(CLI::IsMember(kWeightings));
  build->add_option("--sif-a", o.sif_a, "SIF smoothing parameter")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--cap", o.cap, "Maximum contextual pairs")->capture_default_str();
  build->add_option("--out", o.out, "Dictionary output")->required();
  build->add_option("--audit", o.audit, "Audit TSV of retained pairs");

  auto* learn = app.add_subcommand("learn-map", "Learn an orthogonal map from a dictionary");
  learn->add_option("--dict", o.dict, "Dictionary from build-dict")->required()->check(CLI::ExistingFile);
  learn->add_option("--normalize", o.normalize, "Unit-normalize dictionary columns")->capture_default_str()->check(CLI::IsMember({"auto", "on", "off"}));
  learn->add_option("--level", o.level, "Override the mapping level")->check(CLI::IsMember({"word", "sentence", "contextual"}));
  learn->add_option("--src-space", o.src_space, "Source space id")->capture_default_str();
  learn->add_option("--tgt-space", o.tgt_space, "Target space id")->capture_default_str();
  learn->add_option("--out", o.out, "Map output")->required();

  auto* apply = app.add_subcommand("apply-map", "Apply a map to word vectors, token dumps or sentence embeddings");
  apply->add_option("--map", o.map, "Map file")->required()->check(CLI::ExistingFile);
  apply->add_option("--vectors", o.vectors, "Word vector file")->check(CLI::ExistingFile);
  apply->add_option("--tokens", o.tokens, "Token embedding dump")->check(CLI::ExistingFile);
  apply->add_option("--embs", o.embs, "Sentence embedding dump")->check(CLI::ExistingFile);
  apply->add_option("--out", o.out, "Output")->required();

  auto* embed = app.add_subcommand("embed-sents", "Average word or token vectors into sentence embeddings");
  embed->add_option("--text", o.text, "Tokenized text")->check(CLI::ExistingFile);
  embed->add_option("--vectors", o.vectors, "Word vectors")->check(CLI::ExistingFile);
  embed->add_option("--tokens", o.tokens, "Contextual token dump (arithmetic mean)")->check(CLI::ExistingFile);
  embed->add_option("--freqs", o.freqs, "Frequency TSV for SIF (default: counted from --text)")->check(CLI::ExistingFile);
  embed->add_option("--weighting", o.weighting, "Static averaging")->capture_default_str()->check(CLI::IsMember(kWeightings));
  embed->add_option("--sif-a", o.sif_a, "SIF smoothing parameter")->capture_default_str()->check(CLI::PositiveNumber);
  embed->add_flag("--remove-pc", o.remove_pc, "Remove the first common component (not for mapping)");
  embed->add_option("--out", o.out, "Sentence embedding output")->required();

  auto* eval = app.add_subcommand("eval", "Score retrieval, word translation or word similarity");
  eval->add_option("--metric", o.metric, "Metric")->required()->check(CLI::IsMember({"retrieval", "wordtrans", "similarity"}));
  eval->add_option("--src-embs", o.src_embs, "Source sentence embeddings")->check(CLI::ExistingFile);
  eval->add_option("--tgt-embs", o.tgt_embs, "Target sentence embeddings")->check(CLI::ExistingFile);
  eval->add_option("--src-vectors", o.src_vectors, "Source word vectors")->check(CLI::ExistingFile);
  eval->add_option("--tgt-vectors", o.tgt_vectors, "Target word vectors")->check(CLI::ExistingFile);
  eval->add_option("--src-map", o.src_map, "Map applied to the source side")->check(CLI::ExistingFile);
  eval->add_option("--tgt-map", o.tgt_map, "Map applied to the target side (pivot retrieval)")->check(CLI::ExistingFile);
  eval->add_option("--gold", o.gold, "Gold dictionary or similarity TSV")->check(CLI::ExistingFile);
  eval->add_option("--k", o.ks, "Neighbourhood sizes for wordtrans")->capture_default_str()->delimiter(',');
  eval->add_option("--src-space", o.src_space, "Source space id")->capture_default_str();
  eval->add_option("--tgt-space", o.tgt_space, "Target space id")->capture_default_str();
  eval->add_option("--out", o.out, "Report TSV (default stdout)");

  auto* curve = app.add_subcommand("curve", "Doubling learning curve of sentence retrieval accuracy");
  curve->add_option("--systems", o.systems, "Systems to compare")->required()->delimiter(',')
      ->check(CLI::IsMember({"static-dict", "static-word", "static-sent", "ctx-word", "ctx-sent"}));
  curve->add_option("--sizes", o.sizes, "Split sizes (default 100, 200, 400, ... corpus size)")->delimiter(',');
  curve->add_option("--train-src", o.train_src, "Training source text")->check(CLI::ExistingFile);
  curve->add_option("--train-tgt", o.train_tgt, "Training target text")->check(CLI::ExistingFile);
  curve->add_option("--test-src", o.test_src, "Test source text")->check(CLI::ExistingFile);
  curve->add_option("--test-tgt", o.test_tgt, "Test target text")->check(CLI::ExistingFile);
  curve->add_option("--src-vectors", o.src_vectors, "Source word vectors")->check(CLI::ExistingFile);
  curve->add_option("--tgt-vectors", o.tgt_vectors, "Target word vectors")->check(CLI::ExistingFile);
  curve->add_option("--src-freqs", o.src_freqs, "Source frequency TSV")->check(CLI::ExistingFile);
  curve->add_option("--tgt-freqs", o.tgt_freqs, "Target frequency TSV")->check(CLI::ExistingFile);
  curve->add_option("--pairs", o.pairs, "Static seed dictionary")->check(CLI::ExistingFile);
  curve->add_option("--src-train-tokens", o.src_train_tokens, "Source contextual training dump")->check(CLI::ExistingFile);
  curve->add_option("--tgt-train-tokens", o.tgt_train_tokens, "Target contextual training dump")->check(CLI::ExistingFile);
  curve->add_option("--src-test-tokens", o.src_test_tokens, "Source contextual test dump")->check(CLI::ExistingFile);
  curve->add_option("--tgt-test-tokens", o.tgt_test_tokens, "Target contextual test dump")->check(CLI::ExistingFile);
  curve->add_option("--weighting", o.weighting, "Static averaging")->capture_default_str()->check(CLI::IsMember(kWeightings));
  curve->add_option("--sif-a", o.sif_a, "SIF smoothing parameter")->capture_default_str()->check(CLI::PositiveNumber);
  curve->add_option("--cap", o.cap, "Maximum contextual pairs")->capture_default_str();
  curve->add_option("--src-space", o.src_space, "Source space id")->capture_default_str();
  curve->add_option("--tgt-space", o.tgt_space, "Target space id")->capture_default_str();
  add_aligner_flags(curve, o);
  curve->add_option("--out", o.out, "Curve TSV (default stdout)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic two-language world with a known rotation");
  synth->add_option("--out-dir", o.out_dir, "Output directory")->required();
  synth->add_option("--dim", o.synth.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--vocab", o.synth.vocab, "Vocabulary size")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--train", o.synth.train_sentences, "Training sentences")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--test", o.synth.test_sentences, "Test sentences")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--min-len", o.synth.min_length, "Minimum sentence length")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--max-len", o.synth.max_length, "Maximum sentence length")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.synth.noise, "Per-coordinate Gaussian noise")->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--zipf", o.synth.zipf, "Zipf exponent of word frequencies")->capture_default_str()->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  if (o.threads > 0) omp_set_num_threads(o.threads);
  try {
    if (align->parsed()) return cmd_align(o, err);
    if (build->parsed()) return cmd_build_dict(o, err);
    if (learn->parsed()) return cmd_learn_map(o, err);
    if (apply->parsed()) return cmd_apply_map(o, err);
    if (embed->parsed()) return cmd_embed_sents(o, err);
    if (eval->parsed()) return cmd_eval(o, out, err);
    if (curve->parsed()) return cmd_curve(o, out, err);
    if (synth->parsed()) return cmd_synth(o, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (error_category(e.code())) {
      case ErrorCategory::Usage: return kUsageError;
      case ErrorCategory::DataFormat: return kDataError;
      case ErrorCategory::Numeric: return kNumericError;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: Io: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace xlmap::cli

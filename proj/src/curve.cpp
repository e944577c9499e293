#include "xlmap/curve.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "xlmap/error.hpp"
#include "xlmap/xmap.hpp"

namespace xlmap {

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::StaticDict: return "static-dict";
    case SystemKind::StaticWord: return "static-word";
    case SystemKind::StaticSentence: return "static-sent";
    case SystemKind::ContextualWord: return "ctx-word";
    case SystemKind::ContextualSentence: return "ctx-sent";
  }
  return "static-word";
}

SystemKind parse_system_kind(const std::string& text) {
  for (auto kind : {SystemKind::StaticDict, SystemKind::StaticWord, SystemKind::StaticSentence,
                    SystemKind::ContextualWord, SystemKind::ContextualSentence})
    if (text == to_string(kind)) return kind;
  throw Error(ErrorCode::InvalidParameter, "unknown system '" + text + "'");
}

std::vector<std::size_t> default_split_sizes(std::size_t corpus_size, std::size_t first) {
  std::vector<std::size_t> sizes;
  for (std::size_t s = first; s < corpus_size; s *= 2) sizes.push_back(s);
  if (corpus_size > 0) sizes.push_back(corpus_size);
  return sizes;
}

namespace {

bool is_contextual(SystemKind kind) {
  return kind == SystemKind::ContextualWord || kind == SystemKind::ContextualSentence;
}

template <typename T>
const T& require(const T* p, const char* what) {
  if (p == nullptr) throw Error(ErrorCode::InvalidParameter, std::string("curve needs ") + what);
  return *p;
}

// Sentence embeddings of both sides restricted to pairs embeddable on both.
struct PairedEmbeddings {
  DenseMatrix src;
  DenseMatrix tgt;
  std::vector<std::size_t> index;  // corpus index of each column
  std::size_t dropped = 0;

  // Columns whose corpus index is below n.
  std::pair<DenseMatrix, DenseMatrix> prefix(std::size_t n) const {
    const auto count = static_cast<std::size_t>(std::ranges::lower_bound(index, n) - index.begin());
    return {src.column_range(0, count), tgt.column_range(0, count)};
  }
};

PairedEmbeddings pair_up(const BatchEmbeddings& s, const BatchEmbeddings& t) {
  std::map<std::size_t, std::size_t> tcol;
  for (std::size_t c = 0; c < t.kept.size(); ++c) tcol[t.kept[c]] = c;
  std::vector<std::pair<std::size_t, std::size_t>> cols;
  std::vector<std::size_t> index;
  for (std::size_t c = 0; c < s.kept.size(); ++c) {
    const auto it = tcol.find(s.kept[c]);
    if (it == tcol.end()) continue;
    cols.emplace_back(c, it->second);
    index.push_back(s.kept[c]);
  }
  PairedEmbeddings out{DenseMatrix(s.embeddings.rows(), cols.size()),
                       DenseMatrix(t.embeddings.rows(), cols.size()), std::move(index),
                       std::max(s.corpus_size(), t.corpus_size()) - cols.size()};
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::ranges::copy(s.embeddings.col(cols[c].first), out.src.col(c).begin());
    std::ranges::copy(t.embeddings.col(cols[c].second), out.tgt.col(c).begin());
  }
  return out;
}

PairedEmbeddings static_embeddings(const ParallelCorpus& corpus, const CurveData& data, bool sif) {
  const auto& sv = require(data.src_vectors, "source word vectors");
  const auto& tv = require(data.tgt_vectors, "target word vectors");
  const SifWeights* sw = sif ? &require(data.src_weights, "source SIF weights") : nullptr;
  const SifWeights* tw = sif ? &require(data.tgt_weights, "target SIF weights") : nullptr;
  return pair_up(embed_corpus(corpus.source, sv, sw), embed_corpus(corpus.target, tv, tw));
}

PairedEmbeddings contextual_embeddings(const TokenEmbeddingCorpus& src, const TokenEmbeddingCorpus& tgt) {
  if (src.sentences.size() != tgt.sentences.size())
    throw Error(ErrorCode::LineCountMismatch, "contextual dumps differ in sentence count");
  return pair_up(embed_corpus(src), embed_corpus(tgt));
}

}  // namespace

std::vector<CurveRow> learning_curve(const CurveData& data, std::span<const SystemConfig> systems,
                                     std::span<const std::size_t> sizes, const CurveOptions& options) {
  if (systems.empty()) throw Error(ErrorCode::InvalidParameter, "no systems to evaluate");
  if (sizes.empty()) throw Error(ErrorCode::InvalidParameter, "no split sizes");
  for (std::size_t k = 1; k < sizes.size(); ++k)
    if (sizes[k] <= sizes[k - 1]) throw Error(ErrorCode::InvalidParameter, "split sizes must increase strictly");
  if (sizes.front() == 0) throw Error(ErrorCode::InvalidParameter, "split sizes must be positive");

  const bool any_ctx = std::ranges::any_of(systems, [](const auto& s) { return is_contextual(s.kind); });

  // Training text for alignment and the size limit.
  std::optional<ParallelCorpus> ctx_text;
  if (any_ctx)
    ctx_text = corpus_from_token_embeddings(require(data.src_train_ctx, "source contextual training dump"),
                                            require(data.tgt_train_ctx, "target contextual training dump"));
  const std::size_t max_size = sizes.back();
  const bool static_needs_corpus = std::ranges::any_of(
      systems, [](const auto& s) { return s.kind == SystemKind::StaticWord || s.kind == SystemKind::StaticSentence; });
  if (static_needs_corpus && max_size > require(data.train_text, "training parallel corpus").size())
    throw Error(ErrorCode::SizeExceedsCorpus, "split size exceeds the training corpus");
  if (any_ctx && max_size > ctx_text->size())
    throw Error(ErrorCode::SizeExceedsCorpus, "split size exceeds the contextual training corpus");

  // Test embeddings, computed once per representation.
  std::map<bool, PairedEmbeddings> static_test;
  std::map<bool, PairedEmbeddings> static_train;
  std::optional<PairedEmbeddings> ctx_test;
  std::optional<PairedEmbeddings> ctx_train;
  for (const auto& sys : systems) {
    if (!is_contextual(sys.kind)) {
      if (!static_test.contains(sys.sif))
        static_test.emplace(sys.sif, static_embeddings(require(data.test_text, "test parallel corpus"), data, sys.sif));
      if (sys.kind == SystemKind::StaticSentence && !static_train.contains(sys.sif))
        static_train.emplace(sys.sif, static_embeddings(*data.train_text, data, sys.sif));
    } else {
      if (!ctx_test)
        ctx_test = contextual_embeddings(require(data.src_test_ctx, "source contextual test dump"),
                                         require(data.tgt_test_ctx, "target contextual test dump"));
      if (sys.kind == SystemKind::ContextualSentence && !ctx_train)
        ctx_train = contextual_embeddings(*data.src_train_ctx, *data.tgt_train_ctx);
    }
  }

  std::optional<OrthogonalMap> static_dict_map;
  std::size_t static_dict_size = 0;

  std::vector<CurveRow> rows;
  for (const std::size_t n : sizes) {
    CurveRow row;
    row.split_size = n;
    std::optional<TranslationTable> text_table;
    std::optional<TranslationTable> ctx_table;

    for (const auto& sys : systems) {
      MapLevel level = MapLevel::Word;
      MappingDictionary dict;
      std::optional<OrthogonalMap> learned;
      switch (sys.kind) {
        case SystemKind::StaticDict:
          if (!static_dict_map) {
            dict = pairs_to_dictionary(require(data.static_pairs, "static dictionary"),
                                       require(data.src_vectors, "source word vectors"),
                                       require(data.tgt_vectors, "target word vectors"));
            MappingPolicy policy = default_policy(MapLevel::Word);
            if (sys.normalize) policy.normalize_dictionary = *sys.normalize;
            static_dict_map = learn_mapping(dict, policy, data.source_space, data.target_space);
            static_dict_size = dict.size();
          }
          learned = static_dict_map;
          break;
        case SystemKind::StaticWord: {
          if (!text_table) text_table = train_ibm1(data.train_text->prefix(n), options.aligner);
          dict = pairs_to_dictionary(extract_prob_pairs(*text_table), *data.src_vectors, *data.tgt_vectors,
                                     DictProvenance::ProbDict);
          break;
        }
        case SystemKind::StaticSentence: {
          const auto [x, y] = static_train.at(sys.sif).prefix(n);
          dict = build_sentence_dictionary(x, y);
          level = MapLevel::Sentence;
          break;
        }
        case SystemKind::ContextualWord: {
          const ParallelCorpus split = ctx_text->prefix(n);
          if (!ctx_table) ctx_table = train_ibm1(split, options.aligner);
          auto links = align_corpus(*ctx_table, split);
          for (auto& link : links) link.sentence = split.line_numbers[link.sentence];
          dict = build_contextual_dictionary(*data.src_train_ctx, *data.tgt_train_ctx, links,
                                             options.contextual_cap);
          level = MapLevel::Contextual;
          break;
        }
        case SystemKind::ContextualSentence: {
          const auto [x, y] = ctx_train->prefix(ctx_text->line_numbers[n - 1] + 1);
          dict = build_sentence_dictionary(x, y);
          level = MapLevel::Sentence;
          break;
        }
      }
      if (!learned) {
        MappingPolicy policy = default_policy(level);
        if (sys.normalize) policy.normalize_dictionary = *sys.normalize;
        learned = learn_mapping(dict, policy, data.source_space, data.target_space);
      }
      const PairedEmbeddings& test = is_contextual(sys.kind) ? *ctx_test : static_test.at(sys.sif);
      const auto report = retrieval_accuracy(apply_map(*learned, test.src), test.tgt, test.dropped,
                                             data.source_space, data.target_space, options.exec);
      row.accuracy.push_back(report.accuracy);
      row.dictionary_size.push_back(sys.kind == SystemKind::StaticDict ? static_dict_size : dict.size());
      row.maps.push_back(*learned);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_curve(std::ostream& out, std::span<const SystemConfig> systems, std::span<const CurveRow> rows) {
  out << "size";
  for (const auto& sys : systems) out << '\t' << sys.name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.split_size;
    for (double acc : row.accuracy) out << '\t' << format_double(acc);
    out << '\n';
  }
}

}  // namespace xlmap

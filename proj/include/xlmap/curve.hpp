#pragma once

// Doubling learning-curve harness: for nested prefixes of a parallel corpus,
// build each system's dictionary, learn its map and score sentence
// translation retrieval on a held-out test set.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xlmap/dict_build.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/eval.hpp"
#include "xlmap/linalg.hpp"
#include "xlmap/sent_embed.hpp"
#include "xlmap/word_align.hpp"

namespace xlmap {

enum class SystemKind {
  StaticDict,          // static seed dictionary, word-level map
  StaticWord,          // alignment-probability dictionary, word-level map
  StaticSentence,      // averaged static vectors, sentence-level map
  ContextualWord,      // aligned contextual token pairs
  ContextualSentence,  // averaged contextual vectors, sentence-level map
};

const char* to_string(SystemKind kind);
SystemKind parse_system_kind(const std::string& text);

struct SystemConfig {
  std::string name;
  SystemKind kind = SystemKind::StaticWord;
  /// Static systems: SIF-weighted averages instead of plain means.
  bool sif = true;
  /// Overrides the level's default dictionary normalization.
  std::optional<bool> normalize;
};

/// Non-owning views of everything a curve run may need. Only the resources
/// used by the requested systems must be set.
struct CurveData {
  const ParallelCorpus* train_text = nullptr;
  const ParallelCorpus* test_text = nullptr;
  const EmbeddingTable* src_vectors = nullptr;
  const EmbeddingTable* tgt_vectors = nullptr;
  const SifWeights* src_weights = nullptr;
  const SifWeights* tgt_weights = nullptr;
  const WordPairList* static_pairs = nullptr;
  const TokenEmbeddingCorpus* src_train_ctx = nullptr;
  const TokenEmbeddingCorpus* tgt_train_ctx = nullptr;
  const TokenEmbeddingCorpus* src_test_ctx = nullptr;
  const TokenEmbeddingCorpus* tgt_test_ctx = nullptr;
  std::string source_space = "src";
  std::string target_space = "tgt";
};

struct CurveOptions {
  Ibm1Options aligner;
  std::size_t contextual_cap = kDefaultContextualCap;
  kernels::Exec exec = kernels::Exec::Parallel;
};

struct CurveRow {
  std::size_t split_size = 0;
  /// One entry per system, in request order.
  std::vector<double> accuracy;
  std::vector<std::size_t> dictionary_size;
  std::vector<OrthogonalMap> maps;
};

/// 100, 200, 400, ... below `corpus_size`, then `corpus_size` itself.
std::vector<std::size_t> default_split_sizes(std::size_t corpus_size, std::size_t first = 100);

std::vector<CurveRow> learning_curve(const CurveData& data, std::span<const SystemConfig> systems,
                                     std::span<const std::size_t> sizes, const CurveOptions& options = {});

/// Header "size" plus one column per system; one row per split size.
void write_curve(std::ostream& out, std::span<const SystemConfig> systems, std::span<const CurveRow> rows);

}  // namespace xlmap

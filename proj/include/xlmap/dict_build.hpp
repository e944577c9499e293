#pragma once

// The four kinds of mapping dictionary: a static seed dictionary, word pairs
// read off alignment probabilities, aligned contextual token pairs, and
// aligned sentence embeddings.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "xlmap/embed_io.hpp"
#include "xlmap/linalg.hpp"
#include "xlmap/word_align.hpp"

namespace xlmap {

enum class DictProvenance { StaticDict, ProbDict, Contextual, Sentence };

const char* to_string(DictProvenance provenance);
DictProvenance parse_provenance(const std::string& text);

/// Ordered list of distinct (source, target) word pairs.
class WordPairList {
 public:
  /// Returns false (and keeps the list unchanged) for a repeated pair.
  bool add(std::string source, std::string target);

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  std::size_t duplicates_removed() const { return duplicates_; }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::unordered_set<std::string> seen_;
  std::size_t duplicates_ = 0;
};

/// Column i of x and column i of y form an aligned pair.
struct MappingDictionary {
  DenseMatrix x;
  DenseMatrix y;
  DictProvenance provenance = DictProvenance::StaticDict;
  /// One tab-separated audit row per column (without the index field).
  std::vector<std::string> labels;
  /// Input pairs not represented (OOV words, dropped sentences).
  std::size_t skipped = 0;

  std::size_t size() const { return x.cols(); }
  std::size_t dim() const { return x.rows(); }
};

/// Lines "source<WS>target"; blank lines are ignored, duplicates removed.
WordPairList load_static_pairs(std::istream& in);

/// For every source word, its most probable translation if that maximum is
/// unique. NULL is never a source here.
WordPairList extract_prob_pairs(const TranslationTable& table);

MappingDictionary pairs_to_dictionary(const WordPairList& pairs, const EmbeddingTable& src,
                                      const EmbeddingTable& tgt,
                                      DictProvenance provenance = DictProvenance::StaticDict);

inline constexpr std::size_t kDefaultContextualCap = 1'000'000;

/// Keeps links whose source and target positions each occur in exactly one
/// link of their sentence, in corpus order (sentence, then source position),
/// up to `cap` pairs.
MappingDictionary build_contextual_dictionary(const TokenEmbeddingCorpus& src,
                                              const TokenEmbeddingCorpus& tgt,
                                              const std::vector<AlignmentLink>& links,
                                              std::size_t cap = kDefaultContextualCap);

MappingDictionary build_sentence_dictionary(const DenseMatrix& src_embs, const DenseMatrix& tgt_embs);

/// Header "#dict <provenance> <dim> <n>", then per pair one line of 2·dim
/// numbers (source vector, then target vector).
void save_dictionary(std::ostream& out, const MappingDictionary& dict);
MappingDictionary load_dictionary(std::istream& in);

/// TSV of retained pair identifiers with a header row.
void write_dictionary_audit(std::ostream& out, const MappingDictionary& dict);

}  // namespace xlmap

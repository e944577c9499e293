#pragma once

// Sentence embeddings as (optionally SIF-weighted) averages of word vectors.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlmap/embed_io.hpp"
#include "xlmap/linalg.hpp"

namespace xlmap {

inline constexpr double kDefaultSifA = 1e-3;
inline constexpr std::string_view kSentenceToken = "⟨SENT⟩";

/// weight(w) = a / (a + p(w)), p(w) = count(w) / total. Unseen tokens get 1.
struct SifWeights {
  double a = kDefaultSifA;
  std::unordered_map<std::string, double> weights;
  double default_weight = 1.0;

  double weight(std::string_view token) const;
};

SifWeights sif_weights(const FrequencyTable& freqs, double a = kDefaultSifA);

struct SentenceEmbedding {
  std::vector<double> vector;
  std::size_t covered_tokens = 0;
  std::size_t total_tokens = 0;
};

/// Weighted mean (or plain mean when `weights` is null) of the in-vocabulary
/// token vectors. Throws AllTokensOOV when nothing is covered.
SentenceEmbedding embed_static(std::span<const std::string> sentence, const EmbeddingTable& table,
                               const SifWeights* weights = nullptr);

/// Arithmetic mean of the columns.
SentenceEmbedding embed_contextual(const DenseMatrix& token_vectors);

struct BatchEmbeddings {
  DenseMatrix embeddings;            // d × kept.size()
  std::vector<std::size_t> kept;     // corpus index of each column
  std::vector<std::size_t> dropped;  // corpus indices that could not be embedded
  std::size_t corpus_size() const { return kept.size() + dropped.size(); }
};

BatchEmbeddings embed_corpus(std::span<const Sentence> sentences, const EmbeddingTable& table,
                             const SifWeights* weights = nullptr);
BatchEmbeddings embed_corpus(const TokenEmbeddingCorpus& corpus);

/// Subtracts the projection on the first singular direction of the columns
/// (the common-component removal step of the original SIF recipe). Not
/// linear in the inputs, so it is kept out of every mapping path.
void remove_common_component(DenseMatrix& embeddings);

/// "#S"-block dump with one ⟨SENT⟩ token per embedded sentence; dropped
/// sentences become empty blocks so indices stay aligned with the corpus.
void save_sentence_embeddings(std::ostream& out, const BatchEmbeddings& batch);
BatchEmbeddings load_sentence_embeddings(std::istream& in);

}  // namespace xlmap

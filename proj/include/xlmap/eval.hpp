#pragma once

// Sentence translation retrieval, word translation precision@k and
// cross-lingual word similarity correlation.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xlmap/dict_build.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/kernels.hpp"
#include "xlmap/linalg.hpp"

namespace xlmap {

struct RetrievalReport {
  std::string source_space;
  std::string target_space;
  std::size_t n = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::size_t dropped = 0;
  /// Pair indices whose source or target embedding is the zero vector.
  std::vector<std::size_t> zero_vectors;
};

/// Column i of `src` (already mapped into the target or pivot space) should
/// retrieve column i of `tgt` as its cosine nearest neighbour. Ties go to the
/// smaller index. `dropped` records pairs excluded before the call.
RetrievalReport retrieval_accuracy(const DenseMatrix& src, const DenseMatrix& tgt,
                                   std::size_t dropped = 0, std::string source_space = "src",
                                   std::string target_space = "tgt",
                                   kernels::Exec exec = kernels::Exec::Parallel);

struct PrecisionReport {
  std::size_t k = 1;
  double precision = 0.0;
  std::size_t correct = 0;
  std::size_t evaluated = 0;
  std::size_t skipped_oov = 0;
};

/// A source word is correct when any of its gold translations is among its
/// k nearest target words. Source words missing from `mapped_src`, or whose
/// gold targets are all missing from `tgt`, are skipped.
PrecisionReport word_translation_precision(const EmbeddingTable& mapped_src, const EmbeddingTable& tgt,
                                           const WordPairList& gold, std::size_t k,
                                           kernels::Exec exec = kernels::Exec::Parallel);

struct ScoredPair {
  std::string a;
  std::string b;
  double score;
};

struct CorrelationReport {
  double pearson = 0.0;
  double spearman = 0.0;
  /// 2pq/(p+q); absent when either correlation is not positive.
  std::optional<double> harmonic_mean;
  std::size_t n = 0;
  std::size_t skipped_oov = 0;
};

/// TSV "word_a<TAB>word_b<TAB>score". A first line without a numeric score is
/// treated as a header.
std::vector<ScoredPair> load_similarity_gold(std::istream& in);

CorrelationReport similarity_correlation(std::span<const ScoredPair> pairs, const EmbeddingTable& space_a,
                                         const EmbeddingTable& space_b);

double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);
/// 1-based ranks, ties receive the average of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> xs);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace xlmap

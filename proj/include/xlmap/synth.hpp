#pragma once

// Synthetic two-language worlds with a known orthogonal relation between the
// embedding spaces. Source word w has base vector x_w; its translation has
// Q·x_w. Static target vectors and every contextual token vector carry
// independent Gaussian noise of scale `noise` per coordinate.

#include <cstddef>
#include <cstdint>
#include <random>

#include "xlmap/dict_build.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/linalg.hpp"

namespace xlmap {

struct SynthOptions {
  std::size_t dim = 32;
  std::size_t vocab = 20'000;
  std::size_t train_sentences = 20'000;
  std::size_t test_sentences = 1'000;
  std::size_t min_length = 5;
  std::size_t max_length = 15;
  double noise = 0.1;
  /// Exponent of the Zipfian word distribution.
  double zipf = 1.0;
  std::uint64_t seed = 1;
};

struct SyntheticWorld {
  DenseMatrix rotation;  // ground-truth Q
  EmbeddingTable src_vectors;
  EmbeddingTable tgt_vectors;
  ParallelCorpus train;
  ParallelCorpus test;
  TokenEmbeddingCorpus src_train_ctx;
  TokenEmbeddingCorpus tgt_train_ctx;
  TokenEmbeddingCorpus src_test_ctx;
  TokenEmbeddingCorpus tgt_test_ctx;
  /// The true bijective lexicon, every word.
  WordPairList lexicon;
};

/// Orthogonal matrix from Gram-Schmidt on a Gaussian matrix.
DenseMatrix random_orthogonal(std::size_t d, std::mt19937_64& rng);
DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0);

SyntheticWorld make_synthetic_world(const SynthOptions& options);

}  // namespace xlmap

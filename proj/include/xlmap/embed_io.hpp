#pragma once

// Readers and writers for every on-disk input the toolkit consumes:
// word2vec-text vector files, "#S"-block token embedding dumps, line-aligned
// parallel text and token frequency tables.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlmap/linalg.hpp"

namespace xlmap {

using Sentence = std::vector<std::string>;

/// Static word vectors. Column i of `vectors()` belongs to `vocab()[i]`.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  /// Duplicate tokens keep the first occurrence and are counted.
  EmbeddingTable(std::vector<std::string> vocab, DenseMatrix vectors, std::string space_id = {});

  std::size_t dim() const { return vectors_.rows(); }
  std::size_t size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const DenseMatrix& vectors() const { return vectors_; }
  const std::string& space_id() const { return space_id_; }
  void set_space_id(std::string id) { space_id_ = std::move(id); }
  std::size_t duplicates_skipped() const { return duplicates_skipped_; }

  std::optional<std::size_t> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  /// Empty span when the token is out of vocabulary.
  std::span<const double> lookup(std::string_view token) const;

 private:
  std::vector<std::string> vocab_;
  DenseMatrix vectors_;
  std::string space_id_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_skipped_ = 0;
};

/// Per-token contextual vectors, one block per sentence.
struct TokenEmbeddingCorpus {
  struct Block {
    Sentence tokens;
    DenseMatrix vectors;  // dim × tokens.size()
  };
  std::size_t dim = 0;
  std::vector<Block> sentences;
  std::string space_id;
};

struct ParallelCorpus {
  std::vector<Sentence> source;
  std::vector<Sentence> target;
  /// 0-based input line of each retained pair.
  std::vector<std::size_t> line_numbers;
  std::size_t dropped_pairs = 0;

  std::size_t size() const { return source.size(); }
  /// First `n` pairs.
  ParallelCorpus prefix(std::size_t n) const;
};

struct FrequencyTable {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t count(std::string_view token) const;
};

Sentence tokenize(std::string_view line);

EmbeddingTable load_word_vectors(std::istream& in, std::string space_id = {});
void save_word_vectors(std::ostream& out, const EmbeddingTable& table);

TokenEmbeddingCorpus load_token_embeddings(std::istream& in, std::string space_id = {});
void save_token_embeddings(std::ostream& out, const TokenEmbeddingCorpus& corpus);

/// Line i of the source pairs with line i of the target; pairs where either
/// side is empty are dropped and counted.
ParallelCorpus load_parallel(std::istream& source, std::istream& target);
/// Token text of two sentence-aligned dumps as a parallel corpus.
ParallelCorpus corpus_from_token_embeddings(const TokenEmbeddingCorpus& source,
                                            const TokenEmbeddingCorpus& target);
std::vector<Sentence> load_sentences(std::istream& in);

FrequencyTable count_frequencies(std::span<const Sentence> corpus);
void save_frequencies(std::ostream& out, const FrequencyTable& table);
FrequencyTable load_frequencies(std::istream& in);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);
/// Exactly 17 significant digits.
std::string format_double17(double v);
/// Parses a whole field as a double (NaN/Inf included); nullopt on junk.
std::optional<double> parse_double(std::string_view text);

}  // namespace xlmap

#pragma once

// IBM Model 1 lexical alignment trained by EM, with an optional fixed
// diagonal prior in the style of fast_align. The model generates target
// tokens f from source tokens e (or NULL): t(f|e).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlmap/embed_io.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap {

inline constexpr std::string_view kNullToken = "<null>";

struct Ibm1Options {
  std::size_t iterations = 5;
  /// λ of the exp(−λ·|i/I − j/J|) reweighting; 0 disables it.
  double diagonal_tension = 0.0;
  kernels::Exec exec = kernels::Exec::Parallel;
};

inline constexpr double kDefaultDiagonalTension = 4.0;

class TranslationTable {
 public:
  struct Entry {
    std::uint32_t target;
    double prob;
  };

  TranslationTable() = default;

  /// Build from explicit (source, target, t(target|source)) triples.
  static TranslationTable from_entries(
      const std::vector<std::tuple<std::string, std::string, double>>& entries,
      double diagonal_tension = 0.0);

  /// t(target|source); 0 for unseen combinations. Pass kNullToken as source for NULL.
  double prob(std::string_view source, std::string_view target) const;

  /// Source vocabulary; id 0 is always the NULL token.
  const std::vector<std::string>& source_vocab() const { return source_vocab_; }
  const std::vector<std::string>& target_vocab() const { return target_vocab_; }
  std::optional<std::uint32_t> source_id(std::string_view token) const;
  std::optional<std::uint32_t> target_id(std::string_view token) const;
  /// Stored entries conditioned on source id, ordered by target id.
  const std::vector<Entry>& entries(std::uint32_t source) const { return rows_[source]; }

  double diagonal_tension() const { return diagonal_tension_; }
  /// Corpus log-likelihood before the first and after every EM iteration.
  const std::vector<double>& log_likelihood_trace() const { return trace_; }

 private:
  friend TranslationTable train_ibm1(const ParallelCorpus&, const Ibm1Options&);
  std::uint32_t intern_source(const std::string& token);
  std::uint32_t intern_target(const std::string& token);
  void rebuild_lookup();

  std::vector<std::string> source_vocab_{std::string(kNullToken)};
  std::vector<std::string> target_vocab_;
  std::unordered_map<std::string, std::uint32_t> source_index_{{std::string(kNullToken), 0}};
  std::unordered_map<std::string, std::uint32_t> target_index_;
  std::vector<std::vector<Entry>> rows_{1};
  std::unordered_map<std::uint64_t, double> lookup_;
  double diagonal_tension_ = 0.0;
  std::vector<double> trace_;
};

struct AlignmentLink {
  std::size_t sentence;
  std::size_t source_pos;
  std::size_t target_pos;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

TranslationTable train_ibm1(const ParallelCorpus& corpus, const Ibm1Options& options = {});

/// Alignment prior weight of source position i (0-based, NULL excluded) for
/// target position j, normalized so NULL plus all positions sum to 1.
std::vector<double> alignment_prior(std::size_t src_len, std::size_t tgt_len, std::size_t j,
                                    double diagonal_tension);

/// Best source position for each target token; NULL wins ties and produces no link.
std::vector<AlignmentLink> align_corpus(const TranslationTable& table, const ParallelCorpus& corpus);

/// One line per sentence pair: "i-j" links (0-based), sorted, space-separated.
void write_pharaoh(std::ostream& out, const std::vector<AlignmentLink>& links, std::size_t sentences);
std::vector<AlignmentLink> read_pharaoh(std::istream& in);

/// TSV "e<TAB>f<TAB>prob", sorted by e then descending probability.
void write_translation_table(std::ostream& out, const TranslationTable& table);
TranslationTable read_translation_table(std::istream& in, double diagonal_tension = 0.0);

}  // namespace xlmap

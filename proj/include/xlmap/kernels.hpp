#pragma once

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version; the two produce bitwise-identical results because the
// parallel variants only split work whose per-element reduction order is
// fixed (one output entry, one query, or one sentence per task).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "xlmap/linalg.hpp"

namespace xlmap::kernels {

enum class Exec { Serial, Parallel };

/// Y·Xᵀ for Y (d1×n) and X (d2×n), accumulated in double over n.
DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x, Exec exec = Exec::Parallel);

/// A·B.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, Exec exec = Exec::Parallel);

/// For every column of `queries`, indices of the k columns of `keys` with the
/// highest cosine similarity, best first. Ties go to the smaller key index.
/// Zero-norm keys are never returned; a zero-norm query gets an empty list.
std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k,
                                                   Exec exec = Exec::Parallel);

/// Flattened alignment lattice for IBM Model 1 style EM. For sentence s the
/// cells [offsets[s], offsets[s+1]) are laid out target-position-major, with
/// src_len[s]+1 cells per target position (NULL first). Each cell names the
/// translation parameter it reads and a fixed alignment prior weight; the
/// weights of one target position sum to 1.
struct Ibm1Lattice {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> src_len;
  std::vector<std::uint32_t> tgt_len;
  std::vector<std::uint32_t> param;
  std::vector<double> prior;

  std::size_t sentences() const { return src_len.size(); }
};

inline constexpr double kProbabilityFloor = 1e-12;

/// One E-step: adds posterior link mass into `counts` (indexed like `t`) and
/// returns the corpus log-likelihood under `t`. Per-sentence log-likelihoods
/// are summed in sentence order; counts are accumulated in cell order.
double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts, Exec exec = Exec::Parallel);

namespace serial {
DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k);
double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts);
}  // namespace serial

namespace parallel {
DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k);
double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts);
}  // namespace parallel

namespace detail {
// Shared per-element routines so both variants run identical arithmetic.
double dot(std::span<const double> a, std::span<const double> b);
std::vector<double> column_norms(const DenseMatrix& m);
std::vector<std::size_t> top_k_for_query(const DenseMatrix& queries, std::size_t q,
                                         const DenseMatrix& keys,
                                         std::span<const double> key_norms, double query_norm,
                                         std::size_t k);
/// Posterior mass of sentence s written to post[cell - offsets[s]]; returns log Z summed over j.
double ibm1_sentence_posteriors(const Ibm1Lattice& lattice, std::size_t s,
                                std::span<const double> t, std::span<double> post);
}  // namespace detail

}  // namespace xlmap::kernels

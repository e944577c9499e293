#include <omp.h>

#include <algorithm>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap::kernels::parallel {

namespace {
// Sentences per E-step block; bounds the posterior buffer.
constexpr std::size_t kSentenceBlock = 4096;
}  // namespace

DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x) {
  if (y.cols() != x.cols())
    throw Error(ErrorCode::ShapeMismatch, "cross_gram: column counts differ");
  const DenseMatrix yt = y.transpose();
  const DenseMatrix xt = x.transpose();
  DenseMatrix out(y.rows(), x.rows());
  const auto rows = static_cast<std::ptrdiff_t>(y.rows());
  const auto total = rows * static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < total; ++e) {
    const auto i = static_cast<std::size_t>(e % rows);
    const auto j = static_cast<std::size_t>(e / rows);
    out(i, j) = detail::dot(yt.col(i), xt.col(j));
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "multiply: inner dims differ");
  const DenseMatrix at = a.transpose();
  DenseMatrix out(a.rows(), b.cols());
  const auto cols = static_cast<std::ptrdiff_t>(b.cols());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, cc) = detail::dot(at.col(r), b.col(cc));
  }
  return out;
}

std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k) {
  if (queries.rows() != keys.rows())
    throw Error(ErrorCode::ShapeMismatch, "cosine_top_k: dimensions differ");
  const auto qn = detail::column_norms(queries);
  const auto kn = detail::column_norms(keys);
  std::vector<std::vector<std::size_t>> out(queries.cols());
  const auto nq = static_cast<std::ptrdiff_t>(queries.cols());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t q = 0; q < nq; ++q) {
    const auto qq = static_cast<std::size_t>(q);
    out[qq] = detail::top_k_for_query(queries, qq, keys, kn, qn[qq], k);
  }
  return out;
}

double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts) {
  double loglik = 0.0;
  std::vector<double> post;
  std::vector<double> sentence_ll;
  for (std::size_t first = 0; first < lattice.sentences(); first += kSentenceBlock) {
    const std::size_t last = std::min(first + kSentenceBlock, lattice.sentences());
    const std::size_t base = lattice.offsets[first];
    post.assign(lattice.offsets[last] - base, 0.0);
    sentence_ll.assign(last - first, 0.0);
    const auto n = static_cast<std::ptrdiff_t>(last - first);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const std::size_t s = first + static_cast<std::size_t>(k);
      const std::size_t begin = lattice.offsets[s];
      std::span<double> slice(post.data() + (begin - base), lattice.offsets[s + 1] - begin);
      sentence_ll[static_cast<std::size_t>(k)] =
          detail::ibm1_sentence_posteriors(lattice, s, t, slice);
    }
    // fixed-order merge keeps the result identical to the serial reference
    for (std::size_t s = first; s < last; ++s) loglik += sentence_ll[s - first];
    for (std::size_t c = base; c < lattice.offsets[last]; ++c)
      counts[lattice.param[c]] += post[c - base];
  }
  return loglik;
}

}  // namespace xlmap::kernels::parallel

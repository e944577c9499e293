#include <cmath>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap::kernels {

namespace detail {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::vector<double> column_norms(const DenseMatrix& m) {
  std::vector<double> norms(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) norms[c] = std::sqrt(dot(m.col(c), m.col(c)));
  return norms;
}

std::vector<std::size_t> top_k_for_query(const DenseMatrix& queries, std::size_t q,
                                         const DenseMatrix& keys,
                                         std::span<const double> key_norms, double query_norm,
                                         std::size_t k) {
  std::vector<std::size_t> best;
  std::vector<double> scores;
  if (query_norm == 0.0 || k == 0) return best;
  best.reserve(k + 1);
  scores.reserve(k + 1);
  const auto qv = queries.col(q);
  for (std::size_t j = 0; j < keys.cols(); ++j) {
    if (key_norms[j] == 0.0) continue;
    const double s = dot(qv, keys.col(j)) / (query_norm * key_norms[j]);
    if (best.size() == k && !(s > scores.back())) continue;
    // insert after every entry with score >= s: equal scores keep the smaller index first
    std::size_t pos = scores.size();
    while (pos > 0 && scores[pos - 1] < s) --pos;
    scores.insert(scores.begin() + static_cast<std::ptrdiff_t>(pos), s);
    best.insert(best.begin() + static_cast<std::ptrdiff_t>(pos), j);
    if (best.size() > k) {
      scores.pop_back();
      best.pop_back();
    }
  }
  return best;
}

double ibm1_sentence_posteriors(const Ibm1Lattice& lattice, std::size_t s,
                                std::span<const double> t, std::span<double> post) {
  const std::size_t base = lattice.offsets[s];
  const std::size_t width = lattice.src_len[s] + 1;
  double loglik = 0.0;
  for (std::size_t j = 0; j < lattice.tgt_len[s]; ++j) {
    const std::size_t row = base + j * width;
    double z = 0.0;
    for (std::size_t i = 0; i < width; ++i) z += t[lattice.param[row + i]] * lattice.prior[row + i];
    if (z < kProbabilityFloor) z = kProbabilityFloor;
    loglik += std::log(z);
    for (std::size_t i = 0; i < width; ++i)
      post[row - base + i] = t[lattice.param[row + i]] * lattice.prior[row + i] / z;
  }
  return loglik;
}

}  // namespace detail

namespace {

void check_gram_shapes(const DenseMatrix& y, const DenseMatrix& x) {
  if (y.cols() != x.cols())
    throw Error(ErrorCode::ShapeMismatch, "cross_gram: column counts differ");
}

void check_multiply_shapes(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::ShapeMismatch, "multiply: inner dims differ");
}

}  // namespace

namespace serial {

DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x) {
  check_gram_shapes(y, x);
  const DenseMatrix yt = y.transpose();
  const DenseMatrix xt = x.transpose();
  DenseMatrix out(y.rows(), x.rows());
  for (std::size_t j = 0; j < x.rows(); ++j)
    for (std::size_t i = 0; i < y.rows(); ++i) out(i, j) = detail::dot(yt.col(i), xt.col(j));
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  check_multiply_shapes(a, b);
  const DenseMatrix at = a.transpose();
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c)
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, c) = detail::dot(at.col(r), b.col(c));
  return out;
}

std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k) {
  if (queries.rows() != keys.rows())
    throw Error(ErrorCode::ShapeMismatch, "cosine_top_k: dimensions differ");
  const auto qn = detail::column_norms(queries);
  const auto kn = detail::column_norms(keys);
  std::vector<std::vector<std::size_t>> out(queries.cols());
  for (std::size_t q = 0; q < queries.cols(); ++q)
    out[q] = detail::top_k_for_query(queries, q, keys, kn, qn[q], k);
  return out;
}

double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts) {
  double loglik = 0.0;
  std::vector<double> post;
  for (std::size_t s = 0; s < lattice.sentences(); ++s) {
    const std::size_t begin = lattice.offsets[s];
    const std::size_t end = lattice.offsets[s + 1];
    post.resize(end - begin);
    loglik += detail::ibm1_sentence_posteriors(lattice, s, t, post);
    for (std::size_t c = begin; c < end; ++c) counts[lattice.param[c]] += post[c - begin];
  }
  return loglik;
}

}  // namespace serial

DenseMatrix cross_gram(const DenseMatrix& y, const DenseMatrix& x, Exec exec) {
  return exec == Exec::Serial ? serial::cross_gram(y, x) : parallel::cross_gram(y, x);
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, Exec exec) {
  return exec == Exec::Serial ? serial::multiply(a, b) : parallel::multiply(a, b);
}

std::vector<std::vector<std::size_t>> cosine_top_k(const DenseMatrix& queries,
                                                   const DenseMatrix& keys, std::size_t k,
                                                   Exec exec) {
  return exec == Exec::Serial ? serial::cosine_top_k(queries, keys, k)
                              : parallel::cosine_top_k(queries, keys, k);
}

double ibm1_expectation(const Ibm1Lattice& lattice, std::span<const double> t,
                        std::span<double> counts, Exec exec) {
  return exec == Exec::Serial ? serial::ibm1_expectation(lattice, t, counts)
                              : parallel::ibm1_expectation(lattice, t, counts);
}

}  // namespace xlmap::kernels

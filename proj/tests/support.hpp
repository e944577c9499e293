#pragma once

// Generators and brute-force oracles shared by the test binaries. Nothing
// here calls into the library's numeric code, so the oracles stay independent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "xlmap/linalg.hpp"

namespace testing {

using xlmap::DenseMatrix;

inline DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = n(rng);
  return m;
}

// Modified Gram-Schmidt on a Gaussian matrix.
inline DenseMatrix orthogonal(std::size_t d, std::mt19937_64& rng) {
  DenseMatrix q = gaussian(d, d, rng);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      double dot = 0.0;
      for (std::size_t r = 0; r < d; ++r) dot += q(r, p) * q(r, c);
      for (std::size_t r = 0; r < d; ++r) q(r, c) -= dot * q(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < d; ++r) norm += q(r, c) * q(r, c);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < d; ++r) q(r, c) /= norm;
  }
  return q;
}

inline DenseMatrix naive_multiply(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      c(i, j) = static_cast<double>(s);
    }
  return c;
}

inline double max_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double frob(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double column_cosine(const DenseMatrix& a, std::size_t i, const DenseMatrix& b, std::size_t j) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    ab += a(r, i) * b(r, j);
    aa += a(r, i) * a(r, i);
    bb += b(r, j) * b(r, j);
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

// Exhaustive cosine nearest neighbour, first maximum wins.
inline std::size_t brute_nearest(const DenseMatrix& queries, std::size_t q, const DenseMatrix& keys) {
  std::size_t best = 0;
  double best_score = -2.0;
  for (std::size_t j = 0; j < keys.cols(); ++j) {
    const double s = column_cosine(queries, q, keys, j);
    if (s > best_score) {
      best_score = s;
      best = j;
    }
  }
  return best;
}

// Exhaustive k nearest neighbours by full sort, ties to the smaller index.
inline std::vector<std::size_t> brute_top_k(const DenseMatrix& queries, std::size_t q, const DenseMatrix& keys,
                                            std::size_t k) {
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t j = 0; j < keys.cols(); ++j) scored.emplace_back(column_cosine(queries, q, keys, j), j);
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

// Textbook two-pass Pearson.
inline double brute_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Ranks by counting: rank = 1 + #smaller + (#equal - 1) / 2.
inline std::vector<double> brute_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) ++less;
      if (v == x[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

// Spearman by the d² formula; only valid without ties.
inline double spearman_d2(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = brute_ranks(x);
  const auto ry = brute_ranks(y);
  const double n = static_cast<double>(x.size());
  double d2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

inline std::vector<std::string> words(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace testing

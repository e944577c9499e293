#include "xlmap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::ShapeMismatch, "entry count does not equal rows*cols");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::ShapeMismatch, "ragged row initializer");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r = 0; r < rows_; ++r) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix DenseMatrix::column_range(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw Error(ErrorCode::ShapeMismatch, "column range out of bounds");
  const auto begin = data_.begin() + static_cast<std::ptrdiff_t>(first * rows_);
  return DenseMatrix(rows_, count,
                     std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count * rows_)));
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  return kernels::multiply(a, b);
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, "subtraction of differently shaped matrices");
  DenseMatrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= bd[i];
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).max_abs(); }

double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.data()) acc += v * v;
  return std::sqrt(acc);
}

double orthogonality_residual(const DenseMatrix& a) {
  const DenseMatrix gram = kernels::cross_gram(a.transpose(), a.transpose());
  return max_abs_diff(gram, DenseMatrix::identity(a.cols()));
}

namespace {

constexpr int kMaxSweeps = 80;
constexpr double kJacobiTolerance = 1e-15;

// Completes column j of u to a unit vector orthogonal to the kept columns.
// Tries every standard basis vector and keeps the largest residual.
void complete_column(DenseMatrix& u, std::size_t j, const std::vector<bool>& filled) {
  const std::size_t n = u.rows();
  std::vector<double> best;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < u.cols(); ++c) {
        if (!filled[c]) continue;
        const double p = kernels::detail::dot(u.col(c), v);
        for (std::size_t r = 0; r < n; ++r) v[r] -= p * u(r, c);
      }
    }
    const double norm = std::sqrt(kernels::detail::dot(v, v));
    if (norm > best_norm) {
      best_norm = norm;
      best = std::move(v);
    }
  }
  for (std::size_t r = 0; r < n; ++r) u(r, j) = best[r] / best_norm;
}

}  // namespace

SvdResult thin_svd(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "thin_svd expects a square matrix");
  if (!m.all_finite()) throw Error(ErrorCode::NonFinite, "thin_svd input has NaN/Inf");
  const std::size_t n = m.rows();

  const double scale = m.max_abs();
  DenseMatrix a = m;
  if (scale > 0.0)
    for (double& v : a.data()) v /= scale;
  DenseMatrix v = DenseMatrix::identity(n);

  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto ap = a.col(p);
        auto aq = a.col(q);
        const double alpha = kernels::detail::dot(ap, ap);
        const double beta = kernels::detail::dot(aq, aq);
        const double gamma = kernels::detail::dot(ap, aq);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kJacobiTolerance * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < n; ++r) {
          const double x = ap[r];
          const double y = aq[r];
          ap[r] = c * x - s * y;
          aq[r] = s * x + c * y;
        }
        auto vp = v.col(p);
        auto vq = v.col(q);
        for (std::size_t r = 0; r < n; ++r) {
          const double x = vp[r];
          const double y = vq[r];
          vp[r] = c * x - s * y;
          vq[r] = s * x + c * y;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(kernels::detail::dot(a.col(j), a.col(j)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return sigma[l] > sigma[r]; });

  const double sigma_max = n == 0 ? 0.0 : sigma[order.front()];
  const double null_threshold =
      sigma_max * static_cast<double>(std::max<std::size_t>(n, 1)) *
      std::numeric_limits<double>::epsilon();

  SvdResult out{DenseMatrix(n, n), std::vector<double>(n), DenseMatrix(n, n)};
  std::vector<bool> filled(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = sigma[j] * scale;
    for (std::size_t r = 0; r < n; ++r) out.vt(k, r) = v(r, j);
    if (sigma[j] <= null_threshold || sigma[j] == 0.0) continue;
    // re-orthogonalize against earlier columns (modified Gram-Schmidt)
    std::vector<double> col(a.col(j).begin(), a.col(j).end());
    for (double& x : col) x /= sigma[j];
    for (std::size_t c = 0; c < k; ++c) {
      if (!filled[c]) continue;
      const double p = kernels::detail::dot(out.u.col(c), col);
      for (std::size_t r = 0; r < n; ++r) col[r] -= p * out.u(r, c);
    }
    const double norm = std::sqrt(kernels::detail::dot(col, col));
    if (norm < 0.5) continue;
    for (std::size_t r = 0; r < n; ++r) out.u(r, k) = col[r] / norm;
    filled[k] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (filled[k]) continue;
    complete_column(out.u, k, filled);
    filled[k] = true;
  }
  return out;
}

const char* to_string(MapLevel level) {
  switch (level) {
    case MapLevel::Word: return "word";
    case MapLevel::Sentence: return "sentence";
    case MapLevel::Contextual: return "contextual";
  }
  return "word";
}

MapLevel parse_map_level(const std::string& text) {
  if (text == "word") return MapLevel::Word;
  if (text == "sentence") return MapLevel::Sentence;
  if (text == "contextual") return MapLevel::Contextual;
  throw Error(ErrorCode::InvalidParameter, "unknown mapping level '" + text + "'");
}

OrthogonalMap::OrthogonalMap(DenseMatrix r, MapInfo info) : r_(std::move(r)), info_(std::move(info)) {
  if (r_.rows() != r_.cols() || r_.rows() == 0)
    throw Error(ErrorCode::ShapeMismatch, "orthogonal map must be a nonempty square matrix");
  if (!r_.all_finite()) throw Error(ErrorCode::NonFinite, "orthogonal map has NaN/Inf");
  const double residual = orthogonality_residual(r_);
  if (residual > kOrthogonalityTolerance)
    throw Error(ErrorCode::NotOrthogonal,
                "max|RᵀR - I| = " + std::to_string(residual) + " exceeds tolerance");
}

OrthogonalMap solve_procrustes(const DenseMatrix& x, const DenseMatrix& y, MapInfo info) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw Error(ErrorCode::ShapeMismatch, "Procrustes: X and Y shapes differ");
  if (x.rows() == 0 || x.cols() == 0)
    throw Error(ErrorCode::ShapeMismatch, "Procrustes: empty dictionary");
  if (!x.all_finite() || !y.all_finite())
    throw Error(ErrorCode::NonFinite, "Procrustes: dictionary has NaN/Inf");
  const SvdResult svd = thin_svd(kernels::cross_gram(y, x));
  return OrthogonalMap(svd.u * svd.vt, std::move(info));
}

DenseMatrix apply_map(const OrthogonalMap& map, const DenseMatrix& v) {
  if (v.rows() != map.dim())
    throw Error(ErrorCode::ShapeMismatch, "apply_map: vector dimension differs from map");
  return kernels::multiply(map.matrix(), v);
}

std::vector<double> apply_map(const OrthogonalMap& map, std::span<const double> v) {
  const DenseMatrix col(v.size(), 1, std::vector<double>(v.begin(), v.end()));
  const DenseMatrix out = apply_map(map, col);
  return {out.data().begin(), out.data().end()};
}

}  // namespace xlmap

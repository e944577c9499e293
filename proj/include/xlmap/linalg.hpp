#pragma once

// Dense matrix kernel: thin SVD and the orthogonal Procrustes solver.
//
// Matrices are stored column-major because every matrix in the toolkit is a
// bag of d-dimensional vectors laid out as columns (dictionary entries,
// sentence embeddings, vocabulary tables).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace xlmap {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  /// `data` is column-major, rows*cols entries.
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);
  /// Build from a row-major initializer, convenient in tests.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const { return {data_.data() + c * rows_, rows_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;
  double max_abs() const;
  DenseMatrix transpose() const;
  /// Columns [first, first+count).
  DenseMatrix column_range(std::size_t first, std::size_t count) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& m);
/// max |AᵀA − I|
double orthogonality_residual(const DenseMatrix& a);

struct SvdResult {
  DenseMatrix u;
  std::vector<double> singular_values;  // nonincreasing
  DenseMatrix vt;
};

/// One-sided Jacobi SVD of a square matrix. Deterministic for identical input.
/// Left singular vectors belonging to (numerically) zero singular values are
/// completed to an orthonormal basis, so `u` is always orthogonal.
SvdResult thin_svd(const DenseMatrix& m);

enum class MapLevel { Word, Sentence, Contextual };

const char* to_string(MapLevel level);
MapLevel parse_map_level(const std::string& text);

struct MapInfo {
  std::string source_space = "src";
  std::string target_space = "tgt";
  MapLevel level = MapLevel::Word;
};

/// A d×d orthogonal matrix R together with the spaces it connects.
class OrthogonalMap {
 public:
  static constexpr double kOrthogonalityTolerance = 1e-10;

  /// Throws NotOrthogonal when max|RᵀR − I| exceeds the tolerance.
  OrthogonalMap(DenseMatrix r, MapInfo info);

  const DenseMatrix& matrix() const { return r_; }
  std::size_t dim() const { return r_.rows(); }
  const MapInfo& info() const { return info_; }
  const std::string& source_space() const { return info_.source_space; }
  const std::string& target_space() const { return info_.target_space; }
  MapLevel level() const { return info_.level; }

 private:
  DenseMatrix r_;
  MapInfo info_;
};

/// argmin over orthogonal R of ‖RX − Y‖_F, solved as R = U·Vᵀ with
/// Y·Xᵀ = U·Σ·Vᵀ. No determinant correction: reflections are allowed.
OrthogonalMap solve_procrustes(const DenseMatrix& x, const DenseMatrix& y, MapInfo info = {});

/// R·V.
DenseMatrix apply_map(const OrthogonalMap& map, const DenseMatrix& v);
std::vector<double> apply_map(const OrthogonalMap& map, std::span<const double> v);

}  // namespace xlmap

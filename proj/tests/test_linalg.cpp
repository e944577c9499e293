#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "xlmap/error.hpp"
#include "xlmap/linalg.hpp"

using namespace xlmap;
using testing::gaussian;
using testing::orthogonal;

namespace {

DenseMatrix reconstruct(const SvdResult& s) {
  DenseMatrix us = s.u;
  for (std::size_t c = 0; c < us.cols(); ++c)
    for (double& v : us.col(c)) v *= s.singular_values[c];
  return testing::naive_multiply(us, s.vt);
}

}  // namespace

TEST_CASE("svd of the identity") {
  const auto s = thin_svd(DenseMatrix::identity(3));
  for (double sv : s.singular_values) CHECK(sv == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(std::abs(s.u(c, c)) - 1.0) < 1e-14);
}

TEST_CASE("svd of a diagonal matrix sorts singular values") {
  const auto s = thin_svd(DenseMatrix::from_rows({{1, 0, 0}, {0, 3, 0}, {0, 0, 2}}));
  REQUIRE(s.singular_values.size() == 3);
  CHECK(s.singular_values[0] == doctest::Approx(3.0));
  CHECK(s.singular_values[1] == doctest::Approx(2.0));
  CHECK(s.singular_values[2] == doctest::Approx(1.0));
}

TEST_CASE("svd of the swap matrix reconstructs it") {
  const DenseMatrix m = DenseMatrix::from_rows({{0, 1}, {1, 0}});
  const auto s = thin_svd(m);
  CHECK(s.singular_values[0] == doctest::Approx(1.0));
  CHECK(s.singular_values[1] == doctest::Approx(1.0));
  CHECK(testing::max_diff(reconstruct(s), m) < 1e-12);
}

TEST_CASE("svd reconstructs random and rank-deficient matrices") {
  std::mt19937_64 rng(7);
  for (std::size_t d : {1, 2, 5, 17, 40}) {
    DenseMatrix m = gaussian(d, d, rng);
    auto s = thin_svd(m);
    CHECK(testing::max_diff(reconstruct(s), m) < 1e-12 * static_cast<double>(d));
    CHECK(orthogonality_residual(s.u) < 1e-12);
    CHECK(orthogonality_residual(s.vt.transpose()) < 1e-12);
    for (std::size_t i = 1; i < d; ++i) CHECK(s.singular_values[i - 1] >= s.singular_values[i]);

    // rank 1: outer product; U must still be completed to an orthogonal basis
    DenseMatrix a = gaussian(d, 1, rng);
    DenseMatrix b = gaussian(1, d, rng);
    DenseMatrix r1 = testing::naive_multiply(a, b);
    s = thin_svd(r1);
    CHECK(orthogonality_residual(s.u) < 1e-12);
    CHECK(testing::max_diff(reconstruct(s), r1) < 1e-12 * static_cast<double>(d));
  }
  const auto z = thin_svd(DenseMatrix(4, 4));
  CHECK(orthogonality_residual(z.u) < 1e-14);
}

TEST_CASE("svd is deterministic") {
  std::mt19937_64 rng(3);
  const DenseMatrix m = gaussian(12, 12, rng);
  const auto a = thin_svd(m);
  const auto b = thin_svd(m);
  CHECK(a.u == b.u);
  CHECK(a.vt == b.vt);
  CHECK(a.singular_values == b.singular_values);
}

TEST_CASE("svd rejects bad input") {
  CHECK_THROWS_AS(thin_svd(DenseMatrix(2, 3)), Error);
  DenseMatrix m = DenseMatrix::identity(2);
  m(0, 1) = std::nan("");
  try {
    thin_svd(m);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("procrustes on identical sets gives the identity") {
  std::mt19937_64 rng(11);
  const DenseMatrix x = gaussian(6, 20, rng);
  const auto map = solve_procrustes(x, x);
  CHECK(testing::max_diff(map.matrix(), DenseMatrix::identity(6)) < 1e-10);
}

TEST_CASE("procrustes recovers a known rotation") {
  std::mt19937_64 rng(5);
  const DenseMatrix q = orthogonal(10, rng);
  const DenseMatrix x = gaussian(10, 50, rng);
  const auto map = solve_procrustes(x, testing::naive_multiply(q, x));
  CHECK(testing::max_diff(map.matrix(), q) < 1e-8);
  CHECK(orthogonality_residual(map.matrix()) <= 1e-10);
}

TEST_CASE("procrustes with a single unit pair maps x onto y") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix x = gaussian(7, 1, rng);
    DenseMatrix y = gaussian(7, 1, rng);
    const double nx = testing::frob(x), ny = testing::frob(y);
    for (double& v : x.data()) v /= nx;
    for (double& v : y.data()) v /= ny;
    const auto map = solve_procrustes(x, y);
    CHECK(testing::max_diff(apply_map(map, x), y) < 1e-10);
    CHECK(orthogonality_residual(map.matrix()) <= 1e-10);
  }
}

TEST_CASE("procrustes beats random orthogonal candidates") {
  std::mt19937_64 rng(21);
  for (int inst = 0; inst < 5; ++inst) {
    const std::size_t d = 4 + 3 * inst;
    const DenseMatrix x = gaussian(d, 3 * d, rng);
    const DenseMatrix y = gaussian(d, 3 * d, rng);
    const auto map = solve_procrustes(x, y);
    const double best = testing::frob(testing::naive_multiply(map.matrix(), x) - y);
    for (int k = 0; k < 100; ++k) {
      const DenseMatrix q = orthogonal(d, rng);
      CHECK(best <= testing::frob(testing::naive_multiply(q, x) - y) + 1e-9);
    }
  }
}

TEST_CASE("procrustes error shrinks as the dictionary grows") {
  const std::size_t d = 8;
  const double noise = 0.3;
  double err[3] = {0, 0, 0};
  const std::size_t sizes[3] = {16, 64, 256};
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    const DenseMatrix q = orthogonal(d, rng);
    for (int s = 0; s < 3; ++s) {
      const DenseMatrix x = gaussian(d, sizes[s], rng);
      const DenseMatrix y = testing::naive_multiply(q, x) - gaussian(d, sizes[s], rng, noise);
      err[s] += testing::frob(solve_procrustes(x, y).matrix() - q);
    }
  }
  CHECK(err[0] > err[1]);
  CHECK(err[1] > err[2]);
}

TEST_CASE("procrustes input validation") {
  CHECK_THROWS_AS(solve_procrustes(DenseMatrix(3, 4), DenseMatrix(3, 5)), Error);
  DenseMatrix x = DenseMatrix::identity(3);
  x(1, 1) = INFINITY;
  try {
    solve_procrustes(x, DenseMatrix::identity(3));
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("apply_map is an isometry") {
  std::mt19937_64 rng(17);
  const OrthogonalMap map(orthogonal(12, rng), {});
  const DenseMatrix v = gaussian(12, 30, rng, 3.0);
  const DenseMatrix w = apply_map(map, v);
  for (std::size_t i = 0; i < v.cols(); ++i) {
    double nv = 0, nw = 0;
    for (std::size_t r = 0; r < 12; ++r) {
      nv += v(r, i) * v(r, i);
      nw += w(r, i) * w(r, i);
    }
    CHECK(std::abs(std::sqrt(nv) - std::sqrt(nw)) < 1e-8);
    for (std::size_t j = 0; j < i; ++j) {
      double dv = 0, dw = 0;
      for (std::size_t r = 0; r < 12; ++r) {
        dv += (v(r, i) - v(r, j)) * (v(r, i) - v(r, j));
        dw += (w(r, i) - w(r, j)) * (w(r, i) - w(r, j));
      }
      CHECK(std::abs(std::sqrt(dv) - std::sqrt(dw)) < 1e-8);
    }
  }
}

TEST_CASE("apply_map planar rotation and identity") {
  const double h = std::numbers::pi / 2;
  const OrthogonalMap rot(DenseMatrix::from_rows({{std::cos(h), -std::sin(h)}, {std::sin(h), std::cos(h)}}), {});
  const auto y = apply_map(rot, std::vector<double>{1.0, 0.0});
  CHECK(std::abs(y[0]) < 1e-12);
  CHECK(std::abs(y[1] - 1.0) < 1e-12);

  std::mt19937_64 rng(2);
  const DenseMatrix v = gaussian(5, 4, rng);
  CHECK(apply_map(OrthogonalMap(DenseMatrix::identity(5), {}), v) == v);
  CHECK_THROWS_AS(apply_map(rot, v), Error);
}

TEST_CASE("orthogonal map rejects non-orthogonal matrices") {
  try {
    OrthogonalMap m(DenseMatrix::from_rows({{1, 0}, {0, 1.001}}), {});
    FAIL("expected NotOrthogonal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOrthogonal);
  }
}

TEST_CASE("map levels round-trip through text") {
  for (MapLevel l : {MapLevel::Word, MapLevel::Sentence, MapLevel::Contextual})
    CHECK(parse_map_level(to_string(l)) == l);
  CHECK_THROWS_AS(parse_map_level("phrase"), Error);
}

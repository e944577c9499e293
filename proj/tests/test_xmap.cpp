#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "xlmap/error.hpp"
#include "xlmap/sent_embed.hpp"
#include "xlmap/xmap.hpp"

using namespace xlmap;
using testing::gaussian;
using testing::naive_multiply;

namespace {

MappingDictionary dict_of(DenseMatrix x, DenseMatrix y, DictProvenance p = DictProvenance::StaticDict) {
  MappingDictionary d;
  d.x = std::move(x);
  d.y = std::move(y);
  d.provenance = p;
  return d;
}

// Averages consecutive groups of `group` columns.
DenseMatrix group_means(const DenseMatrix& m, std::size_t group) {
  DenseMatrix out(m.rows(), m.cols() / group);
  for (std::size_t c = 0; c < out.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) {
      double s = 0;
      for (std::size_t k = 0; k < group; ++k) s += m(r, c * group + k);
      out(r, c) = s / static_cast<double>(group);
    }
  return out;
}

}  // namespace

TEST_CASE("policy defaults") {
  CHECK(default_policy(MapLevel::Word).normalize_dictionary);
  CHECK(default_policy(MapLevel::Contextual).normalize_dictionary);
  CHECK_FALSE(default_policy(MapLevel::Sentence).normalize_dictionary);
  CHECK(level_for(DictProvenance::ProbDict) == MapLevel::Word);
  CHECK(level_for(DictProvenance::Sentence) == MapLevel::Sentence);
}

TEST_CASE("learning from Y = X gives the identity") {
  std::mt19937_64 rng(1);
  const DenseMatrix x = gaussian(8, 30, rng);
  const auto map = learn_mapping(dict_of(x, x), default_policy(MapLevel::Word));
  CHECK(testing::max_diff(map.matrix(), DenseMatrix::identity(8)) < 1e-10);
}

TEST_CASE("word and sentence routes recover the same rotation") {
  std::mt19937_64 rng(2);
  const DenseMatrix q = testing::orthogonal(16, rng);
  const DenseMatrix x = gaussian(16, 200, rng);
  const DenseMatrix y = naive_multiply(q, x);
  const auto word = learn_mapping(dict_of(x, y), default_policy(MapLevel::Word));
  CHECK(testing::max_diff(word.matrix(), q) < 1e-8);
  CHECK(word.level() == MapLevel::Word);

  const auto sent = learn_mapping(dict_of(group_means(x, 5), group_means(y, 5), DictProvenance::Sentence),
                                  default_policy(MapLevel::Sentence));
  CHECK(testing::max_diff(sent.matrix(), q) < 1e-6);
  CHECK(sent.level() == MapLevel::Sentence);

  const DenseMatrix probe = gaussian(16, 100, rng);
  CHECK(testing::max_diff(apply_map(word, probe), apply_map(sent, probe)) < 1e-6);
}

TEST_CASE("zero columns are rejected only when normalizing") {
  DenseMatrix x = DenseMatrix::identity(3);
  x(2, 2) = 0.0;
  try {
    learn_mapping(dict_of(x, DenseMatrix::identity(3)), default_policy(MapLevel::Word));
    FAIL("expected ZeroNormColumn");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroNormColumn);
  }
  CHECK_NOTHROW(learn_mapping(dict_of(x, DenseMatrix::identity(3)), {false, MapLevel::Word}));
}

TEST_CASE("mapping word tables") {
  std::mt19937_64 rng(3);
  const EmbeddingTable t(testing::words("w", 50), gaussian(6, 50, rng));
  const OrthogonalMap id(DenseMatrix::identity(6), {"es", "en", MapLevel::Word});
  const auto same = map_words(id, t);
  CHECK(same.vectors() == t.vectors());
  CHECK(same.vocab() == t.vocab());
  CHECK(same.space_id() == "en");

  const OrthogonalMap r(testing::orthogonal(6, rng), {});
  const auto mapped = map_words(r, t);
  for (std::size_t c = 0; c < 50; ++c) {
    double a = 0, b = 0;
    for (std::size_t k = 0; k < 6; ++k) {
      a += t.vectors()(k, c) * t.vectors()(k, c);
      b += mapped.vectors()(k, c) * mapped.vectors()(k, c);
    }
    CHECK(std::abs(std::sqrt(a) - std::sqrt(b)) < 1e-8);
  }
  const auto direct = apply_map(r, t.lookup("w7"));
  CHECK(std::ranges::equal(direct, mapped.lookup("w7")));
  CHECK_THROWS_AS(map_words(OrthogonalMap(DenseMatrix::identity(5), {}), t), Error);
}

TEST_CASE("mapping word vectors then averaging equals averaging then mapping") {
  std::mt19937_64 rng(4);
  const EmbeddingTable t(testing::words("w", 30), gaussian(9, 30, rng));
  const DenseMatrix q = testing::orthogonal(9, rng);
  const auto map = learn_mapping(dict_of(t.vectors(), naive_multiply(q, t.vectors())), default_policy(MapLevel::Word));
  const auto mapped = map_words(map, t);
  std::uniform_int_distribution<int> len(1, 10), w(0, 29);
  for (int s = 0; s < 50; ++s) {
    Sentence sent;
    for (int k = len(rng); k > 0; --k) sent.push_back("w" + std::to_string(w(rng)));
    const auto a = embed_static(sent, mapped).vector;
    const auto b = apply_map(map, embed_static(sent, t).vector);
    for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
  }
}

TEST_CASE("pivot pairs") {
  std::mt19937_64 rng(5);
  const DenseMatrix q_es = testing::orthogonal(8, rng), q_de = testing::orthogonal(8, rng);
  const DenseMatrix x_es = gaussian(8, 64, rng), x_de = gaussian(8, 64, rng);
  const auto es = learn_mapping(dict_of(x_es, naive_multiply(q_es, x_es)), default_policy(MapLevel::Word), "es", "en");
  const auto de = learn_mapping(dict_of(x_de, naive_multiply(q_de, x_de)), default_policy(MapLevel::Word), "de", "en");
  const auto [a, b] = to_pivot_pair(es, de);
  CHECK(a.matrix() == es.matrix());
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix x = gaussian(8, 1, rng), y = gaussian(8, 1, rng);
    const double learned = testing::column_cosine(apply_map(a, x), 0, apply_map(b, y), 0);
    const double truth = testing::column_cosine(naive_multiply(q_es, x), 0, naive_multiply(q_de, y), 0);
    CHECK(std::abs(learned - truth) < 1e-6);
  }
  const OrthogonalMap fr(DenseMatrix::identity(8), {"de", "fr", MapLevel::Word});
  try {
    to_pivot_pair(es, fr);
    FAIL("expected PivotMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PivotMismatch);
  }
}

TEST_CASE("map files round-trip bit-exactly") {
  std::mt19937_64 rng(6);
  for (std::size_t d : {1, 3, 32}) {
    const OrthogonalMap m(testing::orthogonal(d, rng), {"es", "en", MapLevel::Contextual});
    std::stringstream buf;
    save_map(buf, m);
    const auto back = load_map(buf);
    CHECK(back.matrix() == m.matrix());
    CHECK(back.source_space() == "es");
    CHECK(back.target_space() == "en");
    CHECK(back.level() == MapLevel::Contextual);
  }
  std::istringstream bad("orthomap 2 word a b\n1 0\n0\n");
  CHECK_THROWS_AS(load_map(bad), Error);
}

TEST_CASE("token corpora map token by token") {
  std::mt19937_64 rng(7);
  TokenEmbeddingCorpus c;
  c.dim = 4;
  c.sentences.push_back({{"a", "b"}, gaussian(4, 2, rng)});
  c.sentences.push_back({{}, DenseMatrix(4, 0)});
  const OrthogonalMap m(testing::orthogonal(4, rng), {});
  const auto out = map_token_corpus(m, c);
  CHECK(out.sentences[0].vectors == apply_map(m, c.sentences[0].vectors));
  CHECK(out.sentences[1].tokens.empty());
}

#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "support.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/error.hpp"

using namespace xlmap;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

std::optional<std::size_t> line_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.line();
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("minimal word vector file") {
  std::istringstream in("2 3\ncat 1 0 0\ndog 0 1 0\n");
  const auto t = load_word_vectors(in);
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  REQUIRE(t.contains("dog"));
  CHECK(t.lookup("dog")[1] == 1.0);
  CHECK(t.lookup("cow").empty());
}

TEST_CASE("word vector format errors") {
  CHECK(code_of([] {
    std::istringstream in("2 3\ncat 1 0 0\ndog 0 1\n");
    load_word_vectors(in);
  }) == ErrorCode::DimensionMismatch);
  CHECK(line_of([] {
    std::istringstream in("2 3\ncat 1 0 0\ndog 0 1\n");
    load_word_vectors(in);
  }) == 3);
  CHECK(code_of([] {
    std::istringstream in("2 x\ncat 1 0 0\n");
    load_word_vectors(in);
  }) == ErrorCode::BadHeader);
  CHECK(code_of([] {
    std::istringstream in("1 2\ncat 1 nan\n");
    load_word_vectors(in);
  }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] {
    std::istringstream in("1 2\ncat 1 1x\n");
    load_word_vectors(in);
  }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] {
    std::istringstream in("3 2\ncat 1 1\n");
    load_word_vectors(in);
  }) == ErrorCode::BadHeader);
}

TEST_CASE("duplicate words keep the first vector") {
  std::istringstream in("3 1\na 1\nb 2\na 3\n");
  const auto t = load_word_vectors(in);
  CHECK(t.size() == 2);
  CHECK(t.duplicates_skipped() == 1);
  CHECK(t.lookup("a")[0] == 1.0);
}

TEST_CASE("10k word vector file round-trips bit-exactly") {
  std::mt19937_64 rng(1);
  const auto vocab = testing::words("w", 10000);
  DenseMatrix m = testing::gaussian(7, vocab.size(), rng, 10.0);
  m(0, 0) = 1e-300;
  m(1, 0) = -0.0;
  m(2, 0) = std::numeric_limits<double>::max();
  const EmbeddingTable t(vocab, m);
  std::stringstream buf;
  save_word_vectors(buf, t);
  const auto back = load_word_vectors(buf);
  CHECK(back.vocab() == t.vocab());
  CHECK(back.vectors() == t.vectors());
}

TEST_CASE("token embedding dumps") {
  std::istringstream in("2\n#S 0 1\nhello 0.5 0.5\n");
  const auto c = load_token_embeddings(in);
  REQUIRE(c.sentences.size() == 1);
  CHECK(c.sentences[0].tokens == Sentence{"hello"});
  CHECK(c.sentences[0].vectors(1, 0) == 0.5);

  CHECK(code_of([] {
    std::istringstream in("1\n#S 0 1\na 1\n#S 2 1\nb 1\n");
    load_token_embeddings(in);
  }) == ErrorCode::GapInSentenceIndex);
  CHECK(code_of([] {
    std::istringstream in("2\n#S 0 1\na 1\n");
    load_token_embeddings(in);
  }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] {
    std::istringstream in("two\n");
    load_token_embeddings(in);
  }) == ErrorCode::BadHeader);
}

TEST_CASE("100-sentence token dump round-trips") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  TokenEmbeddingCorpus c;
  c.dim = 5;
  for (std::size_t s = 0; s < 100; ++s) {
    TokenEmbeddingCorpus::Block b;
    b.tokens = testing::words("tok", len(rng));
    b.vectors = testing::gaussian(5, b.tokens.size(), rng);
    c.sentences.push_back(std::move(b));
  }
  std::stringstream buf;
  save_token_embeddings(buf, c);
  const auto back = load_token_embeddings(buf);
  REQUIRE(back.sentences.size() == 100);
  for (std::size_t s = 0; s < 100; ++s) {
    CHECK(back.sentences[s].tokens == c.sentences[s].tokens);
    CHECK(back.sentences[s].vectors == c.sentences[s].vectors);
  }
}

TEST_CASE("parallel corpora") {
  {
    std::istringstream s("a b\nc\nd e f\n"), t("x\ny z\nw\n");
    const auto c = load_parallel(s, t);
    CHECK(c.size() == 3);
    CHECK(c.target[1] == Sentence{"y", "z"});
  }
  {
    std::istringstream s("a\nb\nc\n"), t("x\ny\n");
    CHECK_THROWS_AS(load_parallel(s, t), Error);
  }
  {
    std::istringstream s("a\nb\nc\n"), t("x\n  \nz\n");
    const auto c = load_parallel(s, t);
    CHECK(c.size() == 2);
    CHECK(c.dropped_pairs == 1);
    CHECK(c.line_numbers == std::vector<std::size_t>{0, 2});
    CHECK(c.prefix(1).size() == 1);
    CHECK_THROWS_AS(c.prefix(3), Error);
  }
}

TEST_CASE("frequency counts") {
  const std::vector<Sentence> one{tokenize("a a b")};
  const auto f = count_frequencies(one);
  CHECK(f.count("a") == 2);
  CHECK(f.count("b") == 1);
  CHECK(f.total == 3);

  const std::vector<Sentence> two{tokenize("a a b"), tokenize("a a b")};
  const auto g = count_frequencies(two);
  CHECK(g.count("a") == 4);
  CHECK(g.total == 6);

  CHECK(code_of([] { count_frequencies(std::vector<Sentence>{}); }) == ErrorCode::EmptyCorpus);
}

TEST_CASE("frequency counts match a naive recount") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 20), word(0, 300);
  std::vector<Sentence> corpus;
  for (int s = 0; s < 1000; ++s) {
    Sentence sent;
    for (int k = len(rng); k > 0; --k) sent.push_back("w" + std::to_string(word(rng)));
    corpus.push_back(sent);
  }
  std::map<std::string, std::uint64_t> naive;
  std::uint64_t total = 0;
  for (const auto& s : corpus)
    for (const auto& w : s) {
      ++naive[w];
      ++total;
    }
  const auto f = count_frequencies(corpus);
  CHECK(f.total == total);
  CHECK(f.counts.size() == naive.size());
  for (const auto& [w, n] : naive) CHECK(f.count(w) == n);

  std::stringstream buf;
  save_frequencies(buf, f);
  const auto back = load_frequencies(buf);
  CHECK(back.total == f.total);
  CHECK(back.counts == f.counts);
}

TEST_CASE("double formatting round-trips") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(*parse_double(format_double(v)) == v);
    CHECK(*parse_double(format_double17(v)) == v);
  }
  CHECK_FALSE(parse_double("1.5x").has_value());
  CHECK(std::isnan(*parse_double("nan")));
}

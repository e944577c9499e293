#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "xlmap/dict_build.hpp"
#include "xlmap/error.hpp"
#include "xlmap/sent_embed.hpp"

using namespace xlmap;

namespace {

EmbeddingTable table(const std::vector<std::string>& vocab, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return EmbeddingTable(vocab, testing::gaussian(d, vocab.size(), rng));
}

TokenEmbeddingCorpus token_corpus(const std::vector<std::size_t>& lengths, std::size_t d, std::mt19937_64& rng) {
  TokenEmbeddingCorpus c;
  c.dim = d;
  for (std::size_t n : lengths) {
    TokenEmbeddingCorpus::Block b;
    b.tokens = testing::words("t", n);
    b.vectors = testing::gaussian(d, n, rng);
    c.sentences.push_back(std::move(b));
  }
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("static pair files") {
  std::istringstream in("gato cat\nperro dog\n");
  CHECK(load_static_pairs(in).size() == 2);
  std::istringstream dup("gato cat\ngato cat\n\n");
  const auto d = load_static_pairs(dup);
  CHECK(d.size() == 1);
  CHECK(d.duplicates_removed() == 1);
  std::istringstream bad("gato cat\nperro\n");
  CHECK(code_of([&] { load_static_pairs(bad); }) == ErrorCode::MalformedLine);
}

TEST_CASE("5k-line dictionary keeps all distinct pairs") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> w(0, 2999);
  std::ostringstream text;
  std::set<std::pair<int, int>> distinct;
  for (int i = 0; i < 5000; ++i) {
    const int a = w(rng), b = w(rng) % 3;
    distinct.insert({a, b});
    text << "s" << a << " t" << b << '\n';
  }
  std::istringstream in(text.str());
  const auto pairs = load_static_pairs(in);
  CHECK(pairs.size() == distinct.size());
  CHECK(pairs.size() + pairs.duplicates_removed() == 5000);
}

TEST_CASE("probability pairs need a unique maximum") {
  const auto t = TranslationTable::from_entries(
      {{"a", "x", 0.6}, {"a", "y", 0.4}, {"b", "x", 0.5}, {"b", "y", 0.5}, {"<null>", "x", 1.0}});
  const auto pairs = extract_prob_pairs(t);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs.pairs()[0] == std::pair<std::string, std::string>{"a", "x"});
}

TEST_CASE("probability pairs from an identity-corpus table") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(2, 6), word(0, 19);
  ParallelCorpus c;
  for (int s = 0; s < 400; ++s) {
    Sentence sent;
    for (int k = len(rng); k > 0; --k) sent.push_back("w" + std::to_string(word(rng)));
    c.source.push_back(sent);
    c.target.push_back(sent);
    c.line_numbers.push_back(s);
  }
  const auto pairs = extract_prob_pairs(train_ibm1(c, {.iterations = 10}));
  std::set<std::string> sources;
  int identity = 0;
  for (const auto& [s, t] : pairs.pairs()) {
    CHECK(sources.insert(s).second);
    identity += s == t;
  }
  CHECK(identity >= 19);
}

TEST_CASE("pairs to dictionary") {
  const auto src = table({"a", "b", "c"}, 4, 1);
  const auto tgt = table({"x", "y"}, 4, 2);
  WordPairList pairs;
  pairs.add("a", "x");
  pairs.add("c", "y");
  pairs.add("b", "z");
  const auto d = pairs_to_dictionary(pairs, src, tgt);
  CHECK(d.size() == 2);
  CHECK(d.skipped == 1);
  for (std::size_t r = 0; r < 4; ++r) {
    CHECK(d.x(r, 0) == src.lookup("a")[r]);
    CHECK(d.x(r, 1) == src.lookup("c")[r]);
    CHECK(d.y(r, 1) == tgt.lookup("y")[r]);
  }
  WordPairList none;
  none.add("q", "x");
  CHECK(code_of([&] { pairs_to_dictionary(none, src, tgt); }) == ErrorCode::EmptyDictionary);
  CHECK(code_of([&] { pairs_to_dictionary(pairs, src, table({"x"}, 3, 4)); }) == ErrorCode::DimMismatch);
}

TEST_CASE("contextual dictionary one-to-one filter") {
  std::mt19937_64 rng(5);
  const auto src = token_corpus({3, 3}, 4, rng);
  const auto tgt = token_corpus({3, 3}, 4, rng);
  {
    const auto d = build_contextual_dictionary(src, tgt, {{0, 0, 0}});
    CHECK(d.size() == 1);
    for (std::size_t r = 0; r < 4; ++r) CHECK(d.x(r, 0) == src.sentences[0].vectors(r, 0));
  }
  // source 0 links twice in sentence 0: both links dropped, sentence 1 survives
  const auto d = build_contextual_dictionary(src, tgt, {{0, 0, 0}, {0, 0, 1}, {0, 2, 2}, {1, 1, 0}});
  CHECK(d.size() == 2);
  CHECK(d.labels[0].starts_with("0\t2\t2"));
  CHECK(d.labels[1].starts_with("1\t1\t0"));
  CHECK(code_of([&] { build_contextual_dictionary(src, tgt, {{0, 0, 0}, {0, 0, 1}}); }) ==
        ErrorCode::EmptyDictionary);
  CHECK(code_of([&] { build_contextual_dictionary(src, tgt, {{2, 0, 0}}); }) ==
        ErrorCode::SentenceIndexOutOfRange);
}

TEST_CASE("contextual one-to-one filter is symmetric") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pos(0, 5);
  const std::vector<std::size_t> lengths(40, 6);
  const auto src = token_corpus(lengths, 3, rng);
  const auto tgt = token_corpus(lengths, 3, rng);
  std::vector<AlignmentLink> links, flipped;
  for (std::size_t s = 0; s < 40; ++s)
    for (int k = 0; k < 5; ++k) {
      const AlignmentLink l{s, pos(rng), pos(rng)};
      if (std::ranges::find(links, l) != links.end()) continue;
      links.push_back(l);
      flipped.push_back({s, l.target_pos, l.source_pos});
    }
  const auto a = build_contextual_dictionary(src, tgt, links);
  const auto b = build_contextual_dictionary(tgt, src, flipped);
  REQUIRE(a.size() == b.size());
  std::set<std::vector<double>> ca, cb;
  for (std::size_t c = 0; c < a.size(); ++c) {
    std::vector<double> v(a.x.col(c).begin(), a.x.col(c).end());
    v.insert(v.end(), a.y.col(c).begin(), a.y.col(c).end());
    ca.insert(v);
    std::vector<double> w(b.y.col(c).begin(), b.y.col(c).end());
    w.insert(w.end(), b.x.col(c).begin(), b.x.col(c).end());
    cb.insert(w);
  }
  CHECK(ca == cb);
}

TEST_CASE("contextual cap keeps a corpus-order prefix") {
  std::mt19937_64 rng(7);
  const std::vector<std::size_t> lengths(200, 5);
  const auto src = token_corpus(lengths, 2, rng);
  const auto tgt = token_corpus(lengths, 2, rng);
  std::vector<AlignmentLink> links;
  for (std::size_t s = 0; s < 200; ++s)
    for (std::size_t i = 0; i < 5; ++i) links.push_back({s, i, (i + s) % 5});
  const auto full = build_contextual_dictionary(src, tgt, links);
  CHECK(full.size() == 1000);
  for (std::size_t cap : {1, 7, 333, 999, 1000, 5000}) {
    const auto d = build_contextual_dictionary(src, tgt, links, cap);
    CHECK(d.size() == std::min<std::size_t>(cap, 1000));
    CHECK(d.x == full.x.column_range(0, d.size()));
    CHECK(d.y == full.y.column_range(0, d.size()));
  }
}

TEST_CASE("sentence dictionary") {
  std::mt19937_64 rng(8);
  const DenseMatrix v = testing::gaussian(5, 1, rng);
  const auto d = build_sentence_dictionary(v, v);
  CHECK(d.size() == 1);
  CHECK(d.provenance == DictProvenance::Sentence);
  CHECK(code_of([&] { build_sentence_dictionary(DenseMatrix(3, 5), DenseMatrix(3, 4)); }) ==
        ErrorCode::ShapeMismatch);
}

TEST_CASE("sentence dictionary columns equal the batch embeddings") {
  const auto vocab_s = testing::words("s", 50), vocab_t = testing::words("t", 50);
  const auto src = table(vocab_s, 6, 9), tgt = table(vocab_t, 6, 10);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 9), word(0, 49);
  std::vector<Sentence> ss, ts;
  for (int s = 0; s < 100; ++s) {
    Sentence a, b;
    for (int k = len(rng); k > 0; --k) {
      const int w = word(rng);
      a.push_back(vocab_s[w]);
      b.push_back(vocab_t[w]);
    }
    ss.push_back(a);
    ts.push_back(b);
  }
  const auto bs = embed_corpus(ss, src), bt = embed_corpus(ts, tgt);
  const auto d = build_sentence_dictionary(bs.embeddings, bt.embeddings);
  CHECK(d.size() == 100);
  for (std::size_t c = 0; c < 100; ++c) {
    const auto e = embed_static(ss[c], src);
    CHECK(std::equal(e.vector.begin(), e.vector.end(), d.x.col(c).begin()));
  }
}

TEST_CASE("dictionary file round trip") {
  std::mt19937_64 rng(12);
  MappingDictionary d;
  d.provenance = DictProvenance::Contextual;
  d.x = testing::gaussian(4, 9, rng);
  d.y = testing::gaussian(4, 9, rng);
  std::stringstream buf;
  save_dictionary(buf, d);
  const auto back = load_dictionary(buf);
  CHECK(back.provenance == d.provenance);
  CHECK(back.x == d.x);
  CHECK(back.y == d.y);
}

TEST_CASE("audit export") {
  const auto src = table({"a"}, 2, 1), tgt = table({"x"}, 2, 2);
  WordPairList pairs;
  pairs.add("a", "x");
  std::ostringstream out;
  write_dictionary_audit(out, pairs_to_dictionary(pairs, src, tgt));
  CHECK(out.str() == "index\tsource\ttarget\n0\ta\tx\n");
}

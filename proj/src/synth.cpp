#include "xlmap/synth.hpp"

#include <cmath>
#include <string>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap {

DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (double& v : m.data()) v = scale * normal(rng);
  return m;
}

DenseMatrix random_orthogonal(std::size_t d, std::mt19937_64& rng) {
  for (;;) {
    DenseMatrix q = random_gaussian(d, d, rng);
    bool ok = true;
    for (std::size_t c = 0; c < d && ok; ++c) {
      auto v = q.col(c);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t p = 0; p < c; ++p) {
          const double proj = kernels::detail::dot(q.col(p), v);
          for (std::size_t r = 0; r < d; ++r) v[r] -= proj * q(r, p);
        }
      }
      const double norm = std::sqrt(kernels::detail::dot(v, v));
      if (norm < 1e-6) ok = false;
      for (double& x : v) x /= norm;
    }
    if (ok) return q;
  }
}

namespace {

std::string word_name(char prefix, std::size_t id) { return prefix + std::to_string(id); }

struct Generated {
  ParallelCorpus text;
  TokenEmbeddingCorpus src_ctx;
  TokenEmbeddingCorpus tgt_ctx;
};

Generated generate_corpus(std::size_t sentences, const SynthOptions& opt, const DenseMatrix& base,
                          const DenseMatrix& q, std::discrete_distribution<std::size_t>& words,
                          std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> length(opt.min_length, opt.max_length);
  std::normal_distribution<double> normal(0.0, 1.0);
  const DenseMatrix mapped = kernels::multiply(q, base, kernels::Exec::Serial);
  Generated g;
  g.src_ctx.dim = g.tgt_ctx.dim = opt.dim;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t len = length(rng);
    Sentence src;
    Sentence tgt;
    TokenEmbeddingCorpus::Block sb{{}, DenseMatrix(opt.dim, len)};
    TokenEmbeddingCorpus::Block tb{{}, DenseMatrix(opt.dim, len)};
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t w = words(rng);
      src.push_back(word_name('s', w));
      tgt.push_back(word_name('t', w));
      for (std::size_t k = 0; k < opt.dim; ++k) sb.vectors(k, t) = base(k, w) + opt.noise * normal(rng);
      for (std::size_t k = 0; k < opt.dim; ++k) tb.vectors(k, t) = mapped(k, w) + opt.noise * normal(rng);
    }
    sb.tokens = src;
    tb.tokens = tgt;
    g.text.source.push_back(std::move(src));
    g.text.target.push_back(std::move(tgt));
    g.text.line_numbers.push_back(s);
    g.src_ctx.sentences.push_back(std::move(sb));
    g.tgt_ctx.sentences.push_back(std::move(tb));
  }
  return g;
}

}  // namespace

SyntheticWorld make_synthetic_world(const SynthOptions& opt) {
  if (opt.dim == 0 || opt.vocab == 0 || opt.min_length == 0 || opt.min_length > opt.max_length ||
      opt.noise < 0.0 || opt.train_sentences == 0 || opt.test_sentences == 0)
    throw Error(ErrorCode::InvalidParameter, "invalid synthetic world options");

  std::mt19937_64 rng(opt.seed);
  SyntheticWorld world;
  world.rotation = random_orthogonal(opt.dim, rng);
  // unit-scale base vectors: E‖x‖² = 1
  const DenseMatrix base = random_gaussian(opt.dim, opt.vocab, rng, 1.0 / std::sqrt(static_cast<double>(opt.dim)));

  DenseMatrix tgt = kernels::multiply(world.rotation, base, kernels::Exec::Serial);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : tgt.data()) v += opt.noise * normal(rng);

  std::vector<std::string> src_vocab;
  std::vector<std::string> tgt_vocab;
  for (std::size_t w = 0; w < opt.vocab; ++w) {
    src_vocab.push_back(word_name('s', w));
    tgt_vocab.push_back(word_name('t', w));
    world.lexicon.add(src_vocab.back(), tgt_vocab.back());
  }
  world.src_vectors = EmbeddingTable(std::move(src_vocab), base, "src");
  world.tgt_vectors = EmbeddingTable(std::move(tgt_vocab), std::move(tgt), "tgt");

  std::vector<double> zipf(opt.vocab);
  for (std::size_t w = 0; w < opt.vocab; ++w) zipf[w] = 1.0 / std::pow(static_cast<double>(w + 1), opt.zipf);
  std::discrete_distribution<std::size_t> words(zipf.begin(), zipf.end());

  auto train = generate_corpus(opt.train_sentences, opt, base, world.rotation, words, rng);
  auto test = generate_corpus(opt.test_sentences, opt, base, world.rotation, words, rng);
  world.train = std::move(train.text);
  world.src_train_ctx = std::move(train.src_ctx);
  world.tgt_train_ctx = std::move(train.tgt_ctx);
  world.test = std::move(test.text);
  world.src_test_ctx = std::move(test.src_ctx);
  world.tgt_test_ctx = std::move(test.tgt_ctx);
  world.src_train_ctx.space_id = world.src_test_ctx.space_id = "src";
  world.tgt_train_ctx.space_id = world.tgt_test_ctx.space_id = "tgt";
  return world;
}

}  // namespace xlmap

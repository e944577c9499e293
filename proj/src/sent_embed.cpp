#include "xlmap/sent_embed.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap {

double SifWeights::weight(std::string_view token) const {
  const auto it = weights.find(std::string(token));
  return it == weights.end() ? default_weight : it->second;
}

SifWeights sif_weights(const FrequencyTable& freqs, double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidParameter, "SIF parameter a must be > 0");
  if (freqs.total == 0) throw Error(ErrorCode::EmptyCorpus, "frequency table is empty");
  SifWeights w;
  w.a = a;
  const double total = static_cast<double>(freqs.total);
  for (const auto& [token, count] : freqs.counts)
    w.weights.emplace(token, a / (a + static_cast<double>(count) / total));
  return w;
}

SentenceEmbedding embed_static(std::span<const std::string> sentence, const EmbeddingTable& table,
                               const SifWeights* weights) {
  if (sentence.empty()) throw Error(ErrorCode::EmptySentence, "cannot embed an empty sentence");
  SentenceEmbedding out;
  out.vector.assign(table.dim(), 0.0);
  out.total_tokens = sentence.size();
  double mass = 0.0;
  for (const auto& token : sentence) {
    const auto v = table.lookup(token);
    if (v.empty()) continue;
    const double w = weights ? weights->weight(token) : 1.0;
    for (std::size_t k = 0; k < v.size(); ++k) out.vector[k] += w * v[k];
    mass += w;
    ++out.covered_tokens;
  }
  if (out.covered_tokens == 0) throw Error(ErrorCode::AllTokensOOV, "no token of the sentence is in vocabulary");
  for (double& x : out.vector) x /= mass;
  return out;
}

SentenceEmbedding embed_contextual(const DenseMatrix& token_vectors) {
  if (token_vectors.cols() == 0) throw Error(ErrorCode::EmptySentence, "sentence has no token vectors");
  SentenceEmbedding out;
  out.vector.assign(token_vectors.rows(), 0.0);
  for (std::size_t c = 0; c < token_vectors.cols(); ++c) {
    const auto v = token_vectors.col(c);
    for (std::size_t k = 0; k < v.size(); ++k) out.vector[k] += v[k];
  }
  const double n = static_cast<double>(token_vectors.cols());
  for (double& x : out.vector) x /= n;
  out.covered_tokens = out.total_tokens = token_vectors.cols();
  return out;
}

namespace {

template <typename EmbedOne>
BatchEmbeddings embed_batch(std::size_t n, std::size_t dim, EmbedOne embed_one) {
  std::vector<std::optional<std::vector<double>>> rows(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = embed_one(static_cast<std::size_t>(i)).vector;
    } catch (const Error&) {
      // AllTokensOOV / EmptySentence: the sentence goes to the dropped list
    }
  }
  BatchEmbeddings out;
  for (std::size_t i = 0; i < n; ++i) (rows[i] ? out.kept : out.dropped).push_back(i);
  out.embeddings = DenseMatrix(dim, out.kept.size());
  for (std::size_t c = 0; c < out.kept.size(); ++c)
    std::ranges::copy(*rows[out.kept[c]], out.embeddings.col(c).begin());
  return out;
}

}  // namespace

BatchEmbeddings embed_corpus(std::span<const Sentence> sentences, const EmbeddingTable& table,
                             const SifWeights* weights) {
  if (sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "no sentences to embed");
  return embed_batch(sentences.size(), table.dim(),
                     [&](std::size_t i) { return embed_static(sentences[i], table, weights); });
}

BatchEmbeddings embed_corpus(const TokenEmbeddingCorpus& corpus) {
  if (corpus.sentences.empty()) throw Error(ErrorCode::EmptyCorpus, "no sentences to embed");
  return embed_batch(corpus.sentences.size(), corpus.dim,
                     [&](std::size_t i) { return embed_contextual(corpus.sentences[i].vectors); });
}

void remove_common_component(DenseMatrix& embeddings) {
  if (embeddings.cols() == 0) return;
  const DenseMatrix gram = kernels::cross_gram(embeddings, embeddings);
  const SvdResult svd = thin_svd(gram);
  const auto u = svd.u.col(0);
  for (std::size_t c = 0; c < embeddings.cols(); ++c) {
    auto v = embeddings.col(c);
    const double p = kernels::detail::dot(u, v);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= p * u[k];
  }
}

void save_sentence_embeddings(std::ostream& out, const BatchEmbeddings& batch) {
  TokenEmbeddingCorpus dump;
  dump.dim = batch.embeddings.rows();
  dump.sentences.resize(batch.corpus_size());
  for (auto& block : dump.sentences) block.vectors = DenseMatrix(dump.dim, 0);
  for (std::size_t c = 0; c < batch.kept.size(); ++c) {
    auto& block = dump.sentences[batch.kept[c]];
    block.tokens = {std::string(kSentenceToken)};
    block.vectors = batch.embeddings.column_range(c, 1);
  }
  save_token_embeddings(out, dump);
}

BatchEmbeddings load_sentence_embeddings(std::istream& in) {
  const TokenEmbeddingCorpus dump = load_token_embeddings(in);
  BatchEmbeddings out;
  for (std::size_t i = 0; i < dump.sentences.size(); ++i) {
    const auto n = dump.sentences[i].tokens.size();
    if (n > 1)
      throw Error(ErrorCode::MalformedLine, "sentence block " + std::to_string(i) +
                                                " holds more than one embedding");
    (n == 1 ? out.kept : out.dropped).push_back(i);
  }
  out.embeddings = DenseMatrix(dump.dim, out.kept.size());
  for (std::size_t c = 0; c < out.kept.size(); ++c)
    std::ranges::copy(dump.sentences[out.kept[c]].vectors.col(0), out.embeddings.col(c).begin());
  return out;
}

}  // namespace xlmap

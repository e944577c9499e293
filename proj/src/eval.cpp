#include "xlmap/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <unordered_map>

#include "xlmap/error.hpp"

namespace xlmap {

RetrievalReport retrieval_accuracy(const DenseMatrix& src, const DenseMatrix& tgt, std::size_t dropped,
                                   std::string source_space, std::string target_space,
                                   kernels::Exec exec) {
  if (src.rows() != tgt.rows() || src.cols() != tgt.cols())
    throw Error(ErrorCode::ShapeMismatch, "retrieval matrices differ in shape");
  if (src.cols() == 0) throw Error(ErrorCode::EmptyCorpus, "no pairs to evaluate");

  RetrievalReport report;
  report.source_space = std::move(source_space);
  report.target_space = std::move(target_space);
  report.n = src.cols();
  report.dropped = dropped;

  const auto src_norms = kernels::detail::column_norms(src);
  const auto tgt_norms = kernels::detail::column_norms(tgt);
  for (std::size_t i = 0; i < report.n; ++i)
    if (src_norms[i] == 0.0 || tgt_norms[i] == 0.0) report.zero_vectors.push_back(i);

  const auto nearest = kernels::cosine_top_k(src, tgt, 1, exec);
  for (std::size_t i = 0; i < report.n; ++i)
    if (!nearest[i].empty() && nearest[i].front() == i) ++report.correct;
  report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.n);
  return report;
}

PrecisionReport word_translation_precision(const EmbeddingTable& mapped_src, const EmbeddingTable& tgt,
                                           const WordPairList& gold, std::size_t k,
                                           kernels::Exec exec) {
  if (gold.empty()) throw Error(ErrorCode::EmptyGold, "gold dictionary is empty");
  if (k == 0) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  if (mapped_src.dim() != tgt.dim())
    throw Error(ErrorCode::DimMismatch, "source and target tables differ in dimension");

  // group gold targets by source word, in first-appearance order
  std::vector<std::string> sources;
  std::unordered_map<std::string, std::vector<std::size_t>> targets;
  for (const auto& [s, t] : gold.pairs()) {
    auto [it, inserted] = targets.try_emplace(s);
    if (inserted) sources.push_back(s);
    if (const auto ti = tgt.find(t)) it->second.push_back(*ti);
  }

  PrecisionReport report;
  report.k = k;
  std::vector<std::size_t> query_rows;
  std::vector<const std::vector<std::size_t>*> query_gold;
  for (const auto& s : sources) {
    const auto si = mapped_src.find(s);
    const auto& g = targets.at(s);
    if (!si || g.empty()) {
      ++report.skipped_oov;
      continue;
    }
    query_rows.push_back(*si);
    query_gold.push_back(&g);
  }
  report.evaluated = query_rows.size();
  if (report.evaluated == 0) return report;

  DenseMatrix queries(mapped_src.dim(), query_rows.size());
  for (std::size_t q = 0; q < query_rows.size(); ++q)
    std::ranges::copy(mapped_src.vectors().col(query_rows[q]), queries.col(q).begin());
  const auto neighbours = kernels::cosine_top_k(queries, tgt.vectors(), k, exec);
  for (std::size_t q = 0; q < neighbours.size(); ++q) {
    const auto& g = *query_gold[q];
    const bool hit = std::ranges::any_of(neighbours[q], [&](std::size_t j) {
      return std::ranges::find(g, j) != g.end();
    });
    if (hit) ++report.correct;
  }
  report.precision = static_cast<double>(report.correct) / static_cast<double>(report.evaluated);
  return report;
}

std::vector<ScoredPair> load_similarity_gold(std::istream& in) {
  std::vector<ScoredPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
      fields.push_back(line.substr(start, tab - start));
    fields.push_back(line.substr(start));
    const auto score = fields.size() == 3 ? parse_double(fields[2]) : std::nullopt;
    if (!score || !std::isfinite(*score)) {
      if (line_no == 1 && fields.size() == 3) continue;
      throw Error(ErrorCode::MalformedLine, line_no, "expected 'word_a<TAB>word_b<TAB>score'");
    }
    out.push_back({fields[0], fields[1], *score});
  }
  return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(kernels::detail::dot(a, a));
  const double nb = std::sqrt(kernels::detail::dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::detail::dot(a, b) / (na * nb);
}

CorrelationReport similarity_correlation(std::span<const ScoredPair> pairs, const EmbeddingTable& space_a,
                                         const EmbeddingTable& space_b) {
  if (space_a.dim() != space_b.dim())
    throw Error(ErrorCode::DimMismatch, "similarity spaces differ in dimension");
  CorrelationReport report;
  std::vector<double> human;
  std::vector<double> model;
  for (const auto& p : pairs) {
    const auto va = space_a.lookup(p.a);
    const auto vb = space_b.lookup(p.b);
    if (va.empty() || vb.empty()) {
      ++report.skipped_oov;
      continue;
    }
    human.push_back(p.score);
    model.push_back(cosine(va, vb));
  }
  report.n = human.size();
  if (report.n < 2) throw Error(ErrorCode::TooFewPairs, "fewer than two scorable pairs");
  try {
    report.pearson = pearson(model, human);
    report.spearman = spearman(model, human);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConstantInput)
      throw Error(ErrorCode::ConstantScores, "correlation undefined for constant scores");
    throw;
  }
  const double p = report.pearson;
  const double q = report.spearman;
  if (p > 0.0 && q > 0.0) report.harmonic_mean = 2.0 * p * q / (p + q);
  return report;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::ShapeMismatch, "correlation inputs differ in length");
  if (xs.size() < 2) throw Error(ErrorCode::TooFewPairs, "correlation needs at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ConstantInput, "constant input has no correlation");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t l, std::size_t r) { return xs[l] < xs[r]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::ShapeMismatch, "correlation inputs differ in length");
  return pearson(fractional_ranks(xs), fractional_ranks(ys));
}

}  // namespace xlmap

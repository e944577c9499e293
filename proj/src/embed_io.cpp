#include "xlmap/embed_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "xlmap/error.hpp"

namespace xlmap {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::optional<std::size_t> parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

// Parses `dim` floats from fields[first..] into out; throws with the line number.
void parse_vector(const std::vector<std::string_view>& fields, std::size_t first, std::size_t dim,
                  std::size_t line_no, std::span<double> out) {
  if (fields.size() - first != dim)
    throw Error(ErrorCode::DimensionMismatch, line_no,
                "expected " + std::to_string(dim) + " values, found " +
                    std::to_string(fields.size() - first));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto v = parse_double(fields[first + k]);
    if (!v) throw Error(ErrorCode::NonFiniteValue, line_no, "unparsable value '" + std::string(fields[first + k]) + "'");
    if (!std::isfinite(*v)) throw Error(ErrorCode::NonFiniteValue, line_no, "NaN/Inf value");
    out[k] = *v;
  }
}

void write_vector(std::ostream& out, std::span<const double> v) {
  for (double x : v) out << ' ' << format_double(x);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_double17(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
  return v;
}

Sentence tokenize(std::string_view line) {
  Sentence out;
  for (auto f : split_fields(line)) out.emplace_back(f);
  return out;
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> vocab, DenseMatrix vectors,
                               std::string space_id)
    : space_id_(std::move(space_id)) {
  if (vocab.size() != vectors.cols())
    throw Error(ErrorCode::ShapeMismatch, "vocabulary size differs from vector count");
  if (!vectors.all_finite()) throw Error(ErrorCode::NonFinite, "embedding table has NaN/Inf");
  std::vector<std::size_t> keep;
  keep.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (index_.contains(vocab[i])) {
      ++duplicates_skipped_;
      continue;
    }
    index_.emplace(vocab[i], keep.size());
    keep.push_back(i);
  }
  if (keep.size() == vocab.size()) {
    vocab_ = std::move(vocab);
    vectors_ = std::move(vectors);
    return;
  }
  vectors_ = DenseMatrix(vectors.rows(), keep.size());
  vocab_.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    vocab_.push_back(std::move(vocab[keep[k]]));
    std::ranges::copy(vectors.col(keep[k]), vectors_.col(k).begin());
  }
}

std::optional<std::size_t> EmbeddingTable::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingTable::lookup(std::string_view token) const {
  const auto i = find(token);
  if (!i) return {};
  return vectors_.col(*i);
}

EmbeddingTable load_word_vectors(std::istream& in, std::string space_id) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, 1, "empty vector file");
  ++line_no;
  const auto header = split_fields(line);
  if (header.size() != 2) throw Error(ErrorCode::BadHeader, line_no, "expected '<vocab_count> <dim>'");
  const auto count = parse_count(header[0]);
  const auto dim = parse_count(header[1]);
  if (!count || !dim || *dim == 0)
    throw Error(ErrorCode::BadHeader, line_no, "expected '<vocab_count> <dim>'");

  std::vector<std::string> vocab;
  vocab.reserve(*count);
  std::vector<double> data;
  data.reserve(*count * *dim);
  while (vocab.size() < *count && std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    vocab.emplace_back(fields[0]);
    data.resize(data.size() + *dim);
    parse_vector(fields, 1, *dim, line_no, std::span<double>(data).last(*dim));
  }
  if (vocab.size() != *count)
    throw Error(ErrorCode::BadHeader, line_no,
                "header announces " + std::to_string(*count) + " words, file has " +
                    std::to_string(vocab.size()));
  const std::size_t n = vocab.size();
  return EmbeddingTable(std::move(vocab), DenseMatrix(*dim, n, std::move(data)), std::move(space_id));
}

void save_word_vectors(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.vocab()[i];
    write_vector(out, table.vectors().col(i));
    out << '\n';
  }
}

TokenEmbeddingCorpus load_token_embeddings(std::istream& in, std::string space_id) {
  TokenEmbeddingCorpus corpus;
  corpus.space_id = std::move(space_id);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, 1, "empty token embedding dump");
  ++line_no;
  const auto header = split_fields(line);
  const auto dim = header.size() == 1 ? parse_count(header[0]) : std::nullopt;
  if (!dim || *dim == 0) throw Error(ErrorCode::BadHeader, line_no, "expected '<dim>'");
  corpus.dim = *dim;

  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields[0] != "#S" || fields.size() != 3)
      throw Error(ErrorCode::MalformedLine, line_no, "expected '#S <sentence_index> <token_count>'");
    const auto index = parse_count(fields[1]);
    const auto tokens = parse_count(fields[2]);
    if (!index || !tokens)
      throw Error(ErrorCode::MalformedLine, line_no, "expected '#S <sentence_index> <token_count>'");
    if (*index != corpus.sentences.size())
      throw Error(ErrorCode::GapInSentenceIndex, line_no,
                  "expected sentence " + std::to_string(corpus.sentences.size()) + ", found " +
                      std::to_string(*index));
    TokenEmbeddingCorpus::Block block{Sentence{}, DenseMatrix(*dim, *tokens)};
    block.tokens.reserve(*tokens);
    for (std::size_t t = 0; t < *tokens; ++t) {
      if (!std::getline(in, line))
        throw Error(ErrorCode::MalformedLine, line_no, "dump ends inside a sentence block");
      ++line_no;
      const auto tf = split_fields(line);
      if (tf.empty()) throw Error(ErrorCode::MalformedLine, line_no, "empty token line");
      block.tokens.emplace_back(tf[0]);
      parse_vector(tf, 1, *dim, line_no, block.vectors.col(t));
    }
    corpus.sentences.push_back(std::move(block));
  }
  return corpus;
}

void save_token_embeddings(std::ostream& out, const TokenEmbeddingCorpus& corpus) {
  out << corpus.dim << '\n';
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& block = corpus.sentences[s];
    out << "#S " << s << ' ' << block.tokens.size() << '\n';
    for (std::size_t t = 0; t < block.tokens.size(); ++t) {
      out << block.tokens[t];
      write_vector(out, block.vectors.col(t));
      out << '\n';
    }
  }
}

std::vector<Sentence> load_sentences(std::istream& in) {
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(tokenize(line));
  return out;
}

ParallelCorpus load_parallel(std::istream& source, std::istream& target) {
  auto src = load_sentences(source);
  auto tgt = load_sentences(target);
  if (src.size() != tgt.size())
    throw Error(ErrorCode::LineCountMismatch, std::to_string(src.size()) + " source lines vs " +
                                                  std::to_string(tgt.size()) + " target lines");
  ParallelCorpus corpus;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].empty() || tgt[i].empty()) {
      ++corpus.dropped_pairs;
      continue;
    }
    corpus.source.push_back(std::move(src[i]));
    corpus.target.push_back(std::move(tgt[i]));
    corpus.line_numbers.push_back(i);
  }
  return corpus;
}

ParallelCorpus corpus_from_token_embeddings(const TokenEmbeddingCorpus& source,
                                            const TokenEmbeddingCorpus& target) {
  if (source.sentences.size() != target.sentences.size())
    throw Error(ErrorCode::LineCountMismatch, "token embedding dumps have different sentence counts");
  ParallelCorpus corpus;
  for (std::size_t i = 0; i < source.sentences.size(); ++i) {
    if (source.sentences[i].tokens.empty() || target.sentences[i].tokens.empty()) {
      ++corpus.dropped_pairs;
      continue;
    }
    corpus.source.push_back(source.sentences[i].tokens);
    corpus.target.push_back(target.sentences[i].tokens);
    corpus.line_numbers.push_back(i);
  }
  return corpus;
}

ParallelCorpus ParallelCorpus::prefix(std::size_t n) const {
  if (n > size()) throw Error(ErrorCode::SizeExceedsCorpus, "prefix longer than corpus");
  ParallelCorpus out;
  const auto end = static_cast<std::ptrdiff_t>(n);
  out.source.assign(source.begin(), source.begin() + end);
  out.target.assign(target.begin(), target.begin() + end);
  out.line_numbers.assign(line_numbers.begin(), line_numbers.begin() + end);
  return out;
}

std::uint64_t FrequencyTable::count(std::string_view token) const {
  const auto it = counts.find(std::string(token));
  return it == counts.end() ? 0 : it->second;
}

FrequencyTable count_frequencies(std::span<const Sentence> corpus) {
  FrequencyTable table;
  for (const auto& sentence : corpus)
    for (const auto& token : sentence) ++table.counts[token];
  for (const auto& [token, c] : table.counts) table.total += c;
  if (table.total == 0) throw Error(ErrorCode::EmptyCorpus, "no tokens to count");
  return table;
}

void save_frequencies(std::ostream& out, const FrequencyTable& table) {
  std::vector<std::pair<std::string, std::uint64_t>> rows(table.counts.begin(), table.counts.end());
  std::ranges::sort(rows, [](const auto& l, const auto& r) {
    return l.second != r.second ? l.second > r.second : l.first < r.first;
  });
  for (const auto& [token, c] : rows) out << token << '\t' << c << '\n';
}

FrequencyTable load_frequencies(std::istream& in) {
  FrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const auto c = fields.size() == 2 ? parse_count(fields[1]) : std::nullopt;
    if (!c) throw Error(ErrorCode::MalformedLine, line_no, "expected 'token<TAB>count'");
    table.counts[std::string(fields[0])] += *c;
    table.total += *c;
  }
  if (table.total == 0) throw Error(ErrorCode::EmptyCorpus, "frequency table is empty");
  return table;
}

}  // namespace xlmap

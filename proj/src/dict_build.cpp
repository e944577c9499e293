#include "xlmap/dict_build.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "xlmap/error.hpp"

namespace xlmap {

const char* to_string(DictProvenance provenance) {
  switch (provenance) {
    case DictProvenance::StaticDict: return "static_dict";
    case DictProvenance::ProbDict: return "prob_dict";
    case DictProvenance::Contextual: return "contextual";
    case DictProvenance::Sentence: return "sentence";
  }
  return "static_dict";
}

DictProvenance parse_provenance(const std::string& text) {
  if (text == "static_dict" || text == "static") return DictProvenance::StaticDict;
  if (text == "prob_dict" || text == "prob") return DictProvenance::ProbDict;
  if (text == "contextual") return DictProvenance::Contextual;
  if (text == "sentence") return DictProvenance::Sentence;
  throw Error(ErrorCode::InvalidParameter, "unknown dictionary kind '" + text + "'");
}

bool WordPairList::add(std::string source, std::string target) {
  std::string key = source;
  key.push_back('\x1f');
  key += target;
  if (!seen_.insert(std::move(key)).second) {
    ++duplicates_;
    return false;
  }
  pairs_.emplace_back(std::move(source), std::move(target));
  return true;
}

WordPairList load_static_pairs(std::istream& in) {
  WordPairList list;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = tokenize(line);
    if (fields.empty()) continue;
    if (fields.size() != 2)
      throw Error(ErrorCode::MalformedLine, line_no, "expected 'source_word target_word'");
    list.add(std::move(fields[0]), std::move(fields[1]));
  }
  return list;
}

WordPairList extract_prob_pairs(const TranslationTable& table) {
  WordPairList list;
  for (std::uint32_t e = 1; e < table.source_vocab().size(); ++e) {
    const auto& row = table.entries(e);
    if (row.empty()) continue;
    const TranslationTable::Entry* best = nullptr;
    double second = -1.0;
    for (const auto& entry : row) {
      if (best == nullptr || entry.prob > best->prob) {
        if (best != nullptr) second = best->prob;
        best = &entry;
      } else if (entry.prob > second) {
        second = entry.prob;
      }
    }
    if (best->prob > second)
      list.add(table.source_vocab()[e], table.target_vocab()[best->target]);
  }
  return list;
}

MappingDictionary pairs_to_dictionary(const WordPairList& pairs, const EmbeddingTable& src,
                                      const EmbeddingTable& tgt, DictProvenance provenance) {
  if (src.dim() != tgt.dim())
    throw Error(ErrorCode::DimMismatch, "source dim " + std::to_string(src.dim()) +
                                            " != target dim " + std::to_string(tgt.dim()));
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  MappingDictionary dict;
  dict.provenance = provenance;
  for (const auto& [s, t] : pairs.pairs()) {
    const auto si = src.find(s);
    const auto ti = tgt.find(t);
    if (!si || !ti) {
      ++dict.skipped;
      continue;
    }
    hits.emplace_back(*si, *ti);
    dict.labels.push_back(s + '\t' + t);
  }
  if (hits.empty()) throw Error(ErrorCode::EmptyDictionary, "every dictionary pair is out of vocabulary");
  dict.x = DenseMatrix(src.dim(), hits.size());
  dict.y = DenseMatrix(tgt.dim(), hits.size());
  for (std::size_t c = 0; c < hits.size(); ++c) {
    std::ranges::copy(src.vectors().col(hits[c].first), dict.x.col(c).begin());
    std::ranges::copy(tgt.vectors().col(hits[c].second), dict.y.col(c).begin());
  }
  return dict;
}

MappingDictionary build_contextual_dictionary(const TokenEmbeddingCorpus& src,
                                              const TokenEmbeddingCorpus& tgt,
                                              const std::vector<AlignmentLink>& links,
                                              std::size_t cap) {
  if (src.dim != tgt.dim)
    throw Error(ErrorCode::DimMismatch, "contextual dumps have different dimensions");

  std::map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> by_sentence;
  for (const auto& link : links) {
    if (link.sentence >= src.sentences.size() || link.sentence >= tgt.sentences.size())
      throw Error(ErrorCode::SentenceIndexOutOfRange,
                  "link refers to sentence " + std::to_string(link.sentence));
    if (link.source_pos >= src.sentences[link.sentence].tokens.size() ||
        link.target_pos >= tgt.sentences[link.sentence].tokens.size())
      throw Error(ErrorCode::SentenceIndexOutOfRange,
                  "link position out of bounds in sentence " + std::to_string(link.sentence));
    by_sentence[link.sentence].emplace_back(link.source_pos, link.target_pos);
  }

  struct Kept {
    std::size_t sentence, i, j;
  };
  std::vector<Kept> kept;
  for (auto& [sentence, row] : by_sentence) {
    if (kept.size() >= cap) break;
    std::map<std::size_t, int> src_uses;
    std::map<std::size_t, int> tgt_uses;
    for (const auto& [i, j] : row) {
      ++src_uses[i];
      ++tgt_uses[j];
    }
    std::ranges::sort(row);
    for (const auto& [i, j] : row) {
      if (src_uses[i] != 1 || tgt_uses[j] != 1) continue;
      if (kept.size() >= cap) break;
      kept.push_back({sentence, i, j});
    }
  }
  if (kept.empty()) throw Error(ErrorCode::EmptyDictionary, "no one-to-one links to build a dictionary from");

  MappingDictionary dict;
  dict.provenance = DictProvenance::Contextual;
  dict.x = DenseMatrix(src.dim, kept.size());
  dict.y = DenseMatrix(tgt.dim, kept.size());
  dict.labels.reserve(kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const auto& k = kept[c];
    const auto& sb = src.sentences[k.sentence];
    const auto& tb = tgt.sentences[k.sentence];
    std::ranges::copy(sb.vectors.col(k.i), dict.x.col(c).begin());
    std::ranges::copy(tb.vectors.col(k.j), dict.y.col(c).begin());
    dict.labels.push_back(std::to_string(k.sentence) + '\t' + std::to_string(k.i) + '\t' +
                          std::to_string(k.j) + '\t' + sb.tokens[k.i] + '\t' + tb.tokens[k.j]);
  }
  return dict;
}

MappingDictionary build_sentence_dictionary(const DenseMatrix& src_embs, const DenseMatrix& tgt_embs) {
  if (src_embs.rows() != tgt_embs.rows() || src_embs.cols() != tgt_embs.cols())
    throw Error(ErrorCode::ShapeMismatch, "sentence embedding matrices differ in shape");
  if (src_embs.cols() == 0) throw Error(ErrorCode::EmptyDictionary, "no sentence pairs");
  MappingDictionary dict;
  dict.provenance = DictProvenance::Sentence;
  dict.x = src_embs;
  dict.y = tgt_embs;
  dict.labels.reserve(src_embs.cols());
  for (std::size_t c = 0; c < src_embs.cols(); ++c) dict.labels.push_back(std::to_string(c));
  return dict;
}

void save_dictionary(std::ostream& out, const MappingDictionary& dict) {
  out << "#dict " << to_string(dict.provenance) << ' ' << dict.dim() << ' ' << dict.size() << '\n';
  for (std::size_t c = 0; c < dict.size(); ++c) {
    bool first = true;
    for (double v : dict.x.col(c)) {
      out << (first ? "" : " ") << format_double(v);
      first = false;
    }
    for (double v : dict.y.col(c)) out << ' ' << format_double(v);
    out << '\n';
  }
}

MappingDictionary load_dictionary(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, 1, "empty dictionary file");
  const auto header = tokenize(line);
  if (header.size() != 4 || header[0] != "#dict")
    throw Error(ErrorCode::BadHeader, 1, "expected '#dict <provenance> <dim> <n>'");
  MappingDictionary dict;
  dict.provenance = parse_provenance(header[1]);
  std::size_t dim = 0;
  std::size_t n = 0;
  try {
    dim = std::stoul(header[2]);
    n = std::stoul(header[3]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadHeader, 1, "expected '#dict <provenance> <dim> <n>'");
  }
  dict.x = DenseMatrix(dim, n);
  dict.y = DenseMatrix(dim, n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t line_no = c + 2;
    if (!std::getline(in, line)) throw Error(ErrorCode::DimensionMismatch, line_no, "dictionary truncated");
    const auto fields = tokenize(line);
    if (fields.size() != 2 * dim)
      throw Error(ErrorCode::DimensionMismatch, line_no, "expected " + std::to_string(2 * dim) + " values");
    for (std::size_t k = 0; k < 2 * dim; ++k) {
      const auto v = parse_double(fields[k]);
      if (!v || !std::isfinite(*v)) throw Error(ErrorCode::NonFiniteValue, line_no, "bad value");
      (k < dim ? dict.x(k, c) : dict.y(k - dim, c)) = *v;
    }
    dict.labels.push_back(std::to_string(c));
  }
  if (n == 0) throw Error(ErrorCode::EmptyDictionary, "dictionary has no pairs");
  return dict;
}

void write_dictionary_audit(std::ostream& out, const MappingDictionary& dict) {
  switch (dict.provenance) {
    case DictProvenance::StaticDict:
    case DictProvenance::ProbDict:
      out << "index\tsource\ttarget\n";
      break;
    case DictProvenance::Contextual:
      out << "index\tsentence\tsource_pos\ttarget_pos\tsource\ttarget\n";
      break;
    case DictProvenance::Sentence:
      out << "index\tsentence\n";
      break;
  }
  for (std::size_t c = 0; c < dict.labels.size(); ++c) out << c << '\t' << dict.labels[c] << '\n';
}

}  // namespace xlmap

#include "xlmap/xmap.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "xlmap/error.hpp"
#include "xlmap/kernels.hpp"

namespace xlmap {

MappingPolicy default_policy(MapLevel level) {
  return MappingPolicy{level != MapLevel::Sentence, level};
}

MapLevel level_for(DictProvenance provenance) {
  switch (provenance) {
    case DictProvenance::Contextual: return MapLevel::Contextual;
    case DictProvenance::Sentence: return MapLevel::Sentence;
    default: return MapLevel::Word;
  }
}

namespace {

DenseMatrix normalized_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (std::size_t c = 0; c < out.cols(); ++c) {
    auto v = out.col(c);
    const double norm = std::sqrt(kernels::detail::dot(v, v));
    if (norm == 0.0)
      throw Error(ErrorCode::ZeroNormColumn, "dictionary column " + std::to_string(c) + " has zero norm");
    for (double& x : v) x /= norm;
  }
  return out;
}

void check_space_id(const std::string& id) {
  if (id.empty() || tokenize(id).size() != 1)
    throw Error(ErrorCode::InvalidParameter, "space id must be a single nonempty token");
}

}  // namespace

OrthogonalMap learn_mapping(const MappingDictionary& dict, const MappingPolicy& policy,
                            std::string source_space, std::string target_space) {
  if (dict.size() == 0) throw Error(ErrorCode::EmptyDictionary, "cannot learn from an empty dictionary");
  check_space_id(source_space);
  check_space_id(target_space);
  MapInfo info{std::move(source_space), std::move(target_space), policy.level};
  if (!policy.normalize_dictionary) return solve_procrustes(dict.x, dict.y, std::move(info));
  return solve_procrustes(normalized_columns(dict.x), normalized_columns(dict.y), std::move(info));
}

EmbeddingTable map_words(const OrthogonalMap& map, const EmbeddingTable& table) {
  if (table.dim() != map.dim())
    throw Error(ErrorCode::DimMismatch, "table dimension differs from map dimension");
  return EmbeddingTable(table.vocab(), apply_map(map, table.vectors()), map.target_space());
}

TokenEmbeddingCorpus map_token_corpus(const OrthogonalMap& map, const TokenEmbeddingCorpus& corpus) {
  if (corpus.dim != map.dim())
    throw Error(ErrorCode::DimMismatch, "dump dimension differs from map dimension");
  TokenEmbeddingCorpus out;
  out.dim = corpus.dim;
  out.space_id = map.target_space();
  out.sentences.reserve(corpus.sentences.size());
  for (const auto& block : corpus.sentences)
    out.sentences.push_back({block.tokens, block.vectors.cols() == 0 ? block.vectors
                                                                     : apply_map(map, block.vectors)});
  return out;
}

std::pair<OrthogonalMap, OrthogonalMap> to_pivot_pair(const OrthogonalMap& src_map,
                                                      const OrthogonalMap& tgt_map) {
  if (src_map.target_space() != tgt_map.target_space())
    throw Error(ErrorCode::PivotMismatch, "maps target '" + src_map.target_space() + "' and '" +
                                              tgt_map.target_space() + "'");
  if (src_map.dim() != tgt_map.dim())
    throw Error(ErrorCode::DimMismatch, "pivot maps have different dimensions");
  return {src_map, tgt_map};
}

void save_map(std::ostream& out, const OrthogonalMap& map) {
  const auto& r = map.matrix();
  out << "orthomap " << map.dim() << ' ' << to_string(map.level()) << ' ' << map.source_space()
      << ' ' << map.target_space() << '\n';
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t j = 0; j < r.cols(); ++j) out << (j ? " " : "") << format_double17(r(i, j));
    out << '\n';
  }
}

OrthogonalMap load_map(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::BadHeader, 1, "empty map file");
  const auto header = tokenize(line);
  if (header.size() != 5 || header[0] != "orthomap")
    throw Error(ErrorCode::BadHeader, 1, "expected 'orthomap <d> <level> <source> <target>'");
  std::size_t d = 0;
  try {
    d = std::stoul(header[1]);
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadHeader, 1, "bad dimension");
  }
  MapInfo info{header[3], header[4], parse_map_level(header[2])};
  DenseMatrix r(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorCode::DimensionMismatch, i + 2, "map file truncated");
    const auto fields = tokenize(line);
    if (fields.size() != d)
      throw Error(ErrorCode::DimensionMismatch, i + 2, "expected " + std::to_string(d) + " entries");
    for (std::size_t j = 0; j < d; ++j) {
      const auto v = parse_double(fields[j]);
      if (!v || !std::isfinite(*v)) throw Error(ErrorCode::NonFiniteValue, i + 2, "bad entry");
      r(i, j) = *v;
    }
  }
  return OrthogonalMap(std::move(r), std::move(info));
}

}  // namespace xlmap

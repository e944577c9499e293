#pragma once

// Learning and applying orthogonal cross-lingual maps at word, contextual and
// sentence level, plus the map file format.

#include <iosfwd>
#include <string>
#include <utility>

#include "xlmap/dict_build.hpp"
#include "xlmap/embed_io.hpp"
#include "xlmap/linalg.hpp"

namespace xlmap {

struct MappingPolicy {
  /// Unit-length-normalize dictionary columns before solving.
  bool normalize_dictionary = true;
  MapLevel level = MapLevel::Word;
};

/// Normalization on for word and contextual dictionaries, off for sentences.
MappingPolicy default_policy(MapLevel level);
MapLevel level_for(DictProvenance provenance);

OrthogonalMap learn_mapping(const MappingDictionary& dict, const MappingPolicy& policy,
                            std::string source_space = "src", std::string target_space = "tgt");

/// Every vector replaced by R·v; vocabulary and order unchanged. The result
/// lives in the map's target space.
EmbeddingTable map_words(const OrthogonalMap& map, const EmbeddingTable& table);
TokenEmbeddingCorpus map_token_corpus(const OrthogonalMap& map, const TokenEmbeddingCorpus& corpus);

/// Validates two maps into the same pivot space for zero-shot retrieval:
/// both sides are mapped into the pivot, nothing is inverted.
std::pair<OrthogonalMap, OrthogonalMap> to_pivot_pair(const OrthogonalMap& src_map,
                                                      const OrthogonalMap& tgt_map);

/// "orthomap <d> <level> <source_space> <target_space>" followed by d rows of
/// d entries with 17 significant digits.
void save_map(std::ostream& out, const OrthogonalMap& map);
OrthogonalMap load_map(std::istream& in);

}  // namespace xlmap

#include "xlmap/word_align.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "xlmap/error.hpp"

namespace xlmap {

namespace {

std::uint64_t pair_key(std::uint32_t source, std::uint32_t target) {
  return (static_cast<std::uint64_t>(source) << 32) | target;
}

}  // namespace

std::uint32_t TranslationTable::intern_source(const std::string& token) {
  const auto [it, inserted] =
      source_index_.try_emplace(token, static_cast<std::uint32_t>(source_vocab_.size()));
  if (inserted) {
    source_vocab_.push_back(token);
    rows_.emplace_back();
  }
  return it->second;
}

std::uint32_t TranslationTable::intern_target(const std::string& token) {
  const auto [it, inserted] =
      target_index_.try_emplace(token, static_cast<std::uint32_t>(target_vocab_.size()));
  if (inserted) target_vocab_.push_back(token);
  return it->second;
}

void TranslationTable::rebuild_lookup() {
  lookup_.clear();
  for (std::uint32_t e = 0; e < rows_.size(); ++e) {
    std::ranges::sort(rows_[e], {}, &Entry::target);
    for (const auto& entry : rows_[e]) lookup_[pair_key(e, entry.target)] = entry.prob;
  }
}

TranslationTable TranslationTable::from_entries(
    const std::vector<std::tuple<std::string, std::string, double>>& entries,
    double diagonal_tension) {
  TranslationTable table;
  table.diagonal_tension_ = diagonal_tension;
  for (const auto& [source, target, prob] : entries) {
    if (!(prob >= 0.0 && prob <= 1.0))
      throw Error(ErrorCode::InvalidParameter, "translation probability outside [0,1]");
    const auto e = table.intern_source(source);
    const auto f = table.intern_target(target);
    table.rows_[e].push_back({f, prob});
  }
  table.rebuild_lookup();
  return table;
}

std::optional<std::uint32_t> TranslationTable::source_id(std::string_view token) const {
  const auto it = source_index_.find(std::string(token));
  if (it == source_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> TranslationTable::target_id(std::string_view token) const {
  const auto it = target_index_.find(std::string(token));
  if (it == target_index_.end()) return std::nullopt;
  return it->second;
}

double TranslationTable::prob(std::string_view source, std::string_view target) const {
  const auto e = source_id(source);
  const auto f = target_id(target);
  if (!e || !f) return 0.0;
  const auto it = lookup_.find(pair_key(*e, *f));
  return it == lookup_.end() ? 0.0 : it->second;
}

std::vector<double> alignment_prior(std::size_t src_len, std::size_t tgt_len, std::size_t j,
                                    double diagonal_tension) {
  const double uniform = 1.0 / static_cast<double>(src_len + 1);
  std::vector<double> prior(src_len + 1, uniform);
  if (diagonal_tension == 0.0 || src_len == 0) return prior;
  const double jpos = static_cast<double>(j + 1) / static_cast<double>(tgt_len);
  double mass = 0.0;
  for (std::size_t i = 0; i < src_len; ++i) {
    const double ipos = static_cast<double>(i + 1) / static_cast<double>(src_len);
    prior[i + 1] = std::exp(-diagonal_tension * std::abs(ipos - jpos));
    mass += prior[i + 1];
  }
  const double share = static_cast<double>(src_len) * uniform;
  for (std::size_t i = 0; i < src_len; ++i) prior[i + 1] = share * prior[i + 1] / mass;
  return prior;
}

TranslationTable train_ibm1(const ParallelCorpus& corpus, const Ibm1Options& options) {
  if (corpus.size() == 0) throw Error(ErrorCode::EmptyCorpus, "cannot train on an empty corpus");
  if (options.iterations == 0) throw Error(ErrorCode::InvalidParameter, "iterations must be >= 1");
  if (!(options.diagonal_tension >= 0.0))
    throw Error(ErrorCode::InvalidParameter, "diagonal tension must be >= 0");

  TranslationTable table;
  table.diagonal_tension_ = options.diagonal_tension;

  kernels::Ibm1Lattice lattice;
  std::unordered_map<std::uint64_t, std::uint32_t> param_index;
  std::vector<std::uint32_t> param_source;
  std::vector<std::uint32_t> param_target;
  std::vector<std::uint32_t> e_ids;
  std::vector<std::uint32_t> f_ids;

  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& src = corpus.source[s];
    const auto& tgt = corpus.target[s];
    e_ids.assign(1, 0);
    for (const auto& tok : src) e_ids.push_back(table.intern_source(tok));
    f_ids.clear();
    for (const auto& tok : tgt) f_ids.push_back(table.intern_target(tok));

    lattice.src_len.push_back(static_cast<std::uint32_t>(src.size()));
    lattice.tgt_len.push_back(static_cast<std::uint32_t>(tgt.size()));
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const auto prior = alignment_prior(src.size(), tgt.size(), j, options.diagonal_tension);
      for (std::size_t i = 0; i < e_ids.size(); ++i) {
        const auto key = pair_key(e_ids[i], f_ids[j]);
        const auto [it, inserted] =
            param_index.try_emplace(key, static_cast<std::uint32_t>(param_source.size()));
        if (inserted) {
          param_source.push_back(e_ids[i]);
          param_target.push_back(f_ids[j]);
        }
        lattice.param.push_back(it->second);
        lattice.prior.push_back(prior[i]);
      }
    }
    lattice.offsets.push_back(lattice.param.size());
  }

  const std::size_t n_params = param_source.size();
  std::vector<double> t(n_params, 1.0 / static_cast<double>(table.target_vocab_.size()));
  std::vector<double> counts(n_params);
  std::vector<double> totals(table.source_vocab_.size());

  for (std::size_t it = 0; it < options.iterations; ++it) {
    std::ranges::fill(counts, 0.0);
    table.trace_.push_back(kernels::ibm1_expectation(lattice, t, counts, options.exec));
    std::ranges::fill(totals, 0.0);
    for (std::size_t p = 0; p < n_params; ++p) totals[param_source[p]] += counts[p];
    for (std::size_t p = 0; p < n_params; ++p) {
      const double total = totals[param_source[p]];
      if (total > 0.0) t[p] = counts[p] / total;
    }
  }
  std::ranges::fill(counts, 0.0);
  table.trace_.push_back(kernels::ibm1_expectation(lattice, t, counts, options.exec));

  for (std::size_t p = 0; p < n_params; ++p)
    table.rows_[param_source[p]].push_back({param_target[p], t[p]});
  table.rebuild_lookup();
  return table;
}

std::vector<AlignmentLink> align_corpus(const TranslationTable& table, const ParallelCorpus& corpus) {
  std::vector<AlignmentLink> links;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& src = corpus.source[s];
    const auto& tgt = corpus.target[s];
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const auto prior = alignment_prior(src.size(), tgt.size(), j, table.diagonal_tension());
      // NULL takes the token only when it beats every real position outright
      double best = 0.0;
      std::optional<std::size_t> best_i;
      for (std::size_t i = 0; i < src.size(); ++i) {
        const double score = table.prob(src[i], tgt[j]) * prior[i + 1];
        if (score > best) {
          best = score;
          best_i = i;
        }
      }
      if (best_i && best >= table.prob(kNullToken, tgt[j]) * prior[0]) links.push_back({s, *best_i, j});
    }
  }
  return links;
}

void write_pharaoh(std::ostream& out, const std::vector<AlignmentLink>& links, std::size_t sentences) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_sentence(sentences);
  for (const auto& link : links) {
    if (link.sentence >= sentences)
      throw Error(ErrorCode::SentenceIndexOutOfRange, "link refers to sentence " +
                                                          std::to_string(link.sentence));
    by_sentence[link.sentence].emplace_back(link.source_pos, link.target_pos);
  }
  for (auto& row : by_sentence) {
    std::ranges::sort(row);
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k ? " " : "") << row[k].first << '-' << row[k].second;
    out << '\n';
  }
}

std::vector<AlignmentLink> read_pharaoh(std::istream& in) {
  std::vector<AlignmentLink> links;
  std::string line;
  std::size_t sentence = 0;
  while (std::getline(in, line)) {
    for (const auto& field : tokenize(line)) {
      const auto dash = field.find('-');
      std::size_t i = 0;
      std::size_t j = 0;
      const char* end = field.data() + field.size();
      const auto r1 = std::from_chars(field.data(), field.data() + (dash == std::string::npos ? 0 : dash), i);
      const auto r2 = dash == std::string::npos ? std::from_chars_result{nullptr, std::errc::invalid_argument}
                                                : std::from_chars(field.data() + dash + 1, end, j);
      if (dash == std::string::npos || r1.ec != std::errc() || r1.ptr != field.data() + dash ||
          r2.ec != std::errc() || r2.ptr != end)
        throw Error(ErrorCode::MalformedLine, sentence + 1, "bad alignment link '" + field + "'");
      links.push_back({sentence, i, j});
    }
    ++sentence;
  }
  return links;
}

void write_translation_table(std::ostream& out, const TranslationTable& table) {
  std::vector<std::uint32_t> sources(table.source_vocab().size());
  for (std::uint32_t e = 0; e < sources.size(); ++e) sources[e] = e;
  std::ranges::sort(sources, [&](auto l, auto r) { return table.source_vocab()[l] < table.source_vocab()[r]; });
  for (const auto e : sources) {
    auto row = table.entries(e);
    std::ranges::sort(row, [&](const auto& l, const auto& r) {
      if (l.prob != r.prob) return l.prob > r.prob;
      return table.target_vocab()[l.target] < table.target_vocab()[r.target];
    });
    for (const auto& entry : row)
      out << table.source_vocab()[e] << '\t' << table.target_vocab()[entry.target] << '\t'
          << format_double(entry.prob) << '\n';
  }
}

TranslationTable read_translation_table(std::istream& in, double diagonal_tension) {
  std::vector<std::tuple<std::string, std::string, double>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    const auto prob = fields.size() == 3 ? parse_double(fields[2]) : std::nullopt;
    if (!prob || !(*prob >= 0.0 && *prob <= 1.0))
      throw Error(ErrorCode::MalformedLine, line_no, "expected 'e<TAB>f<TAB>prob'");
    entries.emplace_back(fields[0], fields[1], *prob);
  }
  return TranslationTable::from_entries(entries, diagonal_tension);
}

}  // namespace xlmap

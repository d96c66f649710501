#include "morphtyp/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

double TranslationTable::prob(const std::string& src, const std::string& tgt) const {
  auto row = table_.find(src);
  if (row == table_.end()) return 0.0;
  auto cell = row->second.find(tgt);
  return cell == row->second.end() ? 0.0 : cell->second;
}

void TranslationTable::set(const std::string& src, const std::string& tgt, double p) {
  table_[src][tgt] = p;
}

void TranslationTable::save_tsv(const std::string& path) const {
  std::string out;
  for (const auto& [src, row] : table_) {
    for (const auto& [tgt, p] : row) {
      out += src;
      out.push_back('\t');
      out += tgt;
      out.push_back('\t');
      out += format_number(p);
      out.push_back('\n');
    }
  }
  write_file(path, out);
}

TranslationTable TranslationTable::load_tsv(const std::string& path) {
  TranslationTable table;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cols = split(lines[i], '\t');
    if (cols.size() != 3) throw ParseError(path, i + 1, "expected src<TAB>tgt<TAB>prob");
    try {
      table.set(cols[0], cols[1], std::stod(cols[2]));
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "bad probability: " + cols[2]);
    }
  }
  return table;
}

TranslationTable train_ibm1(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs,
    int iterations, bool use_null) {
  if (pairs.empty()) throw InputError("train_ibm1: empty sentence pair list");

  // Index vocabularies in first-occurrence order for deterministic float
  // accumulation.
  std::unordered_map<std::string, int> src_ids, tgt_ids;
  std::vector<std::string> src_words, tgt_words;
  auto intern = [](std::unordered_map<std::string, int>& ids, std::vector<std::string>& words,
                   const std::string& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<int>(words.size()));
    if (inserted) words.push_back(w);
    return it->second;
  };

  struct IndexedPair {
    std::vector<int> src;
    std::vector<int> tgt;
  };
  std::vector<IndexedPair> data;
  data.reserve(pairs.size());
  if (use_null) intern(src_ids, src_words, "");
  for (const auto& [src, tgt] : pairs) {
    IndexedPair ip;
    if (use_null) ip.src.push_back(0);
    for (const std::string& w : src) ip.src.push_back(intern(src_ids, src_words, w));
    for (const std::string& w : tgt) ip.tgt.push_back(intern(tgt_ids, tgt_words, w));
    data.push_back(std::move(ip));
  }

  // t[src][tgt] over co-occurring pairs only, uniform start.
  std::vector<std::map<int, double>> t(src_words.size());
  for (const IndexedPair& ip : data) {
    for (int e : ip.src) {
      for (int f : ip.tgt) t[e].emplace(f, 0.0);
    }
  }
  const double uniform = 1.0 / static_cast<double>(std::max<std::size_t>(tgt_words.size(), 1));
  for (auto& row : t) {
    for (auto& [f, p] : row) p = uniform;
  }

  TranslationTable result;
  for (int iter = 0; iter < iterations; ++iter) {
    std::vector<std::map<int, double>> counts(src_words.size());
    double ll = 0.0;
    for (const IndexedPair& ip : data) {
      if (ip.src.empty() || ip.tgt.empty()) continue;
      for (int f : ip.tgt) {
        double norm = 0.0;
        for (int e : ip.src) norm += t[e].find(f)->second;
        if (norm <= 0.0) continue;
        ll += std::log(norm) - std::log(static_cast<double>(ip.src.size()));
        for (int e : ip.src) {
          double p = t[e].find(f)->second;
          counts[e][f] += p / norm;
        }
      }
    }
    result.ll_history_.push_back(ll);
    for (std::size_t e = 0; e < t.size(); ++e) {
      double total = 0.0;
      for (const auto& [f, c] : counts[e]) total += c;
      if (total <= 0.0) continue;
      for (auto& [f, p] : t[e]) {
        auto it = counts[e].find(f);
        p = it == counts[e].end() ? 0.0 : it->second / total;
      }
    }
  }

  for (std::size_t e = 0; e < t.size(); ++e) {
    for (const auto& [f, p] : t[e]) {
      if (p > 0.0) result.set(src_words[e], tgt_words[f], p);
    }
  }
  return result;
}

namespace {

// Per-position argmax of t(other | word); ties to the leftmost position.
std::set<std::pair<int, int>> directional_links(const TranslationTable& table,
                                                const std::vector<std::string>& from,
                                                const std::vector<std::string>& to,
                                                bool from_is_ref) {
  std::set<std::pair<int, int>> links;
  for (int i = 0; i < static_cast<int>(from.size()); ++i) {
    double best = 0.0;
    int best_j = -1;
    for (int j = 0; j < static_cast<int>(to.size()); ++j) {
      double p = table.prob(from[i], to[j]);
      if (p > best) {
        best = p;
        best_j = j;
      }
    }
    if (best_j >= 0) {
      links.insert(from_is_ref ? std::make_pair(i, best_j) : std::make_pair(best_j, i));
    }
  }
  return links;
}

}  // namespace

SentenceAlignment align_sentence(const TranslationTable& fwd, const TranslationTable& rev,
                                 const std::vector<std::string>& ref,
                                 const std::vector<std::string>& hyp,
                                 bool grow_diag, std::string sentence_id) {
  std::set<std::pair<int, int>> forward = directional_links(fwd, ref, hyp, /*from_is_ref=*/true);
  std::set<std::pair<int, int>> reverse = directional_links(rev, hyp, ref, /*from_is_ref=*/false);

  SentenceAlignment out;
  out.sentence_id = std::move(sentence_id);
  std::set_intersection(forward.begin(), forward.end(), reverse.begin(), reverse.end(),
                        std::inserter(out.links, out.links.begin()));

  if (grow_diag) {
    std::set<std::pair<int, int>> uni;
    std::set_union(forward.begin(), forward.end(), reverse.begin(), reverse.end(),
                   std::inserter(uni, uni.begin()));
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& link : uni) {
        const int i = link.first, j = link.second;
        if (out.links.count({i, j})) continue;
        bool i_free = std::none_of(out.links.begin(), out.links.end(),
                                   [&](const auto& l) { return l.first == i; });
        bool j_free = std::none_of(out.links.begin(), out.links.end(),
                                   [&](const auto& l) { return l.second == j; });
        if (!i_free && !j_free) continue;
        bool adjacent = false;
        for (int di = -1; di <= 1 && !adjacent; ++di) {
          for (int dj = -1; dj <= 1 && !adjacent; ++dj) {
            if (di == 0 && dj == 0) continue;
            adjacent = out.links.count({i + di, j + dj}) > 0;
          }
        }
        if (adjacent) {
          out.links.insert({i, j});
          grew = true;
        }
      }
    }
  }
  return out;
}

std::vector<SentenceAlignment> load_alignment_pharaoh(
    const std::string& path, const std::vector<std::pair<std::size_t, std::size_t>>* sizes) {
  std::vector<SentenceAlignment> alignments;
  const std::vector<std::string> lines = read_lines(path);
  if (sizes && sizes->size() != lines.size()) {
    throw InputError(path + ": alignment has " + std::to_string(lines.size()) +
                     " lines but the corpus has " + std::to_string(sizes->size()) +
                     " sentence pairs");
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    SentenceAlignment a;
    a.sentence_id = std::to_string(i + 1);
    for (const std::string& tok : split_whitespace(lines[i])) {
      std::size_t dash = tok.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 == tok.size()) {
        throw ParseError(path, i + 1, "malformed link: " + tok);
      }
      int ri, hi;
      try {
        ri = std::stoi(tok.substr(0, dash));
        hi = std::stoi(tok.substr(dash + 1));
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "malformed link: " + tok);
      }
      if (ri < 0 || hi < 0) throw ParseError(path, i + 1, "negative index: " + tok);
      if (sizes) {
        const auto& [ref_len, hyp_len] = (*sizes)[i];
        if (static_cast<std::size_t>(ri) >= ref_len || static_cast<std::size_t>(hi) >= hyp_len) {
          throw ParseError(path, i + 1, "link out of bounds: " + tok);
        }
      }
      a.links.insert({ri, hi});
    }
    alignments.push_back(std::move(a));
  }
  return alignments;
}

void save_alignment_pharaoh(const std::vector<SentenceAlignment>& alignments,
                            const std::string& path) {
  std::string out;
  for (const SentenceAlignment& a : alignments) {
    bool first = true;
    for (const auto& [i, j] : a.links) {
      if (!first) out.push_back(' ');
      first = false;
      out += std::to_string(i);
      out.push_back('-');
      out += std::to_string(j);
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

std::vector<std::string> surfaces(const Sentence& sentence, bool lowercase_forms) {
  std::vector<std::string> out;
  out.reserve(sentence.tokens.size());
  for (const Token& tok : sentence.tokens) {
    out.push_back(lowercase_forms ? lowercase(tok.surface) : tok.surface);
  }
  return out;
}

}  // namespace morphtyp

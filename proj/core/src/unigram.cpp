#include "morphtyp/unigram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"
#include "viterbi.hpp"

namespace morphtyp {

namespace {

constexpr std::size_t kMaxSeedPieceLen = 8;  // code points
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kUnknownCharLogProb = -100.0;
// Pieces whose expected count underflows to zero keep a vanishing but
// finite probability so the model stays serializable and every character
// stays usable for coverage.
constexpr double kFloorLogProb = -744.0;

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

struct TypeEntry {
  std::vector<std::string> cps;
  std::int64_t count = 0;
};

struct Lattice {
  // logprob lookup shared across words during one EM step
  const std::unordered_map<std::string, double>* pieces;
  std::size_t max_len;
};

std::optional<double> lookup(const std::unordered_map<std::string, double>& pieces,
                             const std::string& p) {
  auto it = pieces.find(p);
  if (it == pieces.end()) return std::nullopt;
  return it->second;
}

// Forward/backward over the segmentation lattice of one word; returns the
// marginal log-likelihood and accumulates expected piece counts.
double expectation_for_word(const TypeEntry& entry, const Lattice& lat,
                            std::unordered_map<std::string, double>* expected) {
  const std::size_t n = entry.cps.size();
  std::vector<double> alpha(n + 1, kNegInf), beta(n + 1, kNegInf);
  alpha[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    std::string piece;
    for (std::size_t len = 1; len <= lat.max_len && len <= i; ++len) {
      piece.insert(0, entry.cps[i - len]);
      if (alpha[i - len] == kNegInf) continue;
      if (auto lp = lookup(*lat.pieces, piece)) {
        alpha[i] = log_sum_exp(alpha[i], alpha[i - len] + *lp);
      }
    }
  }
  beta[n] = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    std::string piece;
    for (std::size_t len = 1; len <= lat.max_len && i + len <= n; ++len) {
      piece += entry.cps[i + len - 1];
      if (beta[i + len] == kNegInf) continue;
      if (auto lp = lookup(*lat.pieces, piece)) {
        beta[i] = log_sum_exp(beta[i], *lp + beta[i + len]);
      }
    }
  }
  const double total = alpha[n];
  if (expected && total != kNegInf) {
    std::string piece;
    for (std::size_t i = 0; i < n; ++i) {
      piece.clear();
      for (std::size_t len = 1; len <= lat.max_len && i + len <= n; ++len) {
        piece += entry.cps[i + len - 1];
        auto lp = lookup(*lat.pieces, piece);
        if (!lp || alpha[i] == kNegInf || beta[i + len] == kNegInf) continue;
        double post = std::exp(alpha[i] + *lp + beta[i + len] - total);
        (*expected)[piece] += static_cast<double>(entry.count) * post;
      }
    }
  }
  return total;
}

detail::ViterbiResult viterbi_for_word(const TypeEntry& entry, const Lattice& lat,
                                       const std::string* excluded = nullptr) {
  auto scorer = [&](const std::string& p) -> std::optional<double> {
    if (excluded && p == *excluded) return std::nullopt;
    return lookup(*lat.pieces, p);
  };
  auto fallback = [&](const std::string&) { return kNegInf; };
  return detail::viterbi_segment(entry.cps, lat.max_len, scorer, fallback);
}

}  // namespace

UnigramModel train_unigram(const std::vector<Sentence>& corpus, std::size_t vocab_size,
                           const UnigramTrainOptions& opts) {
  return train_unigram(word_type_counts(corpus), vocab_size, opts);
}

UnigramModel train_unigram(const std::map<std::string, std::int64_t>& types,
                           std::size_t vocab_size, const UnigramTrainOptions& opts) {
  if (types.empty()) throw InputError("train_unigram: empty corpus");

  std::vector<TypeEntry> entries;
  std::map<std::string, std::int64_t> char_counts;
  for (const auto& [word, count] : types) {
    TypeEntry e{utf8_codepoints(word), count};
    for (const std::string& c : e.cps) char_counts[c] += count;
    entries.push_back(std::move(e));
  }
  if (vocab_size <= char_counts.size()) {
    throw InputError("train_unigram: vocab_size must exceed the character alphabet (" +
                     std::to_string(char_counts.size()) + ")");
  }

  // Seed: every character plus the most frequent substrings up to length 8.
  std::map<std::string, std::int64_t> substr_counts;
  for (const TypeEntry& e : entries) {
    for (std::size_t i = 0; i < e.cps.size(); ++i) {
      std::string piece = e.cps[i];
      for (std::size_t len = 2; len <= kMaxSeedPieceLen && i + len <= e.cps.size(); ++len) {
        piece += e.cps[i + len - 1];
        substr_counts[piece] += e.count;
      }
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> ranked(substr_counts.begin(),
                                                           substr_counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t seed_target =
      static_cast<std::size_t>(opts.seed_multiplier * static_cast<double>(vocab_size));

  std::unordered_map<std::string, double> weights(char_counts.begin(), char_counts.end());
  for (std::size_t i = 0; i < ranked.size() && i < seed_target; ++i) {
    weights.emplace(ranked[i].first, static_cast<double>(ranked[i].second));
  }

  // Normalize seed weights into log-probabilities.
  std::unordered_map<std::string, double> pieces;
  {
    double total = 0.0;
    for (const auto& [p, w] : weights) total += w;
    for (const auto& [p, w] : weights) pieces[p] = std::log(w) - std::log(total);
  }

  std::size_t max_len = 1;
  for (const auto& [p, lp] : pieces) max_len = std::max(max_len, utf8_length(p));

  std::vector<std::vector<double>> ll_rounds;
  const auto em_round = [&]() {
    std::vector<double> round;
    for (int it = 0; it < std::max(1, opts.em_iterations); ++it) {
      Lattice lat{&pieces, max_len};
      std::unordered_map<std::string, double> expected;
      double ll = 0.0;
      for (const TypeEntry& e : entries) {
        ll += static_cast<double>(e.count) * expectation_for_word(e, lat, &expected);
      }
      round.push_back(ll);
      double total = 0.0;
      for (const auto& [p, c] : expected) total += c;
      for (auto& [p, lp] : pieces) {
        auto it = expected.find(p);
        double c = it == expected.end() ? 0.0 : it->second;
        lp = c > 0.0 ? std::log(c) - std::log(total) : kFloorLogProb;
      }
    }
    // Score the final parameters of the round as well.
    Lattice lat{&pieces, max_len};
    double ll = 0.0;
    for (const TypeEntry& e : entries) {
      ll += static_cast<double>(e.count) * expectation_for_word(e, lat, nullptr);
    }
    round.push_back(ll);
    ll_rounds.push_back(std::move(round));
  };

  while (true) {
    em_round();
    if (pieces.size() <= vocab_size) break;

    // Likelihood loss of removing a piece: only words whose Viterbi path
    // uses it are affected.
    Lattice lat{&pieces, max_len};
    std::unordered_map<std::string, std::vector<std::size_t>> used_by;
    std::vector<double> best_scores(entries.size());
    for (std::size_t w = 0; w < entries.size(); ++w) {
      detail::ViterbiResult res = viterbi_for_word(entries[w], lat);
      best_scores[w] = res.score;
      for (const std::string& p : res.pieces) {
        auto& v = used_by[p];
        if (v.empty() || v.back() != w) v.push_back(w);
      }
    }
    std::vector<std::pair<double, std::string>> losses;
    for (const auto& [p, lp] : pieces) {
      if (utf8_length(p) <= 1) continue;  // single characters are never pruned
      double loss = 0.0;
      auto it = used_by.find(p);
      if (it != used_by.end()) {
        for (std::size_t w : it->second) {
          detail::ViterbiResult without = viterbi_for_word(entries[w], lat, &p);
          loss += static_cast<double>(entries[w].count) * (best_scores[w] - without.score);
        }
      }
      losses.emplace_back(loss, p);
    }
    std::size_t n_prune = static_cast<std::size_t>(opts.prune_fraction *
                                                   static_cast<double>(pieces.size()));
    n_prune = std::max<std::size_t>(n_prune, 1);
    n_prune = std::min(n_prune, pieces.size() - vocab_size);
    n_prune = std::min(n_prune, losses.size());
    std::sort(losses.begin(), losses.end());
    for (std::size_t i = 0; i < n_prune; ++i) pieces.erase(losses[i].second);

    // Renormalize the surviving mass.
    double norm = kNegInf;
    for (const auto& [p, lp] : pieces) norm = log_sum_exp(norm, lp);
    for (auto& [p, lp] : pieces) lp -= norm;
    max_len = 1;
    for (const auto& [p, lp] : pieces) max_len = std::max(max_len, utf8_length(p));
  }

  UnigramModel model(std::map<std::string, double>(pieces.begin(), pieces.end()), opts.marker);
  model.ll_rounds_ = std::move(ll_rounds);
  return model;
}

void UnigramModel::refresh_max_len() {
  max_piece_len_ = 1;
  for (const auto& [p, lp] : pieces_) max_piece_len_ = std::max(max_piece_len_, utf8_length(p));
}

double UnigramModel::piece_logprob(const std::string& piece) const {
  auto it = pieces_.find(piece);
  return it == pieces_.end() ? kNegInf : it->second;
}

double UnigramModel::sequence_logprob(const std::vector<std::string>& pieces) const {
  double lp = 0.0;
  for (const std::string& p : pieces) {
    auto it = pieces_.find(p);
    if (it == pieces_.end()) return kNegInf;
    lp += it->second;
  }
  return lp;
}

std::optional<std::vector<std::string>> UnigramModel::try_segment(std::string_view word) const {
  std::vector<std::string> cps = utf8_codepoints(word);
  auto scorer = [&](const std::string& p) -> std::optional<double> {
    auto it = pieces_.find(p);
    if (it == pieces_.end()) return std::nullopt;
    return it->second;
  };
  auto fallback = [&](const std::string&) { return kUnknownCharLogProb; };
  detail::ViterbiResult res = detail::viterbi_segment(cps, max_piece_len_, scorer, fallback);
  return apply_marker(std::move(res.pieces), marker_);
}

}  // namespace morphtyp

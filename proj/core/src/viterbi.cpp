#include "viterbi.hpp"

#include <algorithm>
#include <limits>

namespace morphtyp::detail {

namespace {

struct Cell {
  double score = -std::numeric_limits<double>::infinity();
  std::size_t piece_count = 0;
  std::vector<std::string> seq;
  bool reachable = false;
};

// true if `a` is preferable to `b`
bool better(double score_a, std::size_t count_a, const std::vector<std::string>& seq_a,
            const Cell& b) {
  if (!b.reachable) return true;
  if (score_a != b.score) return score_a > b.score;
  if (count_a != b.piece_count) return count_a < b.piece_count;
  return seq_a < b.seq;
}

}  // namespace

ViterbiResult viterbi_segment(
    const std::vector<std::string>& cps, std::size_t max_piece_len,
    const std::function<std::optional<double>(const std::string&)>& piece_score,
    const std::function<double(const std::string&)>& char_fallback) {
  const std::size_t n = cps.size();
  std::vector<Cell> best(n + 1);
  best[n].reachable = true;
  best[n].score = 0.0;

  for (std::size_t i = n; i-- > 0;) {
    std::string piece;
    for (std::size_t len = 1; len <= max_piece_len && i + len <= n; ++len) {
      piece += cps[i + len - 1];
      const Cell& next = best[i + len];
      if (!next.reachable) continue;
      std::optional<double> lp = piece_score(piece);
      if (!lp && len == 1) lp = char_fallback(piece);
      if (!lp) continue;
      double score = *lp + next.score;
      std::size_t count = next.piece_count + 1;
      std::vector<std::string> seq;
      seq.reserve(count);
      seq.push_back(piece);
      seq.insert(seq.end(), next.seq.begin(), next.seq.end());
      if (better(score, count, seq, best[i])) {
        best[i].score = score;
        best[i].piece_count = count;
        best[i].seq = std::move(seq);
        best[i].reachable = true;
      }
    }
  }
  return {best[0].seq, best[0].score};
}

}  // namespace morphtyp::detail

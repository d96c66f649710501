#pragma once

// Internal: suffix-DP Viterbi over additive piece scores, shared by the
// unigram and morfessor segmenters.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace morphtyp::detail {

// Best-scoring segmentation of the code-point sequence `cps`. Ordering on
// ties: higher score, then fewer pieces, then lexicographically first piece
// sequence. `piece_score` returns the log score of a candidate piece or
// nullopt if it is not in the inventory; `char_fallback` must score any
// single code point so a segmentation always exists.
struct ViterbiResult {
  std::vector<std::string> pieces;
  double score = 0.0;
};

ViterbiResult viterbi_segment(
    const std::vector<std::string>& cps, std::size_t max_piece_len,
    const std::function<std::optional<double>(const std::string&)>& piece_score,
    const std::function<double(const std::string&)>& char_fallback);

}  // namespace morphtyp::detail

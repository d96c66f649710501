#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace morphtyp {

struct MetricScore {
  double value = 0.0;
  // Set when the inputs were degenerate (both sides empty / empty
  // hypothesis) and the score was pinned rather than computed.
  bool degenerate = false;
};

// Character n-gram F-beta, uniformly averaged over n = 1..max_n, scaled to
// [0,100]. Whitespace is removed before n-gram extraction; orders with no
// overlap contribute 0.
MetricScore sentence_chrf(std::string_view hyp, std::string_view ref, int max_n = 6,
                          double beta = 2.0);

// Sentence BLEU in [0,100]: geometric mean of clipped n-gram precisions
// with add-1 smoothing for n >= 2, times the e^(1-r/h) brevity penalty.
MetricScore sentence_bleu(const std::vector<std::string>& hyp,
                          const std::vector<std::string>& ref, int max_n = 4);

}  // namespace morphtyp

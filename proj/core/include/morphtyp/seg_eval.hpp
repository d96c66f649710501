#pragma once

#include <optional>
#include <string>
#include <vector>

#include "morphtyp/corpus.hpp"
#include "morphtyp/segmenter.hpp"

namespace morphtyp {

struct NwParams {
  double gap_penalty = -0.5;
};

struct AlignedPair {
  std::optional<std::string> hyp;   // nullopt = gap on the hypothesis side
  std::optional<std::string> gold;  // nullopt = gap on the gold side
};

struct MorphAlignment {
  std::vector<AlignedPair> pairs;
  double score = 0.0;
};

// 1 iff the hypothesis has as many morphemes as the gold segmentation.
int accuracy_count(const std::vector<std::string>& hyp, const std::vector<std::string>& gold);

// Global alignment of morpheme sequences. Substitution score is
// 1 - normalized Levenshtein distance of the two morpheme strings; ties in
// the DP prefer the diagonal move, then consuming the hypothesis morpheme.
MorphAlignment nw_align(const std::vector<std::string>& hyp,
                        const std::vector<std::string>& gold, const NwParams& params = {});

// Fraction of aligned non-gap pairs with exactly matching strings. The
// denominator is |hyp| by default; recall_style divides by |gold| instead.
double exact_segmentation_precision(const std::vector<std::string>& hyp,
                                    const std::vector<std::string>& gold,
                                    bool recall_style = false, const NwParams& params = {});

struct SegEvalGroup {
  std::string label;  // "1", "2", "3", "4+"
  std::size_t n = 0;
  double mean_accuracy_count = 0.0;
  double mean_precision = 0.0;
};

struct SegEvalReport {
  std::vector<SegEvalGroup> groups;  // always the four labels, in order
  std::size_t uncovered = 0;         // external-lexicon misses, skipped

  std::string to_csv() const;
  std::string to_json_string() const;
};

// Segments every lexicon word with the model (markers stripped) and
// reports per-group mean accuracy count and exact segmentation precision,
// grouped by the gold morpheme count with 4 meaning "4 or more".
SegEvalReport eval_grouped(const GoldSegmentationLexicon& lexicon, const Segmenter& model,
                           bool recall_style = false, const NwParams& params = {});

}  // namespace morphtyp

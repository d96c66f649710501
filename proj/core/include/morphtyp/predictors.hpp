#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphtyp/corpus.hpp"
#include "morphtyp/fusion_annotation.hpp"
#include "morphtyp/linear_model.hpp"
#include "morphtyp/segmenter.hpp"

namespace morphtyp {

// Named subword models whose per-sentence piece counts become sw*.count /
// syn.sw* predictors.
using NamedSegmenters = std::vector<std::pair<std::string, const Segmenter*>>;

// Synthesis predictor set: char.count, word.count, morph.count, synthesis,
// N+V.word.count, N+V.morph.count, N+V.synthesis, and per-model
// sw<NAME>.count / syn.sw<NAME>. An empty map means the row is excluded
// (no countable words). Ratio predictors with a zero denominator are
// omitted from the map.
std::map<std::string, double> compute_predictors_synthesis(const Sentence& sentence,
                                                           const Segmenter* analyzer,
                                                           const NamedSegmenters& models);

// Fusion predictor set: char.count, word.count, verb.count, fusion (sum
// over verbs), R.fusion.verb, R.fusion.word, sw<NAME>.count and
// R.fusion.sw<NAME>. Verbs without a projected fusion value make the
// fusion predictors undefined for the row.
std::map<std::string, double> compute_predictors_fusion(
    const Sentence& sentence, const std::map<int, double>& verb_fusion,
    const NamedSegmenters& models, const std::set<std::string>& pos_filter = kDefaultVerbPos);

// Bilingual predictor set over (source, reference): per-side char/word
// counts, per-model subword counts and SYN ratios, per-side feat.count and
// R.feat.token, plus the four difference predictors (src-ref and ref-src
// are exact negations).
std::map<std::string, double> compute_predictors_bilingual(const Sentence& src,
                                                           const Sentence& ref,
                                                           const NamedSegmenters& models);

}  // namespace morphtyp

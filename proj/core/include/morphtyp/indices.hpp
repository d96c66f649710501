#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphtyp/corpus.hpp"

namespace morphtyp {

class Segmenter;

struct MorphRecord {
  std::string morpheme;
  int feature_count = 0;
  bool carries_root = false;
};

// Exactly one record per morpheme of the word's segmentation; at least one
// record carries the root.
using MorphFeatureProfile = std::vector<MorphRecord>;

struct JointTally {
  std::int64_t fusional_joints = 0;
  std::int64_t explicit_boundaries = 0;

  std::int64_t total() const { return fusional_joints + explicit_boundaries; }

  JointTally& operator+=(const JointTally& o) {
    fusional_joints += o.fusional_joints;
    explicit_boundaries += o.explicit_boundaries;
    return *this;
  }
};

struct FusionValue {
  double value = 0.0;
  // Set when the word (or whole text) has no joints at all; the value is
  // then 0 so aggregation stays total.
  bool jointless = false;
};

// Number of morphemes; 1 = analytic.
std::size_t synthesis_word(const std::vector<std::string>& morphs);

// Sum of morpheme counts over sum of word tokens, punctuation and numeral
// tokens excluded. Tokens the segmenter cannot handle are skipped and
// counted in `skipped` when given.
double synthesis_text(const std::vector<Sentence>& corpus, const Segmenter& segmenter,
                      std::size_t* skipped = nullptr);

// Per morpheme: load = feature_count + 1 if it carries the root; each
// morpheme contributes max(load - 1, 0) fusional joints. Explicit
// boundaries are the morpheme count minus one.
JointTally word_joints(const MorphFeatureProfile& profile);

FusionValue fusion_word(const MorphFeatureProfile& profile);

FusionValue fusion_text(const std::vector<MorphFeatureProfile>& profiles);

// Bulk profile file: word<TAB>morph1|morph2<TAB>featcount1,featcount2<TAB>rootflags
struct ProfileRow {
  std::string word;
  MorphFeatureProfile profile;
};
std::vector<ProfileRow> load_profiles(const std::string& path);
void save_profiles(const std::vector<ProfileRow>& rows, const std::string& path);

}  // namespace morphtyp

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphtyp/corpus.hpp"
#include "morphtyp/indices.hpp"

namespace morphtyp {

enum class Termination { Ar, Er, Ir, Other };

std::string termination_label(Termination t);
std::optional<Termination> parse_termination(std::string_view label);

// Inferred from the lemma ending, since surface endings are exactly what
// inflection changes.
Termination termination_of_lemma(std::string_view lemma);

// Canonical feature-bundle string: UD-style "Mood=Ind|Number=Plur|..." and
// UniMorph-style "V;IND;FUT;1;PL" inputs normalize to one sorted,
// ";"-joined atom set. UD atoms covering Spanish verb inflection map onto
// UniMorph tags; unknown atoms pass through as KEY=VALUE.
std::string canonical_bundle(const std::map<std::string, std::string>& feats);
std::string canonical_bundle(std::string_view bundle);

struct ParadigmKey {
  std::string bundle;  // canonical form
  Termination termination = Termination::Other;

  std::string canonical() const { return bundle + "#" + termination_label(termination); }
  bool operator<(const ParadigmKey& o) const { return canonical() < o.canonical(); }
  bool operator==(const ParadigmKey& o) const {
    return bundle == o.bundle && termination == o.termination;
  }
};

struct ParadigmEntry {
  ParadigmKey key;
  std::string sample_form;  // most frequent surface realizing the key
  std::int64_t occurrences = 0;
};

extern const std::set<std::string> kDefaultVerbPos;  // {VERB, AUX}

struct ExtractResult {
  std::vector<ParadigmEntry> entries;  // sorted by canonical key
  std::size_t missing_lemma = 0;       // keyed under "other", logged
};

ExtractResult extract_unique_paradigms(const std::vector<Sentence>& corpus,
                                       const std::set<std::string>& pos_filter = kDefaultVerbPos);

// Blank annotation sheet:
// paradigm_id  features  termination  sample_form  segmentation  per_morph_features  root_flags
void emit_annotation_sheet(const std::vector<ParadigmEntry>& entries, const std::string& path);

struct ParadigmAnnotation {
  ParadigmKey key;
  std::string sample_form;
  MorphFeatureProfile profile;
  double fusion = 0.0;  // always recomputed from the profile
  bool jointless = false;
};

struct IngestResult {
  std::vector<ParadigmAnnotation> annotations;
  std::vector<RejectedRow> rejected;
};

// Filled sheets use "-" separators in the segmentation column, e.g.
// "habl-are-mos". A provided trailing fusion column is validated against
// the recomputation; disagreement is a hard error.
IngestResult ingest_annotation_sheet(const std::string& path);

// Filled-sheet writer; the inverse of ingest for round-tripping.
void write_annotations(const std::vector<ParadigmAnnotation>& annotations,
                       const std::string& path);

struct TokenRef {
  std::string sentence_id;
  int token_index = 0;
  bool operator<(const TokenRef& o) const {
    return std::tie(sentence_id, token_index) < std::tie(o.sentence_id, o.token_index);
  }
};

struct Override {
  std::string upos;
  std::map<std::string, std::string> feats;
};

// sentence_id<TAB>token_index<TAB>UPOS<TAB>FEATS
using OverrideTable = std::map<TokenRef, Override>;
OverrideTable load_overrides(const std::string& path);

// Per-lemma exceptions for irregular verbs: same sheet format, with the
// verb lemma in the termination column. Matched by (bundle, lemma) before
// the paradigm key is consulted.
struct LemmaException {
  std::string bundle;
  std::string lemma;
  double fusion = 0.0;
  bool operator<(const LemmaException& o) const {
    return std::tie(bundle, lemma) < std::tie(o.bundle, o.lemma);
  }
};
std::vector<LemmaException> load_lemma_exceptions(const std::string& path);

struct ProjectionResult {
  std::map<TokenRef, double> assignments;
  std::vector<TokenRef> uncovered;  // verbs with no matching annotation
  std::size_t covered = 0;
  std::size_t verbs = 0;

  double coverage() const {
    return verbs == 0 ? 1.0 : static_cast<double>(covered) / static_cast<double>(verbs);
  }
};

ProjectionResult project_fusion(const std::vector<Sentence>& corpus,
                                const std::vector<ParadigmAnnotation>& annotations,
                                const OverrideTable& overrides = {},
                                const std::vector<LemmaException>& exceptions = {},
                                const std::set<std::string>& pos_filter = kDefaultVerbPos);

}  // namespace morphtyp

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "morphtyp/aligner.hpp"
#include "morphtyp/corpus.hpp"
#include "morphtyp/segmenter.hpp"

namespace morphtyp {

struct WordRecord {
  std::string sentence_id;
  int ref_index = 0;
  std::string surface;
  std::string pos;
  std::optional<int> morph_count;
  std::optional<double> fusion;
  std::int64_t train_freq = 0;
  bool in_vocab = false;
  int accuracy = 0;  // exact match, 0 or 1
  std::string aligned_hyp_surface;
};

// One record per reference token whose POS is in the filter. Accuracy is 1
// iff some alignment link maps it to a hypothesis token with an identical
// surface (any-match when several tokens are linked); unaligned tokens
// score 0 with an empty aligned surface.
std::vector<WordRecord> word_accuracy(const Sentence& ref, const Sentence& hyp,
                                      const SentenceAlignment& alignment,
                                      const std::set<std::string>& pos_filter,
                                      bool casefold = false);

struct AnnotateOptions {
  const FrequencyTable* freq = nullptr;
  const std::set<std::string>* model_vocab = nullptr;  // full-word pieces
  const Segmenter* segmenter = nullptr;                // fills morph_count
  const std::map<std::string, std::map<int, double>>* fusion = nullptr;  // sentence id -> token -> fusion
  bool lowercase_freq_lookup = false;
};

void annotate_records(std::vector<WordRecord>& records, const AnnotateOptions& opts);

enum class StratAxis { MorphCount, FusionBinary, FreqBin, InVocab };

std::string strat_axis_name(StratAxis axis);
std::optional<StratAxis> parse_strat_axis(std::string_view name);

struct StratCell {
  std::vector<std::pair<std::string, std::string>> labels;  // (axis, value)
  std::size_t n = 0;
  double mean_accuracy = 0.0;
  bool suppressed = false;  // n below min_samples: mean withheld

  std::string key() const;
};

struct StratifiedReport {
  std::vector<StratCell> cells;  // deterministic order
  std::size_t min_samples = 30;
  std::size_t total = 0;

  std::string to_csv() const;
  std::string to_json_string() const;
};

// Cross-product stratification over the requested axes. Cells with fewer
// than min_samples records report n but withhold the mean. Records lacking
// a value on an axis fall into its "na" category so totals stay exact.
StratifiedReport stratify(const std::vector<WordRecord>& records,
                          const std::vector<StratAxis>& axes, std::size_t min_samples = 30,
                          const std::vector<std::int64_t>& freq_edges = kDefaultFrequencyBinEdges);

// Records CSV, one row per record, all fields.
void save_records_csv(const std::vector<WordRecord>& records, const std::string& path);
std::vector<WordRecord> load_records_csv(const std::string& path);

struct HumanScore {
  std::string sentence_id;
  int token_index = 0;
  int semantic = 0;  // 1..4
  int grammar = 0;   // 1..3
};

struct HumanScoreCell {
  std::string stratum;
  std::string scale;  // "semantic" | "grammar"
  int score = 0;
  std::size_t count = 0;
  std::size_t zero_accuracy = 0;  // of these, records with accuracy 0
};

struct HumanReport {
  std::vector<HumanScoreCell> cells;
  std::size_t joined = 0;
  std::size_t skipped = 0;  // scores with no matching record

  std::string to_csv() const;
  std::string to_json_string() const;
};

// TSV sentence_id<TAB>token_index<TAB>semantic<TAB>grammar. Out-of-range
// scores are fatal; scores for unknown records are skipped with a warning
// count.
std::vector<HumanScore> load_human_scores(const std::string& path);

HumanReport aggregate_human_scores(const std::vector<HumanScore>& scores,
                                   const std::vector<WordRecord>& records,
                                   const std::vector<StratAxis>& axes,
                                   const std::vector<std::int64_t>& freq_edges = kDefaultFrequencyBinEdges);

}  // namespace morphtyp

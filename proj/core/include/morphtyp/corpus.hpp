#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace morphtyp {

struct Token {
  std::string surface;
  std::string lemma;                         // empty = absent
  std::string upos;                          // empty = absent
  std::map<std::string, std::string> feats;  // key=value morphological features

  bool has_lemma() const { return !lemma.empty(); }
  bool has_upos() const { return !upos.empty(); }
};

struct Sentence {
  std::string id;  // "# sent_id" comment or 1-based line number
  std::vector<Token> tokens;
  std::string raw;

  std::size_t size() const { return tokens.size(); }
};

// One sentence per non-empty line, whitespace pre-tokenized. Invalid UTF-8
// is fatal and names the line.
std::vector<Sentence> load_plain_text(const std::string& path);

// CoNLL-U subset: FORM, LEMMA, UPOS and FEATS columns; multiword-token
// ranges and empty nodes are skipped; "_" means absent.
std::vector<Sentence> load_conllu(const std::string& path);

class FrequencyTable {
 public:
  FrequencyTable() = default;

  void add(std::string_view form, std::int64_t n = 1);
  std::int64_t count(std::string_view form) const;  // unseen forms -> 0
  std::int64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }

  void save_tsv(const std::string& path) const;  // form<TAB>count, sorted
  static FrequencyTable load_tsv(const std::string& path);

  const std::unordered_map<std::string, std::int64_t>& counts() const {
    return counts_;
  }

 private:
  std::unordered_map<std::string, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

// Exact surface-form counts; case-sensitive unless `lowercase` is set, in
// which case lookups must be lowercased by the caller too.
FrequencyTable build_frequency_table(const std::vector<Sentence>& corpus,
                                     bool lowercase = false);

// Half-open binning [e_i, e_{i+1}); counts at or above the last edge land
// in the final bin, counts below the first edge in bin 0. Default edges
// {0, 100, 1000}.
extern const std::vector<std::int64_t> kDefaultFrequencyBinEdges;
std::size_t frequency_bin(std::int64_t count,
                          const std::vector<std::int64_t>& edges = kDefaultFrequencyBinEdges);
// Human-readable label for a bin, e.g. "[0,100)" or ">=1000".
std::string frequency_bin_label(std::size_t bin,
                                const std::vector<std::int64_t>& edges = kDefaultFrequencyBinEdges);

struct GoldSegmentationLexicon {
  // word -> ordered morphemes, concatenation equals the word
  std::map<std::string, std::vector<std::string>> entries;
};

struct RejectedRow {
  std::size_t line;
  std::string reason;
};

struct GoldLexiconLoadResult {
  GoldSegmentationLexicon lexicon;
  std::vector<RejectedRow> rejected;
};

// TSV `word<TAB>morph1 morph2 ...`. The concatenation check lowercases both
// sides and strips `alternation_markers` characters from the morphemes
// first; rows that still mismatch are rejected, not repaired.
GoldLexiconLoadResult load_gold_segmentations(const std::string& path,
                                              std::string_view alternation_markers = "");

void save_gold_segmentations(const GoldSegmentationLexicon& lexicon,
                             const std::string& path);

}  // namespace morphtyp

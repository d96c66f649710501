#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphtyp/segmenter.hpp"

namespace morphtyp {

class MorfessorModel : public Segmenter {
 public:
  MorfessorModel() = default;

  std::string method() const override { return "morfessor"; }
  std::optional<std::vector<std::string>> try_segment(std::string_view word) const override;

  // Morph token counts induced by the stored analyses.
  const std::map<std::string, std::int64_t>& morph_counts() const { return morph_counts_; }
  const std::map<std::string, std::vector<std::string>>& analyses() const { return analyses_; }

  // Corpus cost + lexicon cost of the current model state, in nats.
  double description_length() const;
  double corpus_cost() const;
  double lexicon_cost() const;
  // Per-character lexicon price, log(|alphabet| + 1).
  double char_cost() const { return char_cost_; }

  // Description length recorded after initialization and after every
  // training pass; non-increasing.
  const std::vector<double>& dl_history() const { return dl_history_; }

 private:
  std::map<std::string, std::vector<std::string>> analyses_;
  std::map<std::string, std::int64_t> word_counts_;
  std::map<std::string, std::int64_t> morph_counts_;
  std::int64_t total_morph_tokens_ = 0;
  double sum_c_log_c_ = 0.0;        // sum of count*log(count) over morph types
  std::int64_t lexicon_chars_ = 0;  // sum of (len+1) over morph types, code points
  double char_cost_ = 0.0;
  std::vector<double> dl_history_;

  void add_morph(const std::string& m, std::int64_t c);
  void remove_morph(const std::string& m, std::int64_t c);
  void recompute_aggregates();
  std::vector<std::string> resegment(const std::string& s, std::int64_t c);

  friend class ModelIo;
  friend MorfessorModel train_morfessor(const std::map<std::string, std::int64_t>&);
};

// Recursive MDL baseline: greedy binary splitting of word types in
// descending-frequency order, accepting a split only when it strictly
// lowers the total description length; repeated until a full pass changes
// nothing.
MorfessorModel train_morfessor(const std::vector<Sentence>& corpus);
MorfessorModel train_morfessor(const std::map<std::string, std::int64_t>& types);

}  // namespace morphtyp

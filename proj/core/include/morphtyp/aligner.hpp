#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "morphtyp/corpus.hpp"

namespace morphtyp {

// P(target | source). The empty string is the virtual NULL source token
// that absorbs unalignable target words during training.
class TranslationTable {
 public:
  double prob(const std::string& src, const std::string& tgt) const;
  void set(const std::string& src, const std::string& tgt, double p);

  const std::map<std::string, std::map<std::string, double>>& rows() const { return table_; }

  // Per-iteration corpus log-likelihood recorded during training.
  const std::vector<double>& loglik_history() const { return ll_history_; }

  void save_tsv(const std::string& path) const;  // src<TAB>tgt<TAB>prob
  static TranslationTable load_tsv(const std::string& path);

 private:
  std::map<std::string, std::map<std::string, double>> table_;
  std::vector<double> ll_history_;

  friend TranslationTable train_ibm1(const std::vector<std::pair<std::vector<std::string>,
                                                                 std::vector<std::string>>>&,
                                     int, bool);
};

struct SentencePairView {
  std::vector<std::string> src;
  std::vector<std::string> tgt;
};

// IBM Model 1 EM from uniform initialization over co-occurring pairs.
// Deterministic; per-source probabilities are normalized after every
// iteration. `use_null` adds the virtual empty source token.
TranslationTable train_ibm1(
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs,
    int iterations = 5, bool use_null = true);

struct SentenceAlignment {
  std::string sentence_id;
  std::set<std::pair<int, int>> links;  // (ref index, hyp index)
};

// Directional argmax links intersected. Forward: per-ref-word argmax over
// hyp words (ties to the leftmost hyp position); reverse analogous. Words
// with no positive-probability candidate stay unlinked. `grow_diag`
// extends the intersection with union links adjacent to existing ones.
SentenceAlignment align_sentence(const TranslationTable& fwd, const TranslationTable& rev,
                                 const std::vector<std::string>& ref,
                                 const std::vector<std::string>& hyp,
                                 bool grow_diag = false, std::string sentence_id = {});

// Pharaoh format: one line per sentence of space-separated "i-j" 0-based
// links. Bounds are validated against `sizes` when provided (pairs of
// ref/hyp lengths, one per line).
std::vector<SentenceAlignment> load_alignment_pharaoh(
    const std::string& path,
    const std::vector<std::pair<std::size_t, std::size_t>>* sizes = nullptr);

void save_alignment_pharaoh(const std::vector<SentenceAlignment>& alignments,
                            const std::string& path);

// Lowercasing used jointly at training and alignment time.
std::vector<std::string> surfaces(const Sentence& sentence, bool lowercase_forms);

}  // namespace morphtyp

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphtyp/segmenter.hpp"

namespace morphtyp {

struct UnigramTrainOptions {
  double seed_multiplier = 4.0;
  double prune_fraction = 0.2;
  int em_iterations = 2;
  std::string marker{kDefaultMarker};
};

class UnigramModel : public Segmenter {
 public:
  UnigramModel() = default;
  UnigramModel(std::map<std::string, double> piece_logprob, std::string marker)
      : pieces_(std::move(piece_logprob)), marker_(std::move(marker)) {
    refresh_max_len();
  }

  std::string method() const override { return "unigram"; }
  std::string_view marker() const override { return marker_; }

  // Viterbi-optimal segmentation; ties resolved toward fewer pieces, then
  // the lexicographically first piece sequence.
  std::optional<std::vector<std::string>> try_segment(std::string_view word) const override;

  const std::map<std::string, double>& pieces() const { return pieces_; }
  double piece_logprob(const std::string& piece) const;
  // Viterbi log-probability of a fixed piece sequence (for oracles).
  double sequence_logprob(const std::vector<std::string>& pieces) const;

  // Marginal corpus log-likelihood per EM round, one inner vector per run
  // of EM iterations between prunes. Non-decreasing within each round;
  // pruning between rounds shrinks the inventory and may lower it.
  const std::vector<std::vector<double>>& em_loglik_rounds() const { return ll_rounds_; }

 private:
  std::map<std::string, double> pieces_;
  std::string marker_{kDefaultMarker};
  std::size_t max_piece_len_ = 1;  // in code points
  std::vector<std::vector<double>> ll_rounds_;

  void refresh_max_len();

  friend class ModelIo;
  friend UnigramModel train_unigram(const std::map<std::string, std::int64_t>&, std::size_t,
                                    const UnigramTrainOptions&);
};

// Substring-seeded unigram LM training: EM over segmentation-lattice
// marginal counts, interleaved with likelihood-loss pruning until the piece
// inventory fits vocab_size. Single characters are never pruned.
UnigramModel train_unigram(const std::vector<Sentence>& corpus, std::size_t vocab_size,
                           const UnigramTrainOptions& opts = {});
UnigramModel train_unigram(const std::map<std::string, std::int64_t>& types,
                           std::size_t vocab_size, const UnigramTrainOptions& opts = {});

}  // namespace morphtyp

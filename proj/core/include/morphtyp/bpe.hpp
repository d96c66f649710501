#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "morphtyp/segmenter.hpp"

namespace morphtyp {

class BpeModel : public Segmenter {
 public:
  BpeModel() = default;
  BpeModel(std::vector<std::pair<std::string, std::string>> merges,
           std::set<std::string> vocab, std::string marker)
      : merges_(std::move(merges)), vocab_(std::move(vocab)), marker_(std::move(marker)) {}

  std::string method() const override { return "bpe"; }
  std::string_view marker() const override { return marker_; }
  std::optional<std::vector<std::string>> try_segment(std::string_view word) const override;

  const std::vector<std::pair<std::string, std::string>>& merges() const { return merges_; }
  const std::set<std::string>& vocab() const { return vocab_; }

 private:
  std::vector<std::pair<std::string, std::string>> merges_;
  std::set<std::string> vocab_;
  std::string marker_{kDefaultMarker};

  friend class ModelIo;
};

// Word-internal BPE. The most frequent adjacent symbol pair is merged each
// round, ties broken by lexicographic pair order; training stops once the
// symbol vocabulary reaches vocab_size or no pair occurs at least twice.
BpeModel train_bpe(const std::vector<Sentence>& corpus, std::size_t vocab_size,
                   std::string marker = std::string(kDefaultMarker));
BpeModel train_bpe(const std::map<std::string, std::int64_t>& types, std::size_t vocab_size,
                   std::string marker = std::string(kDefaultMarker));

}  // namespace morphtyp

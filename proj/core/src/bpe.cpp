#include "morphtyp/bpe.hpp"

#include <algorithm>
#include <map>

#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

namespace {

using SymbolPair = std::pair<std::string, std::string>;

// Replaces adjacent (a, b) by their concatenation, left to right without
// overlap.
void apply_merge(std::vector<std::string>& symbols, const SymbolPair& merge) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < symbols.size();) {
    if (i + 1 < symbols.size() && symbols[i] == merge.first && symbols[i + 1] == merge.second) {
      symbols[out] = merge.first + merge.second;
      i += 2;
    } else {
      if (out != i) symbols[out] = std::move(symbols[i]);
      i += 1;
    }
    ++out;
  }
  symbols.resize(out);
}

}  // namespace

BpeModel train_bpe(const std::vector<Sentence>& corpus, std::size_t vocab_size,
                   std::string marker) {
  return train_bpe(word_type_counts(corpus), vocab_size, std::move(marker));
}

BpeModel train_bpe(const std::map<std::string, std::int64_t>& types, std::size_t vocab_size,
                   std::string marker) {
  if (types.empty()) throw InputError("train_bpe: empty corpus");

  std::vector<std::vector<std::string>> words;
  std::vector<std::int64_t> counts;
  std::set<std::string> vocab;
  for (const auto& [word, count] : types) {
    std::vector<std::string> cps = utf8_codepoints(word);
    for (const std::string& c : cps) vocab.insert(c);
    words.push_back(std::move(cps));
    counts.push_back(count);
  }
  if (vocab_size <= vocab.size()) {
    throw InputError("train_bpe: vocab_size must exceed the character alphabet (" +
                     std::to_string(vocab.size()) + ")");
  }

  std::vector<SymbolPair> merges;
  while (vocab.size() < vocab_size) {
    std::map<SymbolPair, std::int64_t> pair_counts;
    for (std::size_t w = 0; w < words.size(); ++w) {
      const auto& symbols = words[w];
      for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
        pair_counts[{symbols[i], symbols[i + 1]}] += counts[w];
      }
    }
    // Ordered map scan keeps the lexicographically first pair on count ties.
    const SymbolPair* best = nullptr;
    std::int64_t best_count = 0;
    for (const auto& [pair, count] : pair_counts) {
      if (count > best_count) {
        best = &pair;
        best_count = count;
      }
    }
    if (!best || best_count < 2) break;
    merges.push_back(*best);
    vocab.insert(best->first + best->second);
    for (auto& symbols : words) apply_merge(symbols, merges.back());
  }
  return BpeModel(std::move(merges), std::move(vocab), std::move(marker));
}

std::optional<std::vector<std::string>> BpeModel::try_segment(std::string_view word) const {
  std::vector<std::string> symbols = utf8_codepoints(word);
  for (const auto& merge : merges_) {
    if (symbols.size() < 2) break;
    apply_merge(symbols, merge);
  }
  return apply_marker(std::move(symbols), marker_);
}

}  // namespace morphtyp

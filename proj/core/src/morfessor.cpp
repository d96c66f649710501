#include "morphtyp/morfessor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"
#include "viterbi.hpp"

namespace morphtyp {

namespace {

// A split must buy at least this much description length to be accepted;
// also the floor for the monotonicity contract on dl_history.
constexpr double kAcceptEps = 1e-6;

std::string join_range(const std::vector<std::string>& cps, std::size_t lo, std::size_t hi) {
  std::string s;
  for (std::size_t i = lo; i < hi; ++i) s += cps[i];
  return s;
}

}  // namespace

void MorfessorModel::add_morph(const std::string& m, std::int64_t c) {
  if (c <= 0) return;
  std::int64_t& cur = morph_counts_[m];
  if (cur > 0) sum_c_log_c_ -= static_cast<double>(cur) * std::log(static_cast<double>(cur));
  else lexicon_chars_ += static_cast<std::int64_t>(utf8_length(m)) + 1;
  cur += c;
  sum_c_log_c_ += static_cast<double>(cur) * std::log(static_cast<double>(cur));
  total_morph_tokens_ += c;
}

void MorfessorModel::remove_morph(const std::string& m, std::int64_t c) {
  if (c <= 0) return;
  auto it = morph_counts_.find(m);
  std::int64_t& cur = it->second;
  sum_c_log_c_ -= static_cast<double>(cur) * std::log(static_cast<double>(cur));
  cur -= c;
  total_morph_tokens_ -= c;
  if (cur > 0) {
    sum_c_log_c_ += static_cast<double>(cur) * std::log(static_cast<double>(cur));
  } else {
    lexicon_chars_ -= static_cast<std::int64_t>(utf8_length(m)) + 1;
    morph_counts_.erase(it);
  }
}

// Rebuilds the floating-point aggregates from the integer counts. Used at
// pass boundaries so dl_history entries carry no accumulation drift.
void MorfessorModel::recompute_aggregates() {
  sum_c_log_c_ = 0.0;
  lexicon_chars_ = 0;
  total_morph_tokens_ = 0;
  for (const auto& [m, c] : morph_counts_) {
    sum_c_log_c_ += static_cast<double>(c) * std::log(static_cast<double>(c));
    lexicon_chars_ += static_cast<std::int64_t>(utf8_length(m)) + 1;
    total_morph_tokens_ += c;
  }
}

double MorfessorModel::corpus_cost() const {
  if (total_morph_tokens_ <= 0) return 0.0;
  double n = static_cast<double>(total_morph_tokens_);
  return n * std::log(n) - sum_c_log_c_;
}

double MorfessorModel::lexicon_cost() const {
  return static_cast<double>(lexicon_chars_) * char_cost_;
}

double MorfessorModel::description_length() const {
  return corpus_cost() + lexicon_cost();
}

std::vector<std::string> MorfessorModel::resegment(const std::string& s, std::int64_t c) {
  const std::vector<std::string> cps = utf8_codepoints(s);
  add_morph(s, c);
  double best_dl = description_length();
  std::size_t best_split = 0;
  for (std::size_t i = 1; i < cps.size(); ++i) {
    std::string left = join_range(cps, 0, i);
    std::string right = join_range(cps, i, cps.size());
    remove_morph(s, c);
    add_morph(left, c);
    add_morph(right, c);
    double dl = description_length();
    remove_morph(left, c);
    remove_morph(right, c);
    add_morph(s, c);
    if (dl < best_dl - kAcceptEps) {
      best_dl = dl;
      best_split = i;
    }
  }
  if (best_split == 0) return {s};
  remove_morph(s, c);
  std::vector<std::string> analysis = resegment(join_range(cps, 0, best_split), c);
  std::vector<std::string> right = resegment(join_range(cps, best_split, cps.size()), c);
  analysis.insert(analysis.end(), right.begin(), right.end());
  return analysis;
}

MorfessorModel train_morfessor(const std::vector<Sentence>& corpus) {
  return train_morfessor(word_type_counts(corpus));
}

MorfessorModel train_morfessor(const std::map<std::string, std::int64_t>& types) {
  if (types.empty()) throw InputError("train_morfessor: empty corpus");

  MorfessorModel model;
  std::set<std::string> alphabet;
  for (const auto& [word, count] : types) {
    for (const std::string& c : utf8_codepoints(word)) alphabet.insert(c);
  }
  model.char_cost_ = std::log(static_cast<double>(alphabet.size()) + 1.0);
  model.word_counts_ = types;
  // Type-based costing: every word type contributes once to the corpus
  // cost; token counts only set the processing order.
  for (const auto& [word, count] : types) {
    model.analyses_[word] = {word};
    model.add_morph(word, 1);
  }
  model.recompute_aggregates();
  model.dl_history_.push_back(model.description_length());

  // Descending frequency, ties lexicographic.
  std::vector<std::pair<std::string, std::int64_t>> order(types.begin(), types.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [word, count] : order) {
      std::vector<std::string>& analysis = model.analyses_[word];
      for (const std::string& m : analysis) model.remove_morph(m, 1);
      std::vector<std::string> fresh = model.resegment(word, 1);
      if (fresh != analysis) changed = true;
      analysis = std::move(fresh);
    }
    model.recompute_aggregates();
    model.dl_history_.push_back(model.description_length());
  }
  return model;
}

std::optional<std::vector<std::string>> MorfessorModel::try_segment(std::string_view word) const {
  auto it = analyses_.find(std::string(word));
  if (it != analyses_.end()) return it->second;

  // Unseen word: Viterbi over the learned morph lexicon, with a floor
  // probability for single characters so every word stays segmentable.
  const double n = static_cast<double>(std::max<std::int64_t>(total_morph_tokens_, 1));
  std::size_t max_len = 1;
  for (const auto& [m, c] : morph_counts_) max_len = std::max(max_len, utf8_length(m));
  auto scorer = [&](const std::string& p) -> std::optional<double> {
    auto mit = morph_counts_.find(p);
    if (mit == morph_counts_.end()) return std::nullopt;
    return std::log(static_cast<double>(mit->second)) - std::log(n);
  };
  const double fallback_lp = std::log(0.5) - std::log(n + 1.0);
  auto fallback = [&](const std::string&) { return fallback_lp; };
  detail::ViterbiResult res = detail::viterbi_segment(utf8_codepoints(word), max_len, scorer, fallback);
  return res.pieces;
}

}  // namespace morphtyp

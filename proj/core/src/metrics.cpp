#include "morphtyp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "morphtyp/text_util.hpp"

namespace morphtyp {

namespace {

std::vector<std::string> squeeze_whitespace(std::string_view s) {
  std::vector<std::string> cps;
  for (std::string& cp : utf8_codepoints(s)) {
    if (cp.size() == 1 && (cp[0] == ' ' || cp[0] == '\t' || cp[0] == '\r' || cp[0] == '\n')) {
      continue;
    }
    cps.push_back(std::move(cp));
  }
  return cps;
}

std::map<std::string, int> char_ngrams(const std::vector<std::string>& cps, int n) {
  std::map<std::string, int> grams;
  if (cps.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= cps.size(); ++i) {
    std::string g;
    for (int k = 0; k < n; ++k) g += cps[i + k];
    ++grams[g];
  }
  return grams;
}

int clipped_overlap(const std::map<std::string, int>& hyp, const std::map<std::string, int>& ref) {
  int overlap = 0;
  for (const auto& [g, c] : hyp) {
    auto it = ref.find(g);
    if (it != ref.end()) overlap += std::min(c, it->second);
  }
  return overlap;
}

int total_count(const std::map<std::string, int>& grams) {
  int total = 0;
  for (const auto& [g, c] : grams) total += c;
  return total;
}

}  // namespace

MetricScore sentence_chrf(std::string_view hyp, std::string_view ref, int max_n, double beta) {
  const std::vector<std::string> hyp_cps = squeeze_whitespace(hyp);
  const std::vector<std::string> ref_cps = squeeze_whitespace(ref);
  if (hyp_cps.empty() && ref_cps.empty()) return {0.0, true};

  const double b2 = beta * beta;
  double f_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::string, int> hg = char_ngrams(hyp_cps, n);
    std::map<std::string, int> rg = char_ngrams(ref_cps, n);
    int overlap = clipped_overlap(hg, rg);
    int hyp_total = total_count(hg);
    int ref_total = total_count(rg);
    if (overlap == 0 || hyp_total == 0 || ref_total == 0) continue;  // contributes 0
    double p = static_cast<double>(overlap) / hyp_total;
    double r = static_cast<double>(overlap) / ref_total;
    f_sum += (1.0 + b2) * p * r / (b2 * p + r);
  }
  return {100.0 * f_sum / static_cast<double>(max_n), false};
}

MetricScore sentence_bleu(const std::vector<std::string>& hyp,
                          const std::vector<std::string>& ref, int max_n) {
  if (hyp.empty()) return {0.0, true};

  double log_precision_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    std::map<std::vector<std::string>, int> hyp_grams, ref_grams;
    for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
      ++hyp_grams[std::vector<std::string>(hyp.begin() + i, hyp.begin() + i + n)];
    }
    for (std::size_t i = 0; i + n <= ref.size(); ++i) {
      ++ref_grams[std::vector<std::string>(ref.begin() + i, ref.begin() + i + n)];
    }
    int matches = 0, candidates = 0;
    for (const auto& [g, c] : hyp_grams) {
      candidates += c;
      auto it = ref_grams.find(g);
      if (it != ref_grams.end()) matches += std::min(c, it->second);
    }
    double p;
    if (n == 1) {
      if (matches == 0) return {0.0, false};
      p = static_cast<double>(matches) / candidates;
    } else {
      // per-sentence smoothing; unsmoothed BLEU is 0 whenever any order
      // has no match
      p = static_cast<double>(matches + 1) / static_cast<double>(candidates + 1);
    }
    log_precision_sum += std::log(p);
  }

  double bp = 1.0;
  if (hyp.size() < ref.size()) {
    bp = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size()));
  }
  return {100.0 * bp * std::exp(log_precision_sum / max_n), false};
}

}  // namespace morphtyp

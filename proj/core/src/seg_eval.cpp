#include "morphtyp/seg_eval.hpp"

#include <algorithm>
#include <limits>

#include <nlohmann/json.hpp>

#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

int accuracy_count(const std::vector<std::string>& hyp, const std::vector<std::string>& gold) {
  if (hyp.empty() || gold.empty()) throw InputError("accuracy_count: empty morpheme list");
  return hyp.size() == gold.size() ? 1 : 0;
}

namespace {

double substitution_score(const std::string& a, const std::string& b) {
  std::size_t la = utf8_length(a), lb = utf8_length(b);
  std::size_t denom = std::max(la, lb);
  if (denom == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

enum class Move : uint8_t { None, Diag, Up, Left };

}  // namespace

MorphAlignment nw_align(const std::vector<std::string>& hyp,
                        const std::vector<std::string>& gold, const NwParams& params) {
  if (hyp.empty() || gold.empty()) throw InputError("nw_align: empty morpheme list");
  const std::size_t n = hyp.size(), m = gold.size();
  const double gap = params.gap_penalty;

  std::vector<std::vector<double>> score(n + 1, std::vector<double>(m + 1, 0.0));
  std::vector<std::vector<Move>> moves(n + 1, std::vector<Move>(m + 1, Move::None));
  for (std::size_t i = 1; i <= n; ++i) {
    score[i][0] = score[i - 1][0] + gap;
    moves[i][0] = Move::Up;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    score[0][j] = score[0][j - 1] + gap;
    moves[0][j] = Move::Left;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      double diag = score[i - 1][j - 1] + substitution_score(hyp[i - 1], gold[j - 1]);
      double up = score[i - 1][j] + gap;
      double left = score[i][j - 1] + gap;
      // tie order: diagonal, then up
      double best = diag;
      Move mv = Move::Diag;
      if (up > best) {
        best = up;
        mv = Move::Up;
      }
      if (left > best) {
        best = left;
        mv = Move::Left;
      }
      score[i][j] = best;
      moves[i][j] = mv;
    }
  }

  MorphAlignment out;
  out.score = score[n][m];
  std::size_t i = n, j = m;
  std::vector<AlignedPair> rev;
  while (i > 0 || j > 0) {
    switch (moves[i][j]) {
      case Move::Diag:
        rev.push_back({hyp[i - 1], gold[j - 1]});
        --i;
        --j;
        break;
      case Move::Up:
        rev.push_back({hyp[i - 1], std::nullopt});
        --i;
        break;
      case Move::Left:
        rev.push_back({std::nullopt, gold[j - 1]});
        --j;
        break;
      case Move::None:
        throw NumericError("nw_align: broken traceback");
    }
  }
  out.pairs.assign(rev.rbegin(), rev.rend());
  return out;
}

double exact_segmentation_precision(const std::vector<std::string>& hyp,
                                    const std::vector<std::string>& gold,
                                    bool recall_style, const NwParams& params) {
  if (hyp.empty() || gold.empty()) return 0.0;
  MorphAlignment alignment = nw_align(hyp, gold, params);
  std::size_t matches = 0;
  for (const AlignedPair& p : alignment.pairs) {
    if (p.hyp && p.gold && *p.hyp == *p.gold) ++matches;
  }
  std::size_t denom = recall_style ? gold.size() : hyp.size();
  return static_cast<double>(matches) / static_cast<double>(denom);
}

namespace {

std::size_t group_index(std::size_t gold_count) {
  return std::min<std::size_t>(gold_count, 4) - 1;  // "4" is 4 or more
}

const char* kGroupLabels[4] = {"1", "2", "3", "4+"};

}  // namespace

SegEvalReport eval_grouped(const GoldSegmentationLexicon& lexicon, const Segmenter& model,
                           bool recall_style, const NwParams& params) {
  double acc_sum[4] = {0, 0, 0, 0};
  double prec_sum[4] = {0, 0, 0, 0};
  std::size_t n[4] = {0, 0, 0, 0};
  std::size_t uncovered = 0;

  for (const auto& [word, gold] : lexicon.entries) {
    std::optional<std::vector<std::string>> pieces = model.try_segment(word);
    if (!pieces) {
      ++uncovered;
      continue;
    }
    std::vector<std::string> hyp = strip_markers(std::move(*pieces), model.marker());
    std::size_t g = group_index(gold.size());
    acc_sum[g] += accuracy_count(hyp, gold);
    prec_sum[g] += exact_segmentation_precision(hyp, gold, recall_style, params);
    ++n[g];
  }

  SegEvalReport report;
  report.uncovered = uncovered;
  for (std::size_t g = 0; g < 4; ++g) {
    SegEvalGroup group;
    group.label = kGroupLabels[g];
    group.n = n[g];
    if (n[g] > 0) {
      group.mean_accuracy_count = acc_sum[g] / static_cast<double>(n[g]);
      group.mean_precision = prec_sum[g] / static_cast<double>(n[g]);
    }
    report.groups.push_back(std::move(group));
  }
  return report;
}

std::string SegEvalReport::to_csv() const {
  std::string out = "group,n,accuracy_count,precision\n";
  for (const SegEvalGroup& g : groups) {
    out += g.label;
    out += ",";
    out += std::to_string(g.n);
    out += ",";
    out += g.n > 0 ? format_number(g.mean_accuracy_count) : "";
    out += ",";
    out += g.n > 0 ? format_number(g.mean_precision) : "";
    out += "\n";
  }
  return out;
}

std::string SegEvalReport::to_json_string() const {
  nlohmann::json j;
  j["uncovered"] = uncovered;
  nlohmann::json rows = nlohmann::json::array();
  for (const SegEvalGroup& g : groups) {
    nlohmann::json row;
    row["group"] = g.label;
    row["n"] = g.n;
    if (g.n > 0) {
      row["accuracy_count"] = g.mean_accuracy_count;
      row["precision"] = g.mean_precision;
    } else {
      row["accuracy_count"] = nullptr;
      row["precision"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  j["groups"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace morphtyp

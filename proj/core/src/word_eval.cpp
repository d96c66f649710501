#include "morphtyp/word_eval.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

std::vector<WordRecord> word_accuracy(const Sentence& ref, const Sentence& hyp,
                                      const SentenceAlignment& alignment,
                                      const std::set<std::string>& pos_filter,
                                      bool casefold) {
  for (const auto& [ri, hi] : alignment.links) {
    if (ri < 0 || hi < 0 || static_cast<std::size_t>(ri) >= ref.tokens.size() ||
        static_cast<std::size_t>(hi) >= hyp.tokens.size()) {
      throw InputError("alignment link out of bounds in sentence " + ref.id);
    }
  }
  std::vector<WordRecord> records;
  for (std::size_t i = 0; i < ref.tokens.size(); ++i) {
    const Token& tok = ref.tokens[i];
    if (!tok.has_upos() || pos_filter.count(tok.upos) == 0) continue;
    WordRecord rec;
    rec.sentence_id = ref.id;
    rec.ref_index = static_cast<int>(i);
    rec.surface = tok.surface;
    rec.pos = tok.upos;

    const std::string want = casefold ? lowercase(tok.surface) : tok.surface;
    bool any_link = false;
    for (const auto& [ri, hi] : alignment.links) {
      if (ri != static_cast<int>(i)) continue;
      const std::string& hyp_surface = hyp.tokens[hi].surface;
      if (!any_link) rec.aligned_hyp_surface = hyp_surface;  // first linked token
      any_link = true;
      const std::string got = casefold ? lowercase(hyp_surface) : hyp_surface;
      if (got == want) {
        rec.accuracy = 1;
        rec.aligned_hyp_surface = hyp_surface;
        break;
      }
    }
    if (!any_link) rec.aligned_hyp_surface.clear();
    records.push_back(std::move(rec));
  }
  return records;
}

void annotate_records(std::vector<WordRecord>& records, const AnnotateOptions& opts) {
  for (WordRecord& rec : records) {
    if (opts.freq) {
      rec.train_freq = opts.freq->count(
          opts.lowercase_freq_lookup ? lowercase(rec.surface) : rec.surface);
    }
    if (opts.model_vocab) rec.in_vocab = opts.model_vocab->count(rec.surface) > 0;
    if (opts.segmenter) {
      std::optional<std::vector<std::string>> pieces = opts.segmenter->try_segment(rec.surface);
      if (pieces) rec.morph_count = static_cast<int>(pieces->size());
    }
    if (opts.fusion) {
      auto sit = opts.fusion->find(rec.sentence_id);
      if (sit != opts.fusion->end()) {
        auto tit = sit->second.find(rec.ref_index);
        if (tit != sit->second.end()) rec.fusion = tit->second;
      }
    }
  }
}

std::string strat_axis_name(StratAxis axis) {
  switch (axis) {
    case StratAxis::MorphCount: return "morph_count";
    case StratAxis::FusionBinary: return "fusion_binary";
    case StratAxis::FreqBin: return "freq_bin";
    case StratAxis::InVocab: return "in_vocab";
  }
  return "?";
}

std::optional<StratAxis> parse_strat_axis(std::string_view name) {
  if (name == "morph_count") return StratAxis::MorphCount;
  if (name == "fusion_binary") return StratAxis::FusionBinary;
  if (name == "freq_bin") return StratAxis::FreqBin;
  if (name == "in_vocab") return StratAxis::InVocab;
  return std::nullopt;
}

namespace {

// Morpheme-count strata are capped at "5+" like the reference reports.
std::string morph_count_label(const std::optional<int>& mc) {
  if (!mc) return "na";
  if (*mc >= 5) return "5+";
  return std::to_string(*mc);
}

std::string axis_value(const WordRecord& rec, StratAxis axis,
                       const std::vector<std::int64_t>& freq_edges) {
  switch (axis) {
    case StratAxis::MorphCount:
      return morph_count_label(rec.morph_count);
    case StratAxis::FusionBinary:
      if (!rec.fusion) return "na";
      return *rec.fusion > 0.0 ? "fusion>0" : "fusion=0";
    case StratAxis::FreqBin:
      return frequency_bin_label(frequency_bin(rec.train_freq, freq_edges), freq_edges);
    case StratAxis::InVocab:
      return rec.in_vocab ? "in_vocab" : "not_in_vocab";
  }
  return "?";
}

// Fixed per-axis label order so reports and charts are deterministic.
std::vector<std::string> axis_label_order(StratAxis axis,
                                          const std::vector<std::int64_t>& freq_edges) {
  switch (axis) {
    case StratAxis::MorphCount:
      return {"1", "2", "3", "4", "5+", "na"};
    case StratAxis::FusionBinary:
      return {"fusion=0", "fusion>0", "na"};
    case StratAxis::FreqBin: {
      std::vector<std::string> out;
      for (std::size_t b = 0; b < freq_edges.size(); ++b) {
        out.push_back(frequency_bin_label(b, freq_edges));
      }
      return out;
    }
    case StratAxis::InVocab:
      return {"in_vocab", "not_in_vocab"};
  }
  return {};
}

}  // namespace

std::string StratCell::key() const {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out.push_back('|');
    out += labels[i].first + "=" + labels[i].second;
  }
  return out;
}

StratifiedReport stratify(const std::vector<WordRecord>& records,
                          const std::vector<StratAxis>& axes, std::size_t min_samples,
                          const std::vector<std::int64_t>& freq_edges) {
  if (axes.empty()) throw InputError("stratify: no axes given");

  struct Acc {
    std::size_t n = 0;
    double sum = 0.0;
  };
  std::map<std::vector<std::string>, Acc> cells;
  for (const WordRecord& rec : records) {
    std::vector<std::string> values;
    values.reserve(axes.size());
    for (StratAxis axis : axes) values.push_back(axis_value(rec, axis, freq_edges));
    Acc& acc = cells[values];
    ++acc.n;
    acc.sum += rec.accuracy;
  }

  // Emit in cross-product order of the fixed label lists, skipping empty
  // combinations.
  std::vector<std::vector<std::string>> orders;
  for (StratAxis axis : axes) orders.push_back(axis_label_order(axis, freq_edges));
  std::vector<std::vector<std::string>> combos{{}};
  for (const auto& labels : orders) {
    std::vector<std::vector<std::string>> next;
    for (const auto& combo : combos) {
      for (const std::string& label : labels) {
        std::vector<std::string> ext = combo;
        ext.push_back(label);
        next.push_back(std::move(ext));
      }
    }
    combos = std::move(next);
  }

  StratifiedReport report;
  report.min_samples = min_samples;
  report.total = records.size();
  for (const auto& combo : combos) {
    auto it = cells.find(combo);
    if (it == cells.end()) continue;
    StratCell cell;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      cell.labels.emplace_back(strat_axis_name(axes[a]), combo[a]);
    }
    cell.n = it->second.n;
    if (cell.n >= min_samples) {
      cell.mean_accuracy = it->second.sum / static_cast<double>(cell.n);
    } else {
      cell.suppressed = true;
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string StratifiedReport::to_csv() const {
  std::string out = "cell,n,mean_accuracy,suppressed\n";
  for (const StratCell& c : cells) {
    out += csv_escape(c.key());
    out += ",";
    out += std::to_string(c.n);
    out += ",";
    out += c.suppressed ? "" : format_number(c.mean_accuracy);
    out += ",";
    out += c.suppressed ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::string StratifiedReport::to_json_string() const {
  nlohmann::json j;
  j["min_samples"] = min_samples;
  j["total"] = total;
  nlohmann::json rows = nlohmann::json::array();
  for (const StratCell& c : cells) {
    nlohmann::json row;
    for (const auto& [axis, value] : c.labels) row["labels"][axis] = value;
    row["key"] = c.key();
    row["n"] = c.n;
    if (c.suppressed) row["mean_accuracy"] = nullptr;
    else row["mean_accuracy"] = c.mean_accuracy;
    row["suppressed"] = c.suppressed;
    rows.push_back(std::move(row));
  }
  j["cells"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace {

std::string opt_int_str(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "";
}

std::string opt_num_str(const std::optional<double>& v) {
  return v ? format_number(*v) : "";
}

}  // namespace

void save_records_csv(const std::vector<WordRecord>& records, const std::string& path) {
  std::string out =
      "sentence_id,ref_index,surface,pos,morph_count,fusion,train_freq,in_vocab,accuracy,"
      "aligned_hyp_surface\n";
  for (const WordRecord& r : records) {
    out += csv_join({r.sentence_id, std::to_string(r.ref_index), r.surface, r.pos,
                     opt_int_str(r.morph_count), opt_num_str(r.fusion),
                     std::to_string(r.train_freq), r.in_vocab ? "1" : "0",
                     std::to_string(r.accuracy), r.aligned_hyp_surface});
    out += "\n";
  }
  write_file(path, out);
}

std::vector<WordRecord> load_records_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<WordRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && starts_with(lines[i], "sentence_id,")) continue;
    std::vector<std::string> cols = csv_split(lines[i]);
    if (cols.size() != 10) throw ParseError(path, i + 1, "expected 10 columns");
    WordRecord r;
    r.sentence_id = cols[0];
    try {
      r.ref_index = std::stoi(cols[1]);
      r.surface = cols[2];
      r.pos = cols[3];
      if (!cols[4].empty()) r.morph_count = std::stoi(cols[4]);
      if (!cols[5].empty()) r.fusion = std::stod(cols[5]);
      r.train_freq = std::stoll(cols[6]);
      r.in_vocab = cols[7] == "1";
      r.accuracy = std::stoi(cols[8]);
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "malformed record row");
    }
    r.aligned_hyp_surface = cols[9];
    if (r.accuracy != 0 && r.accuracy != 1) throw ParseError(path, i + 1, "accuracy must be 0 or 1");
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<HumanScore> load_human_scores(const std::string& path) {
  std::vector<HumanScore> scores;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(path, i + 1, "expected sentence_id<TAB>token_index<TAB>semantic<TAB>grammar");
    }
    HumanScore s;
    s.sentence_id = cols[0];
    try {
      s.token_index = std::stoi(cols[1]);
      s.semantic = std::stoi(cols[2]);
      s.grammar = std::stoi(cols[3]);
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "malformed score row");
    }
    if (s.semantic < 1 || s.semantic > 4) {
      throw ParseError(path, i + 1, "semantic score out of range 1..4: " + cols[2]);
    }
    if (s.grammar < 1 || s.grammar > 3) {
      throw ParseError(path, i + 1, "grammar score out of range 1..3: " + cols[3]);
    }
    scores.push_back(std::move(s));
  }
  return scores;
}

HumanReport aggregate_human_scores(const std::vector<HumanScore>& scores,
                                   const std::vector<WordRecord>& records,
                                   const std::vector<StratAxis>& axes,
                                   const std::vector<std::int64_t>& freq_edges) {
  std::map<std::pair<std::string, int>, const WordRecord*> index;
  for (const WordRecord& r : records) index[{r.sentence_id, r.ref_index}] = &r;

  struct Acc {
    std::size_t count = 0;
    std::size_t zero = 0;
  };
  // (stratum, scale, score) -> counts
  std::map<std::tuple<std::string, std::string, int>, Acc> cells;
  HumanReport report;
  for (const HumanScore& s : scores) {
    auto it = index.find({s.sentence_id, s.token_index});
    if (it == index.end()) {
      ++report.skipped;
      continue;
    }
    const WordRecord& rec = *it->second;
    ++report.joined;
    std::string stratum;
    for (StratAxis axis : axes) {
      if (!stratum.empty()) stratum.push_back('|');
      stratum += strat_axis_name(axis) + "=" + axis_value(rec, axis, freq_edges);
    }
    for (const auto& [scale, score] :
         std::initializer_list<std::pair<const char*, int>>{{"semantic", s.semantic},
                                                            {"grammar", s.grammar}}) {
      Acc& acc = cells[{stratum, scale, score}];
      ++acc.count;
      if (rec.accuracy == 0) ++acc.zero;
    }
  }
  for (const auto& [key, acc] : cells) {
    HumanScoreCell cell;
    cell.stratum = std::get<0>(key);
    cell.scale = std::get<1>(key);
    cell.score = std::get<2>(key);
    cell.count = acc.count;
    cell.zero_accuracy = acc.zero;
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string HumanReport::to_csv() const {
  std::string out = "stratum,scale,score,count,zero_accuracy\n";
  for (const HumanScoreCell& c : cells) {
    out += csv_join({c.stratum, c.scale, std::to_string(c.score), std::to_string(c.count),
                     std::to_string(c.zero_accuracy)});
    out += "\n";
  }
  return out;
}

std::string HumanReport::to_json_string() const {
  nlohmann::json j;
  j["joined"] = joined;
  j["skipped"] = skipped;
  nlohmann::json rows = nlohmann::json::array();
  for (const HumanScoreCell& c : cells) {
    rows.push_back({{"stratum", c.stratum},
                    {"scale", c.scale},
                    {"score", c.score},
                    {"count", c.count},
                    {"zero_accuracy", c.zero_accuracy}});
  }
  j["cells"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace morphtyp

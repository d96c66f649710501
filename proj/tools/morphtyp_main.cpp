// morphtyp command line: corpus-level morphological typology indices,
// segmenter training/evaluation, word alignment, stratified MT word
// accuracy, per-sentence predictors and significance analysis.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <set>

#include "morphtyp/aligner.hpp"
#include "morphtyp/bpe.hpp"
#include "morphtyp/chart.hpp"
#include "morphtyp/corpus.hpp"
#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/fusion_annotation.hpp"
#include "morphtyp/indices.hpp"
#include "morphtyp/linear_model.hpp"
#include "morphtyp/metrics.hpp"
#include "morphtyp/morfessor.hpp"
#include "morphtyp/pipeline.hpp"
#include "morphtyp/predictors.hpp"
#include "morphtyp/seg_eval.hpp"
#include "morphtyp/segmenter.hpp"
#include "morphtyp/text_util.hpp"
#include "morphtyp/unigram.hpp"
#include "morphtyp/word_eval.hpp"

namespace {

using namespace morphtyp;

std::vector<Sentence> load_corpus_any(const std::string& path) {
  if (ends_with(path, ".conllu")) return load_conllu(path);
  return load_plain_text(path);
}

std::set<std::string> parse_pos_list(const std::string& csv) {
  std::set<std::string> out;
  for (const std::string& p : split(csv, ',')) {
    if (!p.empty()) out.insert(p);
  }
  return out;
}

std::vector<std::int64_t> parse_edges(const std::string& csv) {
  std::vector<std::int64_t> out;
  for (const std::string& e : split(csv, ',')) out.push_back(std::stoll(e));
  return out;
}

std::vector<StratAxis> parse_axes(const std::string& csv) {
  std::vector<StratAxis> axes;
  for (const std::string& a : split(csv, ',')) {
    std::optional<StratAxis> axis = parse_strat_axis(a);
    if (!axis) throw InputError("unknown stratification axis: " + a);
    axes.push_back(*axis);
  }
  return axes;
}

void report_rejections(const std::vector<RejectedRow>& rejected, const std::string& what) {
  for (const RejectedRow& r : rejected) {
    std::cerr << "warning: " << what << " row " << r.line << " rejected: " << r.reason << "\n";
  }
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string method, input, out;
  std::size_t vocab_size = 8000;
  std::string marker{kDefaultMarker};
  UnigramTrainOptions unigram;
};

void cmd_train(const TrainArgs& args) {
  std::vector<Sentence> corpus = load_plain_text(args.input);
  std::unique_ptr<Segmenter> model;
  if (args.method == "bpe") {
    model = std::make_unique<BpeModel>(train_bpe(corpus, args.vocab_size, args.marker));
  } else if (args.method == "unigram") {
    UnigramTrainOptions opts = args.unigram;
    opts.marker = args.marker;
    model = std::make_unique<UnigramModel>(train_unigram(corpus, args.vocab_size, opts));
  } else if (args.method == "morfessor") {
    model = std::make_unique<MorfessorModel>(train_morfessor(corpus));
  } else {
    throw InputError("unknown method: " + args.method);
  }
  save_model(*model, args.out);
  std::cerr << "wrote " << args.out << "\n";
}

void cmd_segment(const std::string& model_path, const std::string& input,
                 const std::string& out, bool keep_markers) {
  std::unique_ptr<Segmenter> model = load_model(model_path);
  std::string result;
  std::size_t misses = 0;
  for (const std::string& line : read_lines(input)) {
    for (const std::string& word : split_whitespace(line)) {
      std::optional<std::vector<std::string>> pieces = model->try_segment(word);
      if (!pieces) {
        ++misses;
        continue;
      }
      std::vector<std::string> morphs =
          keep_markers ? *pieces : strip_markers(std::move(*pieces), model->marker());
      result += word;
      result.push_back('\t');
      for (std::size_t i = 0; i < morphs.size(); ++i) {
        if (i) result.push_back(' ');
        result += morphs[i];
      }
      result.push_back('\n');
    }
  }
  write_file(out, result);
  if (misses) std::cerr << misses << " words not covered by the model\n";
}

void cmd_eval_seg(const std::string& gold_path, const std::string& model_path,
                  const std::string& out, const std::string& json_out, bool recall_style,
                  double gap_penalty, const std::string& alternation) {
  GoldLexiconLoadResult gold = load_gold_segmentations(gold_path, alternation);
  report_rejections(gold.rejected, "gold lexicon");
  std::unique_ptr<Segmenter> model = load_model(model_path);
  NwParams params;
  params.gap_penalty = gap_penalty;
  SegEvalReport report = eval_grouped(gold.lexicon, *model, recall_style, params);
  write_file(out, report.to_csv());
  if (!json_out.empty()) write_file(json_out, report.to_json_string());
  std::cout << report.to_csv();
}

void cmd_synthesis(const std::string& input, const std::string& model_path,
                   const std::string& ext_path) {
  std::vector<Sentence> corpus = load_corpus_any(input);
  std::unique_ptr<Segmenter> model;
  if (!model_path.empty()) {
    model = load_model(model_path);
  } else {
    std::vector<RejectedRow> rejected;
    model = std::make_unique<ExternalSegmentation>(
        ExternalSegmentation::load_tsv(ext_path, "external", &rejected));
    report_rejections(rejected, "segmentation");
  }
  std::size_t skipped = 0;
  double value = synthesis_text(corpus, *model, &skipped);
  std::cout << "synthesis\t" << format_number(value) << "\n";
  if (skipped) std::cerr << skipped << " tokens skipped (not covered)\n";
}

void cmd_fusion_extract(const std::string& input, const std::string& out,
                        const std::string& pos_csv, bool as_sheet) {
  std::vector<Sentence> corpus = load_conllu(input);
  ExtractResult result = extract_unique_paradigms(corpus, parse_pos_list(pos_csv));
  if (result.missing_lemma) {
    std::cerr << result.missing_lemma << " tokens lacked a lemma; keyed as 'other'\n";
  }
  if (as_sheet) {
    emit_annotation_sheet(result.entries, out);
  } else {
    std::string tsv = "paradigm_id\tfeatures\ttermination\tsample_form\toccurrences\n";
    for (std::size_t i = 0; i < result.entries.size(); ++i) {
      const ParadigmEntry& e = result.entries[i];
      tsv += "p" + std::to_string(i + 1) + "\t" + e.key.bundle + "\t" +
             termination_label(e.key.termination) + "\t" + e.sample_form + "\t" +
             std::to_string(e.occurrences) + "\n";
    }
    write_file(out, tsv);
  }
  std::cerr << result.entries.size() << " unique paradigms\n";
}

void cmd_fusion_ingest(const std::string& sheet, const std::string& out) {
  IngestResult result = ingest_annotation_sheet(sheet);
  report_rejections(result.rejected, "annotation sheet");
  write_annotations(result.annotations, out);
  std::cerr << result.annotations.size() << " annotations ingested\n";
}

void cmd_fusion_project(const std::string& input, const std::string& annotations_path,
                        const std::string& out, const std::string& overrides_path,
                        const std::string& exceptions_path, const std::string& pos_csv) {
  std::vector<Sentence> corpus = load_conllu(input);
  IngestResult ann = ingest_annotation_sheet(annotations_path);
  report_rejections(ann.rejected, "annotation sheet");
  OverrideTable overrides;
  if (!overrides_path.empty()) overrides = load_overrides(overrides_path);
  std::vector<LemmaException> exceptions;
  if (!exceptions_path.empty()) exceptions = load_lemma_exceptions(exceptions_path);
  ProjectionResult proj =
      project_fusion(corpus, ann.annotations, overrides, exceptions, parse_pos_list(pos_csv));

  std::string tsv;
  for (const auto& [ref, fusion] : proj.assignments) {
    tsv += ref.sentence_id + "\t" + std::to_string(ref.token_index) + "\t" +
           format_number(fusion) + "\n";
  }
  write_file(out, tsv);
  std::cerr << "coverage " << format_number(proj.coverage()) << " (" << proj.covered << "/"
            << proj.verbs << " verbs); " << proj.uncovered.size() << " uncovered\n";
}

std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> paired_surfaces(
    const std::vector<Sentence>& ref, const std::vector<Sentence>& hyp, bool lower) {
  if (ref.size() != hyp.size()) {
    throw InputError("reference and hypothesis differ in sentence count (" +
                     std::to_string(ref.size()) + " vs " + std::to_string(hyp.size()) + ")");
  }
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    pairs.emplace_back(surfaces(ref[i], lower), surfaces(hyp[i], lower));
  }
  return pairs;
}

void cmd_align_train(const std::string& ref_path, const std::string& hyp_path,
                     const std::string& out_fwd, const std::string& out_rev, int iterations,
                     bool lower) {
  std::vector<Sentence> ref = load_corpus_any(ref_path);
  std::vector<Sentence> hyp = load_corpus_any(hyp_path);
  auto pairs = paired_surfaces(ref, hyp, lower);
  TranslationTable fwd = train_ibm1(pairs, iterations);
  fwd.save_tsv(out_fwd);
  decltype(pairs) rev_pairs;
  for (const auto& [r, h] : pairs) rev_pairs.emplace_back(h, r);
  TranslationTable rev = train_ibm1(rev_pairs, iterations);
  rev.save_tsv(out_rev);
}

void cmd_align_apply(const std::string& ref_path, const std::string& hyp_path,
                     const std::string& fwd_path, const std::string& rev_path,
                     const std::string& out, bool grow_diag, bool lower) {
  std::vector<Sentence> ref = load_corpus_any(ref_path);
  std::vector<Sentence> hyp = load_corpus_any(hyp_path);
  auto pairs = paired_surfaces(ref, hyp, lower);
  TranslationTable fwd = TranslationTable::load_tsv(fwd_path);
  TranslationTable rev = TranslationTable::load_tsv(rev_path);
  std::vector<SentenceAlignment> alignments;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    alignments.push_back(
        align_sentence(fwd, rev, pairs[i].first, pairs[i].second, grow_diag, ref[i].id));
  }
  save_alignment_pharaoh(alignments, out);
}

void cmd_align_import(const std::string& input, const std::string& ref_path,
                      const std::string& hyp_path, const std::string& out) {
  std::vector<Sentence> ref = load_corpus_any(ref_path);
  std::vector<Sentence> hyp = load_corpus_any(hyp_path);
  if (ref.size() != hyp.size()) {
    throw InputError("reference and hypothesis differ in sentence count");
  }
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  for (std::size_t i = 0; i < ref.size(); ++i) sizes.emplace_back(ref[i].size(), hyp[i].size());
  std::vector<SentenceAlignment> alignments = load_alignment_pharaoh(input, &sizes);
  save_alignment_pharaoh(alignments, out);
  std::cerr << alignments.size() << " sentence alignments validated\n";
}

struct WordEvalArgs {
  std::string ref, hyp, align, records_out;
  std::string freq_table, train, vocab, model, segmentations, fusion;
  std::string report_csv, report_json;
  std::string pos_csv = "NOUN,VERB";
  std::string axes_csv = "freq_bin,in_vocab,morph_count";
  std::string edges_csv = "0,100,1000";
  std::size_t min_samples = 30;
  bool casefold = false;
  bool lowercase_freq = false;
};

void cmd_word_eval(const WordEvalArgs& args) {
  std::vector<Sentence> ref = load_conllu(args.ref);
  std::vector<Sentence> hyp = load_plain_text(args.hyp);
  if (ref.size() != hyp.size()) {
    throw InputError("reference and hypothesis differ in sentence count");
  }
  std::vector<std::pair<std::size_t, std::size_t>> sizes;
  for (std::size_t i = 0; i < ref.size(); ++i) sizes.emplace_back(ref[i].size(), hyp[i].size());
  std::vector<SentenceAlignment> alignments = load_alignment_pharaoh(args.align, &sizes);

  const std::set<std::string> pos = parse_pos_list(args.pos_csv);
  std::vector<WordRecord> records;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::vector<WordRecord> recs =
        word_accuracy(ref[i], hyp[i], alignments[i], pos, args.casefold);
    records.insert(records.end(), recs.begin(), recs.end());
  }

  FrequencyTable freq;
  if (!args.freq_table.empty()) {
    freq = FrequencyTable::load_tsv(args.freq_table);
  } else if (!args.train.empty()) {
    freq = build_frequency_table(load_plain_text(args.train), args.lowercase_freq);
  }
  std::set<std::string> vocab;
  if (!args.vocab.empty()) {
    for (const std::string& line : read_lines(args.vocab)) {
      if (!line.empty()) vocab.insert(line);
    }
  }
  std::unique_ptr<Segmenter> model;
  if (!args.model.empty()) {
    model = load_model(args.model);
  } else if (!args.segmentations.empty()) {
    std::vector<RejectedRow> rejected;
    model = std::make_unique<ExternalSegmentation>(
        ExternalSegmentation::load_tsv(args.segmentations, "external", &rejected));
    report_rejections(rejected, "segmentation");
  }
  std::map<std::string, std::map<int, double>> fusion;
  if (!args.fusion.empty()) {
    const std::vector<std::string> lines = read_lines(args.fusion);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      std::vector<std::string> cols = split(lines[i], '\t');
      if (cols.size() != 3) throw ParseError(args.fusion, i + 1, "expected id<TAB>index<TAB>fusion");
      fusion[cols[0]][std::stoi(cols[1])] = std::stod(cols[2]);
    }
  }

  AnnotateOptions opts;
  if (freq.total() > 0) opts.freq = &freq;
  if (!vocab.empty()) opts.model_vocab = &vocab;
  if (model) opts.segmenter = model.get();
  if (!fusion.empty()) opts.fusion = &fusion;
  opts.lowercase_freq_lookup = args.lowercase_freq;
  annotate_records(records, opts);
  save_records_csv(records, args.records_out);

  if (!args.report_csv.empty() || !args.report_json.empty()) {
    StratifiedReport report = stratify(records, parse_axes(args.axes_csv), args.min_samples,
                                       parse_edges(args.edges_csv));
    if (!args.report_csv.empty()) write_file(args.report_csv, report.to_csv());
    if (!args.report_json.empty()) write_file(args.report_json, report.to_json_string());
  }
  std::cerr << records.size() << " word records\n";
}

void cmd_human_join(const std::string& records_path, const std::string& scores_path,
                    const std::string& out, const std::string& json_out,
                    const std::string& axes_csv, const std::string& edges_csv) {
  std::vector<WordRecord> records = load_records_csv(records_path);
  std::vector<HumanScore> scores = load_human_scores(scores_path);
  HumanReport report =
      aggregate_human_scores(scores, records, parse_axes(axes_csv), parse_edges(edges_csv));
  write_file(out, report.to_csv());
  if (!json_out.empty()) write_file(json_out, report.to_json_string());
  std::cerr << report.joined << " scores joined, " << report.skipped << " skipped\n";
}

void cmd_metrics(const std::string& ref_path, const std::string& hyp_path,
                 const std::string& out, int bleu_n, int chrf_n, double beta) {
  std::vector<Sentence> ref = load_corpus_any(ref_path);
  std::vector<Sentence> hyp = load_plain_text(hyp_path);
  if (ref.size() != hyp.size()) {
    throw InputError("reference and hypothesis differ in sentence count");
  }
  std::string csv = "sentence_id,bleu,chrf\n";
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::vector<std::string> r = surfaces(ref[i], false), h = surfaces(hyp[i], false);
    std::string r_joined;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k) r_joined.push_back(' ');
      r_joined += r[k];
    }
    csv += csv_join({ref[i].id, format_number(sentence_bleu(h, r, bleu_n).value),
                     format_number(sentence_chrf(hyp[i].raw, r_joined, chrf_n, beta).value)});
    csv += "\n";
  }
  write_file(out, csv);
}

struct PredictorsArgs {
  std::string mode = "synthesis";
  std::string ref, src, hyp, scores, out;
  std::string analyzer, analyzer_tsv, fusion;
  std::vector<std::string> models;  // name=path
  std::string pos_csv = "VERB,AUX";
};

void cmd_predictors(const PredictorsArgs& args) {
  std::vector<Sentence> ref = load_conllu(args.ref);

  std::vector<std::pair<std::string, std::unique_ptr<Segmenter>>> owned;
  for (const std::string& spec : args.models) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos) throw InputError("--models expects name=path: " + spec);
    owned.emplace_back(spec.substr(0, eq), load_model(spec.substr(eq + 1)));
  }
  NamedSegmenters named;
  for (const auto& [name, model] : owned) named.emplace_back(name, model.get());

  std::unique_ptr<Segmenter> analyzer;
  if (!args.analyzer.empty()) {
    analyzer = load_model(args.analyzer);
  } else if (!args.analyzer_tsv.empty()) {
    std::vector<RejectedRow> rejected;
    analyzer = std::make_unique<ExternalSegmentation>(
        ExternalSegmentation::load_tsv(args.analyzer_tsv, "analyzer", &rejected));
    report_rejections(rejected, "analyzer segmentation");
  }

  std::map<std::string, std::map<int, double>> fusion;
  if (!args.fusion.empty()) {
    const std::vector<std::string> lines = read_lines(args.fusion);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      std::vector<std::string> cols = split(lines[i], '\t');
      if (cols.size() != 3) throw ParseError(args.fusion, i + 1, "expected id<TAB>index<TAB>fusion");
      fusion[cols[0]][std::stoi(cols[1])] = std::stod(cols[2]);
    }
  }

  std::vector<Sentence> src;
  if (args.mode == "bilingual") {
    if (args.src.empty()) throw InputError("bilingual mode needs --src");
    src = load_conllu(args.src);
    if (src.size() != ref.size()) throw InputError("src and ref differ in sentence count");
  }

  // responses: computed against --hyp, or joined from --scores
  std::map<std::string, std::map<std::string, double>> responses;  // id -> metric -> value
  std::vector<std::string> response_names;
  if (!args.hyp.empty()) {
    std::vector<Sentence> hyp = load_plain_text(args.hyp);
    if (hyp.size() != ref.size()) throw InputError("hyp and ref differ in sentence count");
    response_names = {"bleu", "chrf"};
    for (std::size_t i = 0; i < ref.size(); ++i) {
      std::vector<std::string> r = surfaces(ref[i], false), h = surfaces(hyp[i], false);
      std::string r_joined;
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) r_joined.push_back(' ');
        r_joined += r[k];
      }
      responses[ref[i].id]["bleu"] = sentence_bleu(h, r).value;
      responses[ref[i].id]["chrf"] = sentence_chrf(hyp[i].raw, r_joined).value;
    }
  } else if (!args.scores.empty()) {
    const std::vector<std::string> lines = read_lines(args.scores);
    if (lines.empty()) throw InputError("empty scores file");
    std::vector<std::string> header = csv_split(lines[0]);
    if (header.empty() || header[0] != "sentence_id") {
      throw ParseError(args.scores, 1, "first column must be sentence_id");
    }
    response_names.assign(header.begin() + 1, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      std::vector<std::string> cols = csv_split(lines[i]);
      if (cols.size() != header.size()) throw ParseError(args.scores, i + 1, "column mismatch");
      for (std::size_t c = 1; c < cols.size(); ++c) {
        responses[cols[0]][header[c]] = std::stod(cols[c]);
      }
    }
  } else {
    throw InputError("predictors needs --hyp or --scores for the response");
  }

  std::vector<PredictorRow> rows;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::map<std::string, double> preds;
    if (args.mode == "synthesis") {
      preds = compute_predictors_synthesis(ref[i], analyzer.get(), named);
    } else if (args.mode == "fusion") {
      std::map<int, double> verb_fusion;
      auto it = fusion.find(ref[i].id);
      if (it != fusion.end()) verb_fusion = it->second;
      preds = compute_predictors_fusion(ref[i], verb_fusion, named, parse_pos_list(args.pos_csv));
    } else if (args.mode == "bilingual") {
      preds = compute_predictors_bilingual(src[i], ref[i], named);
    } else {
      throw InputError("unknown mode: " + args.mode);
    }
    auto rit = responses.find(ref[i].id);
    if (preds.empty() || rit == responses.end()) {
      ++excluded;
      continue;
    }
    PredictorRow row;
    row.sentence_id = ref[i].id;
    row.predictors = std::move(preds);
    row.responses = rit->second;
    rows.push_back(std::move(row));
  }

  std::set<std::string> common;
  bool first = true;
  for (const PredictorRow& row : rows) {
    std::set<std::string> names;
    for (const auto& [name, v] : row.predictors) names.insert(name);
    if (first) {
      common = std::move(names);
      first = false;
    } else {
      std::set<std::string> kept;
      std::set_intersection(common.begin(), common.end(), names.begin(), names.end(),
                            std::inserter(kept, kept.begin()));
      common = std::move(kept);
    }
  }
  std::vector<ExcludedRow> dropped;
  PredictorTable table = build_table(rows, {common.begin(), common.end()}, response_names,
                                     &dropped);
  table.save_csv(args.out);
  std::cerr << table.rows.size() << " rows, " << excluded + dropped.size() << " excluded\n";
}

struct FitArgs {
  std::string table, response, out, grid, system = "system";
  double alpha = 0.05;
  bool no_standardize = false;
  bool bonferroni = false;
  bool drop_collinear = false;
  bool marginal = false;
};

void cmd_fit(const FitArgs& args) {
  PredictorTable table = PredictorTable::load_csv(args.table);
  FitOptions options;
  options.standardize = !args.no_standardize;
  options.drop_collinear = args.drop_collinear;

  if (args.marginal) {
    // one single-predictor model per column, reported side by side
    std::string json = "{\n  \"mode\": \"marginal\",\n  \"response\": \"" + args.response +
                       "\",\n  \"predictors\": [\n";
    bool first = true;
    for (const std::string& name : table.predictor_names) {
      PredictorTable sub = table;
      sub.predictor_names = {name};
      LinearModelFit fit = fit_linear_model(sub, args.response, options);
      if (!first) json += ",\n";
      first = false;
      std::string entry = fit.to_json_string(args.alpha);
      json += entry.substr(0, entry.size() - 1);  // strip trailing newline
    }
    json += "\n  ]\n}\n";
    write_file(args.out, json);
  } else {
    LinearModelFit fit = fit_linear_model(table, args.response, options);
    write_file(args.out, fit.to_json_string(args.alpha));
    for (const SignificantPredictor& sp :
         significant_predictors(fit, args.alpha, args.bonferroni)) {
      std::cout << sp.name << "\t" << (sp.sign >= 0 ? "+" : "-") << "\tt="
                << format_number(sp.t) << "\tp=" << format_number(sp.p) << "\n";
    }
    if (!args.grid.empty()) {
      SignificanceGrid grid;
      if (std::filesystem::exists(args.grid)) grid = SignificanceGrid::load_csv(args.grid);
      add_to_grid(grid, args.system + ":" + args.response, fit, args.alpha, args.bonferroni);
      write_file(args.grid, grid.to_csv());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphological typology toolkit"};
  app.require_subcommand(1);

  // train
  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a subword segmenter");
  train->add_option("--method", train_args.method, "bpe | unigram | morfessor")->required();
  train->add_option("--input", train_args.input, "training corpus, one sentence per line")
      ->required();
  train->add_option("--vocab-size", train_args.vocab_size, "target symbol vocabulary");
  train->add_option("--out", train_args.out, "model JSON path")->required();
  train->add_option("--marker", train_args.marker, "continuation marker");
  train->add_option("--seed-multiplier", train_args.unigram.seed_multiplier);
  train->add_option("--prune-fraction", train_args.unigram.prune_fraction);
  train->add_option("--em-iterations", train_args.unigram.em_iterations);

  // segment
  std::string seg_model, seg_input, seg_out;
  bool seg_keep_markers = false;
  CLI::App* segment = app.add_subcommand("segment", "segment words with a trained model");
  segment->add_option("--model", seg_model)->required();
  segment->add_option("--input", seg_input, "words, whitespace separated")->required();
  segment->add_option("--out", seg_out, "TSV word<TAB>morphemes")->required();
  segment->add_flag("--keep-markers", seg_keep_markers);

  // eval-seg
  std::string es_gold, es_model, es_out, es_json, es_alt;
  bool es_recall = false;
  double es_gap = -0.5;
  CLI::App* eval_seg = app.add_subcommand("eval-seg", "score a segmenter against gold");
  eval_seg->add_option("--gold", es_gold)->required();
  eval_seg->add_option("--model", es_model)->required();
  eval_seg->add_option("--out", es_out)->required();
  eval_seg->add_option("--json", es_json);
  eval_seg->add_flag("--recall-denominator", es_recall, "divide by |gold| instead of |hyp|");
  eval_seg->add_option("--gap-penalty", es_gap);
  eval_seg->add_option("--strip-alternation", es_alt, "stem-alternation marker characters");

  // synthesis
  std::string syn_input, syn_model, syn_ext;
  CLI::App* synthesis = app.add_subcommand("synthesis", "text-level synthesis index");
  synthesis->add_option("--input", syn_input)->required();
  synthesis->add_option("--model", syn_model);
  synthesis->add_option("--segmentations", syn_ext, "external segmentation TSV");

  // fusion
  CLI::App* fusion = app.add_subcommand("fusion", "fusion annotation workflow");
  fusion->require_subcommand(1);
  std::string fx_input, fx_out, fx_pos = "VERB,AUX";
  CLI::App* f_extract = fusion->add_subcommand("extract", "list unique verb paradigms");
  f_extract->add_option("--input", fx_input)->required();
  f_extract->add_option("--out", fx_out)->required();
  f_extract->add_option("--pos", fx_pos);
  std::string fs_input, fs_out, fs_pos = "VERB,AUX";
  CLI::App* f_sheet = fusion->add_subcommand("sheet", "emit a blank annotation sheet");
  f_sheet->add_option("--input", fs_input)->required();
  f_sheet->add_option("--out", fs_out)->required();
  f_sheet->add_option("--pos", fs_pos);
  std::string fi_sheet, fi_out;
  CLI::App* f_ingest = fusion->add_subcommand("ingest", "validate a filled annotation sheet");
  f_ingest->add_option("--sheet", fi_sheet)->required();
  f_ingest->add_option("--out", fi_out)->required();
  std::string fp_input, fp_ann, fp_out, fp_overrides, fp_exceptions, fp_pos = "VERB,AUX";
  CLI::App* f_project = fusion->add_subcommand("project", "project fusion onto a corpus");
  f_project->add_option("--input", fp_input)->required();
  f_project->add_option("--annotations", fp_ann)->required();
  f_project->add_option("--out", fp_out)->required();
  f_project->add_option("--overrides", fp_overrides);
  f_project->add_option("--exceptions", fp_exceptions);
  f_project->add_option("--pos", fp_pos);

  // align
  CLI::App* align = app.add_subcommand("align", "statistical word alignment");
  align->require_subcommand(1);
  std::string at_ref, at_hyp, at_fwd, at_rev;
  int at_iters = 5;
  bool at_no_lower = false;
  CLI::App* a_train = align->add_subcommand("train", "train IBM-1 tables both ways");
  a_train->add_option("--ref", at_ref)->required();
  a_train->add_option("--hyp", at_hyp)->required();
  a_train->add_option("--out-fwd", at_fwd)->required();
  a_train->add_option("--out-rev", at_rev)->required();
  a_train->add_option("--iterations", at_iters);
  a_train->add_flag("--no-lowercase", at_no_lower);
  std::string aa_ref, aa_hyp, aa_fwd, aa_rev, aa_out;
  bool aa_grow = false, aa_no_lower = false;
  CLI::App* a_apply = align->add_subcommand("apply", "intersect directional argmax links");
  a_apply->add_option("--ref", aa_ref)->required();
  a_apply->add_option("--hyp", aa_hyp)->required();
  a_apply->add_option("--table-fwd", aa_fwd)->required();
  a_apply->add_option("--table-rev", aa_rev)->required();
  a_apply->add_option("--out", aa_out)->required();
  a_apply->add_flag("--grow-diag", aa_grow);
  a_apply->add_flag("--no-lowercase", aa_no_lower);
  std::string ai_input, ai_ref, ai_hyp, ai_out;
  CLI::App* a_import = align->add_subcommand("import", "validate external Pharaoh alignments");
  a_import->add_option("--input", ai_input)->required();
  a_import->add_option("--ref", ai_ref)->required();
  a_import->add_option("--hyp", ai_hyp)->required();
  a_import->add_option("--out", ai_out)->required();

  // word-eval
  WordEvalArgs we;
  CLI::App* word_eval = app.add_subcommand("word-eval", "stratified word-level accuracy");
  word_eval->add_option("--ref", we.ref, "reference CoNLL-U")->required();
  word_eval->add_option("--hyp", we.hyp, "hypothesis text")->required();
  word_eval->add_option("--align", we.align, "Pharaoh alignment")->required();
  word_eval->add_option("--records", we.records_out, "records CSV out")->required();
  word_eval->add_option("--freq-table", we.freq_table);
  word_eval->add_option("--train", we.train, "training corpus for frequencies");
  word_eval->add_option("--vocab", we.vocab, "model vocabulary word list");
  word_eval->add_option("--model", we.model, "segmenter model for morph counts");
  word_eval->add_option("--segmentations", we.segmentations);
  word_eval->add_option("--fusion", we.fusion, "projected fusion TSV");
  word_eval->add_option("--report", we.report_csv);
  word_eval->add_option("--report-json", we.report_json);
  word_eval->add_option("--pos", we.pos_csv);
  word_eval->add_option("--axes", we.axes_csv);
  word_eval->add_option("--freq-edges", we.edges_csv);
  word_eval->add_option("--min-samples", we.min_samples);
  word_eval->add_flag("--casefold", we.casefold);
  word_eval->add_flag("--lowercase", we.lowercase_freq, "lowercase corpus and lookups jointly");

  // human-join
  std::string hj_records, hj_scores, hj_out, hj_json, hj_axes = "freq_bin",
              hj_edges = "0,100,1000";
  CLI::App* human_join = app.add_subcommand("human-join", "join and aggregate human scores");
  human_join->add_option("--records", hj_records)->required();
  human_join->add_option("--scores", hj_scores)->required();
  human_join->add_option("--out", hj_out)->required();
  human_join->add_option("--json", hj_json);
  human_join->add_option("--axes", hj_axes);
  human_join->add_option("--freq-edges", hj_edges);

  // metrics
  std::string me_ref, me_hyp, me_out;
  int me_bleu_n = 4, me_chrf_n = 6;
  double me_beta = 2.0;
  CLI::App* metrics = app.add_subcommand("metrics", "sentence BLEU and chrF");
  metrics->add_option("--ref", me_ref)->required();
  metrics->add_option("--hyp", me_hyp)->required();
  metrics->add_option("--out", me_out)->required();
  metrics->add_option("--bleu-max-n", me_bleu_n);
  metrics->add_option("--chrf-max-n", me_chrf_n);
  metrics->add_option("--beta", me_beta);

  // predictors
  PredictorsArgs pr;
  CLI::App* predictors = app.add_subcommand("predictors", "per-sentence predictor table");
  predictors->add_option("--mode", pr.mode, "synthesis | fusion | bilingual");
  predictors->add_option("--ref", pr.ref, "reference CoNLL-U")->required();
  predictors->add_option("--src", pr.src, "source CoNLL-U (bilingual mode)");
  predictors->add_option("--hyp", pr.hyp, "hypothesis text (computes bleu/chrf)");
  predictors->add_option("--scores", pr.scores, "precomputed response CSV");
  predictors->add_option("--analyzer", pr.analyzer, "segmenter model for morph.count");
  predictors->add_option("--analyzer-tsv", pr.analyzer_tsv);
  predictors->add_option("--models", pr.models, "name=model.json, repeatable");
  predictors->add_option("--fusion", pr.fusion, "projected fusion TSV (fusion mode)");
  predictors->add_option("--pos", pr.pos_csv);
  predictors->add_option("--out", pr.out)->required();

  // fit
  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "linear model and significant predictors");
  fit->add_option("--table", fit_args.table)->required();
  fit->add_option("--response", fit_args.response)->required();
  fit->add_option("--out", fit_args.out)->required();
  fit->add_option("--alpha", fit_args.alpha);
  fit->add_option("--grid", fit_args.grid, "significance grid CSV to update");
  fit->add_option("--system", fit_args.system, "system name for the grid column");
  fit->add_flag("--no-standardize", fit_args.no_standardize);
  fit->add_flag("--bonferroni", fit_args.bonferroni);
  fit->add_flag("--drop-collinear", fit_args.drop_collinear);
  fit->add_flag("--marginal", fit_args.marginal, "one single-predictor model per column");

  // chart
  std::string ch_style, ch_input, ch_out, ch_title;
  CLI::App* chart = app.add_subcommand("chart", "render a report as SVG");
  chart->add_option("--style", ch_style, "grouped-bars | bubble | grid")->required();
  chart->add_option("--input", ch_input, "report file (json or csv)")->required();
  chart->add_option("--out", ch_out)->required();
  chart->add_option("--title", ch_title);

  // run
  std::string run_config;
  std::vector<std::string> run_sets;
  CLI::App* run = app.add_subcommand("run", "execute a configured pipeline");
  run->add_option("--config", run_config)->required();
  run->add_option("--set", run_sets, "dotted config override key=value, repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help/error text
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) cmd_train(train_args);
    else if (*segment) cmd_segment(seg_model, seg_input, seg_out, seg_keep_markers);
    else if (*eval_seg) cmd_eval_seg(es_gold, es_model, es_out, es_json, es_recall, es_gap, es_alt);
    else if (*synthesis) {
      if (syn_model.empty() && syn_ext.empty()) {
        throw InputError("synthesis needs --model or --segmentations");
      }
      cmd_synthesis(syn_input, syn_model, syn_ext);
    } else if (*fusion) {
      if (*f_extract) cmd_fusion_extract(fx_input, fx_out, fx_pos, false);
      else if (*f_sheet) cmd_fusion_extract(fs_input, fs_out, fs_pos, true);
      else if (*f_ingest) cmd_fusion_ingest(fi_sheet, fi_out);
      else if (*f_project)
        cmd_fusion_project(fp_input, fp_ann, fp_out, fp_overrides, fp_exceptions, fp_pos);
    } else if (*align) {
      if (*a_train) cmd_align_train(at_ref, at_hyp, at_fwd, at_rev, at_iters, !at_no_lower);
      else if (*a_apply)
        cmd_align_apply(aa_ref, aa_hyp, aa_fwd, aa_rev, aa_out, aa_grow, !aa_no_lower);
      else if (*a_import) cmd_align_import(ai_input, ai_ref, ai_hyp, ai_out);
    } else if (*word_eval) {
      cmd_word_eval(we);
    } else if (*human_join) {
      cmd_human_join(hj_records, hj_scores, hj_out, hj_json, hj_axes, hj_edges);
    } else if (*metrics) {
      cmd_metrics(me_ref, me_hyp, me_out, me_bleu_n, me_chrf_n, me_beta);
    } else if (*predictors) {
      cmd_predictors(pr);
    } else if (*fit) {
      cmd_fit(fit_args);
    } else if (*chart) {
      render_chart_to_file(ch_style, ch_input, ch_out, ch_title);
    } else if (*run) {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (const std::string& kv : run_sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value: " + kv);
        overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      RunReport report = run_pipeline(run_config, overrides);
      std::cerr << "manifest: " << report.manifest_path << "\n";
      if (!report.ok) {
        std::cerr << "stage " << report.failed_stage << " failed: " << report.error << "\n";
        return 1;
      }
    }
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

#include "morphtyp/pipeline.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <set>

#include <nlohmann/json.hpp>

#include "morphtyp/aligner.hpp"
#include "morphtyp/bpe.hpp"
#include "morphtyp/chart.hpp"
#include "morphtyp/corpus.hpp"
#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/fusion_annotation.hpp"
#include "morphtyp/hash.hpp"
#include "morphtyp/indices.hpp"
#include "morphtyp/linear_model.hpp"
#include "morphtyp/metrics.hpp"
#include "morphtyp/morfessor.hpp"
#include "morphtyp/predictors.hpp"
#include "morphtyp/seg_eval.hpp"
#include "morphtyp/segmenter.hpp"
#include "morphtyp/text_util.hpp"
#include "morphtyp/unigram.hpp"
#include "morphtyp/word_eval.hpp"

namespace fs = std::filesystem;

namespace morphtyp {

using nlohmann::json;

namespace {

const std::vector<std::string> kStageOrder = {"eval-seg",   "segment", "align", "word-eval",
                                              "predictors", "fit",     "chart"};

void apply_override(json& config, const std::string& dotted, const std::string& value) {
  json* node = &config;
  std::vector<std::string> parts = split(dotted, '.');
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) (*node)[parts.back()] = value;
  else (*node)[parts.back()] = parsed;
}

struct RunState {
  fs::path base;     // directory of the config file
  fs::path out_dir;
  json config;
  json manifest;
  std::vector<std::string> outputs;

  // shared across stages
  std::map<std::string, std::unique_ptr<Segmenter>> models;
  std::vector<Sentence> ref;
  std::vector<Sentence> hyp;
  std::vector<SentenceAlignment> alignments;
  std::vector<WordRecord> records;

  std::string input_path(const std::string& key) const {
    const json& inputs = config.at("inputs");
    if (!inputs.contains(key)) throw InputError("config is missing inputs." + key);
    return (base / inputs.at(key).get<std::string>()).string();
  }
  bool has_input(const std::string& key) const {
    return config.contains("inputs") && config.at("inputs").contains(key);
  }
  json param(const std::string& key, json fallback) const {
    if (config.contains("params") && config.at("params").contains(key)) {
      return config.at("params").at(key);
    }
    return fallback;
  }
  std::string out_path(const std::string& name) {
    fs::path p = out_dir / name;
    fs::create_directories(p.parent_path());
    return p.string();
  }
  void record_output(json& stage_entry, const std::string& path) {
    stage_entry["outputs"][fs::relative(path, out_dir).string()] = sha256_file_hex(path);
    outputs.push_back(path);
  }
};

std::set<std::string> requested_stages(const json& config) {
  std::set<std::string> stages;
  for (const auto& s : config.at("stages")) {
    std::string name = s.get<std::string>();
    if (std::find(kStageOrder.begin(), kStageOrder.end(), name) == kStageOrder.end()) {
      throw InputError("unknown stage in config: " + name);
    }
    stages.insert(name);
  }
  return stages;
}

// Input files each stage reads; existence is verified before anything runs.
std::vector<std::string> required_inputs(const std::string& stage, const RunState& st) {
  std::vector<std::string> keys;
  if (stage == "eval-seg") keys = {"gold_segmentations", "train_corpus"};
  else if (stage == "segment") keys = {"train_corpus"};
  else if (stage == "align") keys = {"ref_conllu", "hyp_text"};
  else if (stage == "word-eval") keys = {"ref_conllu", "hyp_text", "train_corpus"};
  else if (stage == "predictors") keys = {"ref_conllu", "hyp_text", "train_corpus"};
  else if (stage == "fit" || stage == "chart") keys = {};
  std::vector<std::string> paths;
  for (const std::string& key : keys) paths.push_back(st.input_path(key));
  if (stage == "word-eval" && st.has_input("vocab")) paths.push_back(st.input_path("vocab"));
  if (stage == "predictors" && st.has_input("annotation_sheet")) {
    paths.push_back(st.input_path("annotation_sheet"));
  }
  return paths;
}

std::vector<std::string> param_methods(const RunState& st) {
  std::vector<std::string> methods;
  for (const auto& m : st.param("methods", json::array({"unigram"}))) {
    methods.push_back(m.get<std::string>());
  }
  return methods;
}

void ensure_models(RunState& st) {
  if (!st.models.empty()) return;
  std::vector<Sentence> train = load_plain_text(st.input_path("train_corpus"));
  std::map<std::string, std::int64_t> types = word_type_counts(train);
  const std::size_t vocab_size = st.param("vocab_size", 200).get<std::size_t>();
  const std::string marker = st.param("marker", std::string(kDefaultMarker)).get<std::string>();
  for (const std::string& method : param_methods(st)) {
    if (method == "bpe") {
      st.models[method] = std::make_unique<BpeModel>(train_bpe(types, vocab_size, marker));
    } else if (method == "unigram") {
      UnigramTrainOptions opts;
      opts.marker = marker;
      st.models[method] = std::make_unique<UnigramModel>(train_unigram(types, vocab_size, opts));
    } else if (method == "morfessor") {
      st.models[method] = std::make_unique<MorfessorModel>(train_morfessor(types));
    } else {
      throw InputError("unknown segmentation method in config: " + method);
    }
  }
}

void ensure_eval_corpora(RunState& st) {
  if (st.ref.empty()) st.ref = load_conllu(st.input_path("ref_conllu"));
  if (st.hyp.empty()) st.hyp = load_plain_text(st.input_path("hyp_text"));
  if (st.ref.size() != st.hyp.size()) {
    throw InputError("reference and hypothesis have different sentence counts (" +
                     std::to_string(st.ref.size()) + " vs " + std::to_string(st.hyp.size()) + ")");
  }
}

void ensure_alignments(RunState& st) {
  if (!st.alignments.empty()) return;
  ensure_eval_corpora(st);
  const bool lower = st.param("lowercase_align", true).get<bool>();
  const int iterations = st.param("align_iterations", 5).get<int>();
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> fwd_pairs, rev_pairs;
  for (std::size_t i = 0; i < st.ref.size(); ++i) {
    std::vector<std::string> r = surfaces(st.ref[i], lower);
    std::vector<std::string> h = surfaces(st.hyp[i], lower);
    fwd_pairs.emplace_back(r, h);
    rev_pairs.emplace_back(h, r);
  }
  TranslationTable fwd = train_ibm1(fwd_pairs, iterations);
  TranslationTable rev = train_ibm1(rev_pairs, iterations);
  for (std::size_t i = 0; i < st.ref.size(); ++i) {
    st.alignments.push_back(align_sentence(fwd, rev, fwd_pairs[i].first, fwd_pairs[i].second,
                                           false, st.ref[i].id));
  }
}

std::set<std::string> param_pos_filter(const RunState& st, const char* key,
                                       std::set<std::string> fallback) {
  if (!st.config.contains("params") || !st.config.at("params").contains(key)) return fallback;
  std::set<std::string> out;
  for (const auto& p : st.config.at("params").at(key)) out.insert(p.get<std::string>());
  return out;
}

std::vector<StratAxis> param_axes(const RunState& st) {
  std::vector<StratAxis> axes;
  for (const auto& a : st.param("axes", json::array({"freq_bin", "in_vocab", "morph_count"}))) {
    std::optional<StratAxis> axis = parse_strat_axis(a.get<std::string>());
    if (!axis) throw InputError("unknown stratification axis: " + a.get<std::string>());
    axes.push_back(*axis);
  }
  return axes;
}

std::vector<std::int64_t> param_freq_edges(const RunState& st) {
  std::vector<std::int64_t> edges;
  for (const auto& e : st.param("freq_edges", json::array({0, 100, 1000}))) {
    edges.push_back(e.get<std::int64_t>());
  }
  return edges;
}

void stage_eval_seg(RunState& st, json& entry) {
  ensure_models(st);
  GoldLexiconLoadResult gold = load_gold_segmentations(st.input_path("gold_segmentations"));
  entry["rejected_gold_rows"] = gold.rejected.size();
  for (const auto& [name, model] : st.models) {
    SegEvalReport report = eval_grouped(gold.lexicon, *model);
    std::string csv_path = st.out_path("seg_eval_" + name + ".csv");
    write_file(csv_path, report.to_csv());
    st.record_output(entry, csv_path);
    std::string json_path = st.out_path("seg_eval_" + name + ".json");
    write_file(json_path, report.to_json_string());
    st.record_output(entry, json_path);
  }
}

void stage_segment(RunState& st, json& entry) {
  ensure_models(st);
  for (const auto& [name, model] : st.models) {
    std::string path = st.out_path("models/" + name + ".json");
    save_model(*model, path);
    st.record_output(entry, path);
  }
}

void stage_align(RunState& st, json& entry) {
  ensure_alignments(st);
  std::string path = st.out_path("alignments.pharaoh");
  save_alignment_pharaoh(st.alignments, path);
  st.record_output(entry, path);
}

void stage_word_eval(RunState& st, json& entry) {
  ensure_models(st);
  ensure_alignments(st);
  FrequencyTable freq = build_frequency_table(load_plain_text(st.input_path("train_corpus")));
  std::set<std::string> vocab;
  if (st.has_input("vocab")) {
    for (const std::string& line : read_lines(st.input_path("vocab"))) {
      if (!line.empty()) vocab.insert(line);
    }
  }
  const std::set<std::string> pos = param_pos_filter(st, "pos_filter", {"NOUN", "VERB"});
  const std::string morph_model = st.param("morph_model", "unigram").get<std::string>();
  const bool casefold = st.param("casefold", false).get<bool>();

  st.records.clear();
  for (std::size_t i = 0; i < st.ref.size(); ++i) {
    std::vector<WordRecord> recs =
        word_accuracy(st.ref[i], st.hyp[i], st.alignments[i], pos, casefold);
    st.records.insert(st.records.end(), recs.begin(), recs.end());
  }
  AnnotateOptions opts;
  opts.freq = &freq;
  if (!vocab.empty()) opts.model_vocab = &vocab;
  auto model_it = st.models.find(morph_model);
  if (model_it != st.models.end()) opts.segmenter = model_it->second.get();
  annotate_records(st.records, opts);

  std::string records_path = st.out_path("records.csv");
  save_records_csv(st.records, records_path);
  st.record_output(entry, records_path);

  StratifiedReport report =
      stratify(st.records, param_axes(st), st.param("min_samples", 30).get<std::size_t>(),
               param_freq_edges(st));
  std::string csv_path = st.out_path("stratified.csv");
  write_file(csv_path, report.to_csv());
  st.record_output(entry, csv_path);
  std::string json_path = st.out_path("stratified.json");
  write_file(json_path, report.to_json_string());
  st.record_output(entry, json_path);
}

void stage_predictors(RunState& st, json& entry) {
  ensure_models(st);
  ensure_eval_corpora(st);
  const std::string mode = st.param("predictor_mode", "synthesis").get<std::string>();
  const std::string analyzer_name = st.param("morph_model", "unigram").get<std::string>();

  // The analyzer's counts already feed morph.count; listing it among the
  // subword models again would duplicate columns exactly.
  NamedSegmenters named;
  for (const auto& [name, model] : st.models) {
    if (mode == "synthesis" && name == analyzer_name) continue;
    named.emplace_back(name, model.get());
  }
  const Segmenter* analyzer = nullptr;
  auto it = st.models.find(analyzer_name);
  if (it != st.models.end()) analyzer = it->second.get();

  std::map<std::string, std::map<int, double>> fusion_by_sentence;
  if (mode == "fusion") {
    IngestResult ingest = ingest_annotation_sheet(st.input_path("annotation_sheet"));
    entry["rejected_annotation_rows"] = ingest.rejected.size();
    ProjectionResult projection = project_fusion(st.ref, ingest.annotations);
    entry["fusion_coverage"] = projection.coverage();
    for (const auto& [ref, value] : projection.assignments) {
      fusion_by_sentence[ref.sentence_id][ref.token_index] = value;
    }
  }

  std::vector<PredictorRow> rows;
  std::size_t excluded_rows = 0;
  for (std::size_t i = 0; i < st.ref.size(); ++i) {
    std::map<std::string, double> preds;
    if (mode == "synthesis") {
      preds = compute_predictors_synthesis(st.ref[i], analyzer, named);
    } else if (mode == "fusion") {
      std::map<int, double> verb_fusion;
      auto fit = fusion_by_sentence.find(st.ref[i].id);
      if (fit != fusion_by_sentence.end()) verb_fusion = fit->second;
      preds = compute_predictors_fusion(st.ref[i], verb_fusion, named);
    } else {
      throw InputError("unknown predictor_mode: " + mode);
    }
    if (preds.empty()) {
      ++excluded_rows;
      continue;
    }
    PredictorRow row;
    row.sentence_id = st.ref[i].id;
    row.predictors = std::move(preds);

    std::string ref_joined;
    std::vector<std::string> ref_tokens, hyp_tokens;
    for (const Token& t : st.ref[i].tokens) ref_tokens.push_back(t.surface);
    for (const Token& t : st.hyp[i].tokens) hyp_tokens.push_back(t.surface);
    for (std::size_t k = 0; k < ref_tokens.size(); ++k) {
      if (k) ref_joined.push_back(' ');
      ref_joined += ref_tokens[k];
    }
    row.responses["bleu"] = sentence_bleu(hyp_tokens, ref_tokens).value;
    row.responses["chrf"] = sentence_chrf(st.hyp[i].raw, ref_joined).value;
    rows.push_back(std::move(row));
  }
  entry["excluded_sentences"] = excluded_rows;

  // Rectangular table over the predictors defined on every remaining row.
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
  std::vector<ExcludedRow> excluded;
  PredictorTable table = build_table(
      rows, std::vector<std::string>(common.begin(), common.end()), {"bleu", "chrf"}, &excluded);
  entry["excluded_rows"] = excluded.size();
  std::string path = st.out_path("predictors.csv");
  table.save_csv(path);
  st.record_output(entry, path);
}

void stage_fit(RunState& st, json& entry) {
  PredictorTable table = PredictorTable::load_csv((st.out_dir / "predictors.csv").string());
  const double alpha = st.param("alpha", 0.05).get<double>();
  FitOptions options;
  options.standardize = st.param("standardize", true).get<bool>();
  options.drop_collinear = st.param("drop_collinear", true).get<bool>();
  const std::string system = st.param("system", "system").get<std::string>();

  SignificanceGrid grid;
  for (const std::string& response : table.response_names) {
    LinearModelFit fit = fit_linear_model(table, response, options);
    std::string fit_path = st.out_path("fit_" + response + ".json");
    write_file(fit_path, fit.to_json_string(alpha));
    st.record_output(entry, fit_path);
    add_to_grid(grid, system + ":" + response, fit, alpha);
  }
  std::string grid_path = st.out_path("significance.csv");
  write_file(grid_path, grid.to_csv());
  st.record_output(entry, grid_path);
}

void stage_chart(RunState& st, json& entry) {
  fs::path stratified = st.out_dir / "stratified.json";
  if (fs::exists(stratified)) {
    std::string path = st.out_path("charts/accuracy.svg");
    render_chart_to_file("grouped-bars", stratified.string(), path,
                         st.param("system", "system").get<std::string>());
    st.record_output(entry, path);
  }
  fs::path grid = st.out_dir / "significance.csv";
  if (fs::exists(grid)) {
    std::string path = st.out_path("charts/significance.svg");
    render_chart_to_file("grid", grid.string(), path, "significant predictors");
    st.record_output(entry, path);
  }
  if (!entry.contains("outputs")) {
    throw InputError("chart stage: no reports found in " + st.out_dir.string());
  }
}

}  // namespace

RunReport run_pipeline(const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunState st;
  try {
    st.config = json::parse(read_file(config_path));
  } catch (const json::exception& e) {
    throw InputError("cannot parse config " + config_path + ": " + e.what());
  }
  for (const auto& [key, value] : overrides) apply_override(st.config, key, value);
  if (!st.config.contains("stages")) throw InputError("config has no stages list");

  st.base = fs::absolute(fs::path(config_path)).parent_path();
  st.out_dir = st.base / st.config.value("out_dir", "out");
  const std::set<std::string> stages = requested_stages(st.config);

  // Verify every input before any stage runs.
  std::map<std::string, std::string> input_hashes;
  for (const std::string& stage : kStageOrder) {
    if (!stages.count(stage)) continue;
    for (const std::string& path : required_inputs(stage, st)) {
      if (!fs::exists(path)) {
        throw InputError("missing input for stage " + stage + ": " + path);
      }
      input_hashes.emplace(path, "");
    }
  }
  for (auto& [path, hash] : input_hashes) hash = sha256_file_hex(path);

  fs::create_directories(st.out_dir);
  st.manifest["toolkit_version"] = std::string(kToolkitVersion);
  st.manifest["config"] = st.config;
  for (const auto& [path, hash] : input_hashes) {
    st.manifest["inputs"][fs::relative(path, st.base).string()] = hash;
  }
  st.manifest["stages"] = json::array();

  RunReport report;
  bool failed = false;
  for (const std::string& stage : kStageOrder) {
    if (!stages.count(stage) || failed) continue;
    json entry;
    entry["name"] = stage;
    try {
      if (stage == "eval-seg") stage_eval_seg(st, entry);
      else if (stage == "segment") stage_segment(st, entry);
      else if (stage == "align") stage_align(st, entry);
      else if (stage == "word-eval") stage_word_eval(st, entry);
      else if (stage == "predictors") stage_predictors(st, entry);
      else if (stage == "fit") stage_fit(st, entry);
      else if (stage == "chart") stage_chart(st, entry);
      entry["status"] = "ok";
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      failed = true;
      report.failed_stage = stage;
      report.error = e.what();
    }
    st.manifest["stages"].push_back(std::move(entry));
  }
  st.manifest["status"] = failed ? "failed" : "ok";

  report.ok = !failed;
  report.outputs = st.outputs;
  report.manifest_path = (st.out_dir / "manifest.json").string();
  write_file(report.manifest_path, st.manifest.dump(2) + "\n");
  return report;
}

}  // namespace morphtyp

#include <gtest/gtest.h>

#include <filesystem>

#include "morphtyp/chart.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/hash.hpp"
#include "morphtyp/pipeline.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace morphtyp {
namespace {

using testing::TempDir;

std::string toy_dir() { return std::string(MORPHTYP_TEST_DATA_DIR) + "/toy"; }

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // multi-block message
  EXPECT_EQ(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

StratifiedReport sample_report() {
  StratifiedReport report;
  report.total = 120;
  StratCell a;
  a.labels = {{"freq_bin", "[0,100)"}, {"in_vocab", "in_vocab"}};
  a.n = 80;
  a.mean_accuracy = 0.7125;
  StratCell b;
  b.labels = {{"freq_bin", "[0,100)"}, {"in_vocab", "not_in_vocab"}};
  b.n = 12;
  b.suppressed = true;
  report.cells = {a, b};
  return report;
}

TEST(Charts, GroupedBarsDeterministicWithSuppression) {
  StratifiedReport report = sample_report();
  std::string svg1 = render_grouped_bars_svg(report, "accuracy");
  std::string svg2 = render_grouped_bars_svg(report, "accuracy");
  EXPECT_EQ(svg1, svg2);
  EXPECT_NE(svg1.find("url(#hatch)"), std::string::npos);  // suppressed cell
  EXPECT_NE(svg1.find("n=12"), std::string::npos);
  EXPECT_NE(svg1.find("0.71"), std::string::npos);  // drawn value exists in report
  EXPECT_THROW(render_grouped_bars_svg(StratifiedReport{}, ""), InputError);
}

TEST(Charts, BubbleRendersInnerZeroAccuracyBubble) {
  HumanReport report;
  HumanScoreCell c;
  c.stratum = "in_vocab=in_vocab";
  c.scale = "semantic";
  c.score = 4;
  c.count = 25;
  c.zero_accuracy = 10;
  report.cells = {c};
  std::string svg = render_bubble_svg(report, "human");
  EXPECT_NE(svg.find("#ee8833"), std::string::npos);  // inner bubble fill
  EXPECT_EQ(render_bubble_svg(report, "human"), svg);
  EXPECT_THROW(render_bubble_svg(HumanReport{}, ""), InputError);
}

TEST(Charts, GridColorsBySign) {
  SignificanceGrid grid;
  grid.systems = {"s1:bleu"};
  grid.predictors = {"synthesis", "word.count"};
  grid.cells["synthesis"]["s1:bleu"] = -4.2;
  std::string svg = render_grid_svg(grid, "");
  EXPECT_NE(svg.find("#cc6677"), std::string::npos);  // negative cell
  EXPECT_NE(svg.find("#eeeeee"), std::string::npos);  // insignificant cell
  EXPECT_THROW(render_grid_svg(SignificanceGrid{}, ""), InputError);
}

TEST(RunPipeline, MissingInputIsFatalBeforeAnyStage) {
  TempDir dir;
  testing::write_text(dir.file("run.json"), R"({
    "version": 1,
    "out_dir": "out",
    "stages": ["segment"],
    "inputs": {"train_corpus": "does_not_exist.txt"}
  })");
  EXPECT_THROW(run_pipeline(dir.file("run.json")), InputError);
  EXPECT_FALSE(fs::exists(dir.path() / "out"));
}

TEST(RunPipeline, EvalSegOnlyEmitsGroupedCsvAndManifest) {
  TempDir dir;
  for (const char* name : {"train.tgt.txt", "gold_segmentations.tsv"}) {
    fs::copy_file(toy_dir() + "/" + name, dir.file(name));
  }
  testing::write_text(dir.file("run.json"), R"({
    "version": 1,
    "out_dir": "out",
    "stages": ["eval-seg"],
    "inputs": {
      "train_corpus": "train.tgt.txt",
      "gold_segmentations": "gold_segmentations.tsv"
    },
    "params": {"methods": ["bpe"], "vocab_size": 60}
  })");
  RunReport report = run_pipeline(dir.file("run.json"));
  EXPECT_TRUE(report.ok);
  std::string csv = testing::slurp((dir.path() / "out/seg_eval_bpe.csv").string());
  EXPECT_NE(csv.find("group,n,accuracy_count,precision"), std::string::npos);
  EXPECT_NE(csv.find("\n1,"), std::string::npos);
  EXPECT_NE(csv.find("4+,"), std::string::npos);
  std::string manifest = testing::slurp(report.manifest_path);
  EXPECT_NE(manifest.find("\"status\": \"ok\""), std::string::npos);
  EXPECT_NE(manifest.find("seg_eval_bpe.csv"), std::string::npos);
}

TEST(RunPipeline, StageFailureIsRecordedAndOutputsRetained) {
  TempDir dir;
  fs::copy_file(toy_dir() + "/train.tgt.txt", dir.file("train.tgt.txt"));
  fs::copy_file(toy_dir() + "/ref.conllu", dir.file("ref.conllu"));
  // hypothesis with the wrong number of lines makes align fail after
  // segment succeeded
  testing::write_text(dir.file("hyp.txt"), "only one line\n");
  testing::write_text(dir.file("run.json"), R"({
    "version": 1,
    "out_dir": "out",
    "stages": ["segment", "align"],
    "inputs": {
      "train_corpus": "train.tgt.txt",
      "ref_conllu": "ref.conllu",
      "hyp_text": "hyp.txt"
    },
    "params": {"methods": ["bpe"], "vocab_size": 60}
  })");
  RunReport report = run_pipeline(dir.file("run.json"));
  EXPECT_FALSE(report.ok);
  EXPECT_EQ(report.failed_stage, "align");
  EXPECT_TRUE(fs::exists(dir.path() / "out/models/bpe.json"));  // partial output retained
  std::string manifest = testing::slurp(report.manifest_path);
  EXPECT_NE(manifest.find("\"status\": \"failed\""), std::string::npos);
}

TEST(Charts, FileDispatchRendersAllStyles) {
  TempDir dir;
  StratifiedReport strat = sample_report();
  testing::write_text(dir.file("strat.json"), strat.to_json_string());
  render_chart_to_file("grouped-bars", dir.file("strat.json"), dir.file("bars.svg"), "t");
  EXPECT_NE(testing::slurp(dir.file("bars.svg")).find("<svg"), std::string::npos);

  testing::write_text(dir.file("human.csv"),
                      "stratum,scale,score,count,zero_accuracy\n"
                      "in_vocab=in_vocab,semantic,4,20,7\n"
                      "in_vocab=in_vocab,grammar,3,12,2\n");
  render_chart_to_file("bubble", dir.file("human.csv"), dir.file("bubble.svg"), "");
  EXPECT_NE(testing::slurp(dir.file("bubble.svg")).find("circle"), std::string::npos);

  testing::write_text(dir.file("grid.csv"), "predictor,s1:bleu\nsynthesis,-2.5\n");
  render_chart_to_file("grid", dir.file("grid.csv"), dir.file("grid.svg"), "");
  EXPECT_NE(testing::slurp(dir.file("grid.svg")).find("rect"), std::string::npos);

  EXPECT_THROW(render_chart_to_file("sparkline", dir.file("grid.csv"), dir.file("x.svg"), ""),
               InputError);
}

TEST(RunPipeline, FusionPredictorMode) {
  TempDir dir;
  for (const char* name : {"train.tgt.txt", "ref.conllu", "hyp.txt"}) {
    fs::copy_file(toy_dir() + "/" + name, dir.file(name));
  }
  // every toy verb bundle is covered by one of the two rows
  testing::write_text(
      dir.file("sheet.tsv"),
      "paradigm_id\tfeatures\ttermination\tsample_form\tsegmentation\tper_morph_features\troot_flags\n"
      "p1\tTense=Past\tother\tgeldi\tgel-di\t0,1\t1,0\n"
      "p2\tTense=Pres\tother\tgelyor\tgel-yor\t0,1\t1,0\n");
  testing::write_text(dir.file("run.json"), R"({
    "version": 1,
    "out_dir": "out",
    "stages": ["segment", "predictors"],
    "inputs": {
      "train_corpus": "train.tgt.txt",
      "ref_conllu": "ref.conllu",
      "hyp_text": "hyp.txt",
      "annotation_sheet": "sheet.tsv"
    },
    "params": {"methods": ["unigram"], "vocab_size": 80,
               "predictor_mode": "fusion", "pos_filter": ["VERB"]}
  })");
  RunReport report = run_pipeline(dir.file("run.json"));
  ASSERT_TRUE(report.ok) << report.failed_stage << ": " << report.error;
  std::string csv = testing::slurp((dir.path() / "out/predictors.csv").string());
  EXPECT_NE(csv.find("verb.count"), std::string::npos);
  EXPECT_NE(csv.find("R.fusion.word"), std::string::npos);
  std::string manifest = testing::slurp(report.manifest_path);
  EXPECT_NE(manifest.find("\"fusion_coverage\": 1.0"), std::string::npos);
}

TEST(RunPipeline, ConfigOverridesApply) {
  TempDir dir;
  fs::copy_file(toy_dir() + "/train.tgt.txt", dir.file("train.tgt.txt"));
  fs::copy_file(toy_dir() + "/gold_segmentations.tsv", dir.file("gold.tsv"));
  testing::write_text(dir.file("run.json"), R"({
    "version": 1,
    "out_dir": "out",
    "stages": ["segment"],
    "inputs": {"train_corpus": "train.tgt.txt"},
    "params": {"methods": ["bpe"], "vocab_size": 60}
  })");
  RunReport report = run_pipeline(dir.file("run.json"), {{"params.methods", "[\"unigram\"]"}});
  EXPECT_TRUE(report.ok);
  EXPECT_TRUE(fs::exists(dir.path() / "out/models/unigram.json"));
  EXPECT_FALSE(fs::exists(dir.path() / "out/models/bpe.json"));
}

}  // namespace
}  // namespace morphtyp

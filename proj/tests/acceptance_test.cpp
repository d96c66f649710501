// Acceptance suite: one test per criterion, each printing a pass/fail line.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>

#include "morphtyp/aligner.hpp"
#include "morphtyp/bpe.hpp"
#include "morphtyp/corpus.hpp"
#include "morphtyp/indices.hpp"
#include "morphtyp/linear_model.hpp"
#include "morphtyp/metrics.hpp"
#include "morphtyp/morfessor.hpp"
#include "morphtyp/pipeline.hpp"
#include "morphtyp/seg_eval.hpp"
#include "morphtyp/segmenter.hpp"
#include "morphtyp/text_util.hpp"
#include "morphtyp/unigram.hpp"
#include "morphtyp/word_eval.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace morphtyp {
namespace {

class Acceptance : public ::testing::Test {
 protected:
  void criterion(int number, const char* name) {
    number_ = number;
    name_ = name;
  }
  void TearDown() override {
    std::printf("[ACCEPTANCE] %02d %s: %s\n", number_, name_,
                HasFailure() ? "FAIL" : "PASS");
    std::fflush(stdout);
  }

 private:
  int number_ = 0;
  const char* name_ = "?";
};

MorphFeatureProfile profile(std::initializer_list<MorphRecord> records) {
  return MorphFeatureProfile(records);
}

// 1. The worked fusion values, exact.
TEST_F(Acceptance, FusionGoldenValues) {
  criterion(1, "fusion-golden-values");
  MorphFeatureProfile hablaremos =
      profile({{"habl", 0, true}, {"are", 2, false}, {"mos", 2, false}});
  MorphFeatureProfile condeno = profile({{"conden", 0, true}, {"o", 5, false}});
  MorphFeatureProfile apoyada = profile({{"apoy", 0, true}, {"ada", 3, false}});
  EXPECT_LT(std::fabs(fusion_word(hablaremos).value - 0.5), 1e-12);
  EXPECT_LT(std::fabs(fusion_word(condeno).value - 0.8), 1e-12);
  EXPECT_LT(std::fabs(fusion_word(apoyada).value - 2.0 / 3.0), 1e-12);

  std::vector<MorphFeatureProfile> passage;
  auto mono = [](const char* w) { return MorphFeatureProfile{{w, 0, true}}; };
  auto split2 = [](const char* a, const char* b) {
    return MorphFeatureProfile{{a, 0, true}, {b, 1, false}};
  };
  passage = {mono("the"),
             split2("company", "'s"),
             mono("great"),
             split2("break", "through"),
             {{"came", 1, true}},
             mono("when"),
             mono("they"),
             split2("decid", "ed"),
             mono("to"),
             mono("buy"),
             split2("trike", "s"),
             mono("to"),
             mono("sell"),
             mono("their"),
             mono("ice"),
             mono("cream"),
             mono("around"),
             mono("the"),
             split2("street", "s"),
             mono("in"),
             mono("the"),
             split2("nine", "teen"),
             split2("twenty", "s")};
  EXPECT_LT(std::fabs(fusion_text(passage).value - 0.125), 1e-12);
}

// 2. One root-load rule reproduces every sub-tally of the worked examples.
TEST_F(Acceptance, JointCountingUnification) {
  criterion(2, "joint-counting-unification");
  JointTally h = word_joints(profile({{"habl", 0, true}, {"are", 2, false}, {"mos", 2, false}}));
  EXPECT_EQ(h.fusional_joints, 2);  // 0+(2-1)+(2-1)
  EXPECT_EQ(h.total(), 4);          // 2+2
  JointTally c = word_joints(profile({{"conden", 0, true}, {"o", 5, false}}));
  EXPECT_EQ(c.fusional_joints, 4);  // 0+(5-1)
  EXPECT_EQ(c.total(), 5);          // 4+1
  // suppletive single-morpheme past: 1 fusional joint, and the whole
  // passage totals 1 of 8 (asserted in criterion 1)
  JointTally came = word_joints(profile({{"came", 1, true}}));
  EXPECT_EQ(came.fusional_joints, 1);
  EXPECT_EQ(came.explicit_boundaries, 0);
}

// 3. Exhaustive NW optimality over sequences of length <= 5 from a
// 3-morpheme alphabet.
TEST_F(Acceptance, NwAlignmentOptimality) {
  criterion(3, "nw-alignment-optimality");
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> alphabet = {"an", "ta", "s"};
  double sub[3][3];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      std::size_t denom = std::max(utf8_length(alphabet[a]), utf8_length(alphabet[b]));
      sub[a][b] = 1.0 - static_cast<double>(levenshtein(alphabet[a], alphabet[b])) /
                            static_cast<double>(denom);
    }
  }
  std::vector<std::vector<int>> seqs;
  std::vector<int> cur;
  std::function<void()> gen = [&]() {
    if (!cur.empty()) seqs.push_back(cur);
    if (cur.size() == 5) return;
    for (int m = 0; m < 3; ++m) {
      cur.push_back(m);
      gen();
      cur.pop_back();
    }
  };
  gen();
  ASSERT_EQ(seqs.size(), 363u);

  const double gap = -0.5;
  std::size_t checked = 0;
  for (const std::vector<int>& hi : seqs) {
    std::vector<std::string> hyp;
    for (int m : hi) hyp.push_back(alphabet[m]);
    for (const std::vector<int>& gi : seqs) {
      std::vector<std::string> gold;
      for (int m : gi) gold.push_back(alphabet[m]);
      // independent enumeration of every alignment
      double best = -1e18;
      std::function<void(std::size_t, std::size_t, double)> walk =
          [&](std::size_t i, std::size_t j, double acc) {
            if (i == hi.size() && j == gi.size()) {
              if (acc > best) best = acc;
              return;
            }
            if (i < hi.size() && j < gi.size()) walk(i + 1, j + 1, acc + sub[hi[i]][gi[j]]);
            if (i < hi.size()) walk(i + 1, j, acc + gap);
            if (j < gi.size()) walk(i, j + 1, acc + gap);
          };
      walk(0, 0, 0.0);
      double got = nw_align(hyp, gold).score;
      ASSERT_NEAR(got, best, 1e-9);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 363u * 363u);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 10.0);
}

// Synthetic agglutinative lexicon: 100 roots x 10 suffix shapes.
std::map<std::string, std::int64_t> synthetic_types() {
  std::mt19937 rng(99);
  const char* suffixes[10] = {"", "lar", "da", "larda", "di", "yor", "dan", "lardan", "li", "siz"};
  std::map<std::string, std::int64_t> out;
  const std::string letters = "abcdefgiklmnoprstuyz";
  for (int r = 0; r < 100; ++r) {
    std::string root;
    int len = 3 + static_cast<int>(rng() % 4);
    for (int i = 0; i < len; ++i) root.push_back(letters[rng() % letters.size()]);
    for (int s = 0; s < 10; ++s) {
      out[root + suffixes[s]] += 1 + static_cast<std::int64_t>(rng() % 50);
    }
  }
  return out;
}

// 4. Segmenter invariants on a 1,000-type corpus.
TEST_F(Acceptance, SegmenterInvariants) {
  criterion(4, "segmenter-invariants");
  const auto start = std::chrono::steady_clock::now();
  std::map<std::string, std::int64_t> corpus = synthetic_types();
  ASSERT_GE(corpus.size(), 1000u);

  BpeModel bpe = train_bpe(corpus, 420);
  UnigramModel uni = train_unigram(corpus, 320);
  MorfessorModel mor = train_morfessor(corpus);

  // (a) reconstruction everywhere
  for (const Segmenter* model : {(const Segmenter*)&bpe, (const Segmenter*)&uni,
                                 (const Segmenter*)&mor}) {
    for (const auto& [word, count] : corpus) {
      ASSERT_EQ(concat_pieces(model->segment(word), model->marker()), word)
          << model->method() << " " << word;
    }
  }

  // (b) unigram EM log-likelihood non-decreasing within every round
  ASSERT_FALSE(uni.em_loglik_rounds().empty());
  for (const std::vector<double>& round : uni.em_loglik_rounds()) {
    for (std::size_t i = 1; i < round.size(); ++i) {
      ASSERT_GE(round[i], round[i - 1] - 1e-9);
    }
  }

  // (c) Viterbi equals brute-force max-probability segmentation
  std::size_t viterbi_checked = 0;
  for (const auto& [word, count] : corpus) {
    std::vector<std::string> cps = utf8_codepoints(word);
    if (cps.size() > 10) continue;
    std::vector<std::string> got = strip_markers(uni.segment(word), uni.marker());
    double got_score = uni.sequence_logprob(got);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < (1u << (cps.size() - 1)); ++mask) {
      std::vector<std::string> pieces;
      std::string curp = cps[0];
      for (std::size_t i = 1; i < cps.size(); ++i) {
        if (mask & (1u << (i - 1))) {
          pieces.push_back(curp);
          curp.clear();
        }
        curp += cps[i];
      }
      pieces.push_back(curp);
      best = std::max(best, uni.sequence_logprob(pieces));
    }
    ASSERT_NEAR(got_score, best, 1e-9) << word;
    ++viterbi_checked;
  }
  EXPECT_GT(viterbi_checked, 900u);

  // (d) Morfessor description length non-increasing across passes
  const std::vector<double>& dl = mor.dl_history();
  ASSERT_GE(dl.size(), 2u);
  for (std::size_t i = 1; i < dl.size(); ++i) ASSERT_LE(dl[i], dl[i - 1] + 1e-9);

  // (e) retraining is byte-identical
  testing::TempDir dir;
  save_model(bpe, dir.file("bpe1.json"));
  save_model(train_bpe(corpus, 420), dir.file("bpe2.json"));
  ASSERT_EQ(testing::slurp(dir.file("bpe1.json")), testing::slurp(dir.file("bpe2.json")));
  save_model(uni, dir.file("uni1.json"));
  save_model(train_unigram(corpus, 320), dir.file("uni2.json"));
  ASSERT_EQ(testing::slurp(dir.file("uni1.json")), testing::slurp(dir.file("uni2.json")));
  save_model(mor, dir.file("mor1.json"));
  save_model(train_morfessor(corpus), dir.file("mor2.json"));
  ASSERT_EQ(testing::slurp(dir.file("mor1.json")), testing::slurp(dir.file("mor2.json")));

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 60.0);
}

// 5. Direction check: unsupervised subword models over-split rare roots,
// so the should-not-be-split group scores lower than the two-morph group.
TEST_F(Acceptance, OverSplittingDirection) {
  criterion(5, "over-splitting-direction");
  std::mt19937 rng(2024);
  const std::string letters = "abcdefgiklmnoprstuyz";
  std::map<std::string, std::int64_t> train;
  GoldSegmentationLexicon gold;

  // short frequent roots with very frequent suffixes -> group "2"
  std::vector<std::string> roots;
  for (int r = 0; r < 40; ++r) {
    std::string root;
    for (int i = 0; i < 3 + static_cast<int>(rng() % 2); ++i) {
      root.push_back(letters[rng() % letters.size()]);
    }
    roots.push_back(root);
    train[root] += 200;
    for (const char* suffix : {"lar", "de"}) {
      train[root + suffix] += 150;
      gold.entries[root + suffix] = {root, suffix};
    }
  }
  // long rare monomorphemic controls -> group "1"
  for (int r = 0; r < 60; ++r) {
    std::string control;
    for (int i = 0; i < 8 + static_cast<int>(rng() % 5); ++i) {
      control.push_back(letters[rng() % letters.size()]);
    }
    train[control] += 1;
    gold.entries[control] = {control};
  }

  BpeModel bpe = train_bpe(train, 160);
  UnigramModel uni = train_unigram(train, 120);
  for (const Segmenter* model : {(const Segmenter*)&bpe, (const Segmenter*)&uni}) {
    SegEvalReport report = eval_grouped(gold, *model);
    ASSERT_GT(report.groups[0].n, 0u);
    ASSERT_GT(report.groups[1].n, 0u);
    EXPECT_LT(report.groups[0].mean_accuracy_count, report.groups[1].mean_accuracy_count)
        << model->method();
  }
}

// 6. IBM-1 on a 50-pair dictionary corpus.
TEST_F(Acceptance, AlignerDictionaryRecovery) {
  criterion(6, "aligner-dictionary-recovery");
  std::vector<std::string> src_vocab, tgt_vocab;
  for (int i = 0; i < 50; ++i) {
    src_vocab.push_back("s" + std::to_string(i));
    tgt_vocab.push_back("t" + std::to_string(i));
  }
  std::mt19937 rng(31);
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> pairs, rev_pairs;
  for (int n = 0; n < 100; ++n) {
    std::vector<int> ids(50);
    for (int i = 0; i < 50; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    int len = 4 + static_cast<int>(rng() % 5);
    std::vector<std::string> src, tgt;
    for (int k = 0; k < len; ++k) {
      src.push_back(src_vocab[ids[k]]);
      tgt.push_back(tgt_vocab[ids[k]]);
    }
    pairs.emplace_back(src, tgt);
    rev_pairs.emplace_back(tgt, src);
  }
  TranslationTable fwd = train_ibm1(pairs, 5);
  TranslationTable rev = train_ibm1(rev_pairs, 5);

  // argmax recovers the dictionary for every word
  int recovered = 0;
  for (int i = 0; i < 50; ++i) {
    auto row = fwd.rows().find(src_vocab[i]);
    ASSERT_NE(row, fwd.rows().end());
    double best = -1.0;
    std::string argmax;
    for (const auto& [tgt, p] : row->second) {
      if (p > best) {
        best = p;
        argmax = tgt;
      }
    }
    recovered += argmax == tgt_vocab[i] ? 1 : 0;
  }
  EXPECT_EQ(recovered, 50);

  // EM likelihood monotone
  const std::vector<double>& ll = fwd.loglik_history();
  for (std::size_t i = 1; i < ll.size(); ++i) EXPECT_GE(ll[i], ll[i - 1] - 1e-9);

  // intersection alignment of identical sentences is the identity
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> id_pairs;
  std::mt19937 rng2(77);
  for (int n = 0; n < 80; ++n) {
    std::vector<int> ids(50);
    for (int i = 0; i < 50; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng2);
    std::vector<std::string> sent;
    for (int k = 0; k < 5; ++k) sent.push_back(src_vocab[ids[k]]);
    id_pairs.emplace_back(sent, sent);
  }
  TranslationTable id_table = train_ibm1(id_pairs, 5);
  for (int n = 0; n < 10; ++n) {
    const auto& sent = id_pairs[n].first;
    SentenceAlignment a = align_sentence(id_table, id_table, sent, sent);
    std::set<std::pair<int, int>> expected;
    for (int i = 0; i < static_cast<int>(sent.size()); ++i) expected.insert({i, i});
    EXPECT_EQ(a.links, expected);
  }
}

// 7. Metric identities plus the two frozen hand-computed fixtures.
TEST_F(Acceptance, MetricsIdentityAndOracles) {
  criterion(7, "metrics-identity-and-oracles");
  std::mt19937 rng(5);
  const char* words[] = {"evler", "kitap", "okul", "araba", "geldi", "yazdi"};
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> tokens;
    std::string joined;
    int len = 2 + static_cast<int>(rng() % 6);
    for (int k = 0; k < len; ++k) {
      tokens.push_back(words[rng() % 6]);
      if (!joined.empty()) joined += " ";
      joined += tokens.back();
    }
    ASSERT_DOUBLE_EQ(sentence_bleu(tokens, tokens).value, 100.0);
    ASSERT_DOUBLE_EQ(sentence_chrf(joined, joined).value, 100.0);
  }
  EXPECT_NEAR(sentence_bleu({"the", "cat", "sat"}, {"the", "cat", "sat", "down"}).value,
              71.65313105737893, 1e-9);
  EXPECT_NEAR(sentence_bleu({"the", "the", "cat"}, {"the", "cat"}).value, 68.65890479690393,
              1e-9);
  EXPECT_NEAR(sentence_chrf("abcd", "abce", 3).value, 63.888888888888886, 1e-9);
  EXPECT_NEAR(sentence_chrf("ab", "abab", 2).value, 47.00854700854701, 1e-9);
}

// 8. Regression calibration: exact fit, Monte-Carlo significance rates,
// and t/p invariance under standardization.
TEST_F(Acceptance, StatisticsCalibration) {
  criterion(8, "statistics-calibration");
  const auto start = std::chrono::steady_clock::now();

  // exact-fit recovery
  {
    PredictorTable table;
    table.predictor_names = {"x1", "x2"};
    table.response_names = {"y"};
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int i = 0; i < 60; ++i) {
      PredictorRow row;
      row.sentence_id = std::to_string(i);
      double x1 = uni(rng), x2 = uni(rng);
      row.predictors = {{"x1", x1}, {"x2", x2}};
      row.responses["y"] = 3.0 * x1 - 2.0 * x2;
      table.rows.push_back(std::move(row));
    }
    FitOptions raw;
    raw.standardize = false;
    LinearModelFit fit = fit_linear_model(table, "y", raw);
    EXPECT_NEAR(fit.coefficients[0], 3.0, 1e-9);
    EXPECT_NEAR(fit.coefficients[1], -2.0, 1e-9);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  }

  // Monte-Carlo: planted strong predictor and planted null
  int strong_sig = 0, null_nonsig = 0;
  PredictorTable last_table;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937 rng(4000 + trial);
    std::normal_distribution<double> noise(0.0, 0.1);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    PredictorTable table;
    table.predictor_names = {"planted", "null"};
    table.response_names = {"y"};
    for (int i = 0; i < 200; ++i) {
      PredictorRow row;
      row.sentence_id = std::to_string(i);
      double planted = uni(rng), null_x = uni(rng);
      row.predictors = {{"planted", planted}, {"null", null_x}};
      row.responses["y"] = 0.5 * planted + noise(rng);  // coefficient 5 sigma
      table.rows.push_back(std::move(row));
    }
    LinearModelFit fit = fit_linear_model(table, "y");
    bool planted_sig = false, null_sig = false;
    for (const SignificantPredictor& s : significant_predictors(fit, 0.05)) {
      if (s.name == "planted") planted_sig = true;
      if (s.name == "null") null_sig = true;
    }
    strong_sig += planted_sig ? 1 : 0;
    null_nonsig += null_sig ? 0 : 1;
    last_table = std::move(table);
  }
  EXPECT_GE(strong_sig, 95);
  EXPECT_GE(null_nonsig, 90);

  // t/p invariance under standardization
  FitOptions raw;
  raw.standardize = false;
  LinearModelFit fr = fit_linear_model(last_table, "y", raw);
  LinearModelFit fs = fit_linear_model(last_table, "y");
  for (std::size_t i = 0; i < fr.names.size(); ++i) {
    EXPECT_NEAR(fr.t_statistics[i], fs.t_statistics[i], 1e-9);
    EXPECT_NEAR(fr.p_values[i], fs.p_values[i], 1e-9);
  }

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 30.0);
}

// 9. Stratification: suppression rule, exact group-by oracle, and the
// fusion=0 / fusion>0 partition semantics.
TEST_F(Acceptance, StratificationRules) {
  criterion(9, "stratification-rules");
  std::mt19937 rng(88);
  std::vector<WordRecord> records;
  for (int i = 0; i < 500; ++i) {
    WordRecord r;
    r.sentence_id = std::to_string(i / 5 + 1);
    r.ref_index = i % 5;
    r.train_freq = static_cast<std::int64_t>(rng() % 1500);
    r.in_vocab = rng() % 3 != 0;
    if (rng() % 6 != 0) r.morph_count = 1 + static_cast<int>(rng() % 5);
    r.accuracy = rng() % 2;
    records.push_back(std::move(r));
  }
  std::vector<StratAxis> axes = {StratAxis::FreqBin, StratAxis::MorphCount};
  StratifiedReport report = stratify(records, axes, 30);

  std::map<std::string, std::pair<int, int>> oracle;
  for (const WordRecord& r : records) {
    std::string key = "freq_bin=" + frequency_bin_label(frequency_bin(r.train_freq));
    key += "|morph_count=";
    if (!r.morph_count) key += "na";
    else if (*r.morph_count >= 5) key += "5+";
    else key += std::to_string(*r.morph_count);
    oracle[key].first += 1;
    oracle[key].second += r.accuracy;
  }
  ASSERT_EQ(report.cells.size(), oracle.size());
  std::size_t total = 0;
  for (const StratCell& c : report.cells) {
    const auto& [n, correct] = oracle.at(c.key());
    ASSERT_EQ(c.n, static_cast<std::size_t>(n));
    if (c.n < 30) {
      ASSERT_TRUE(c.suppressed);
    } else {
      ASSERT_FALSE(c.suppressed);
      ASSERT_DOUBLE_EQ(c.mean_accuracy, static_cast<double>(correct) / n);
    }
    total += c.n;
  }
  EXPECT_EQ(total, records.size());

  // fusion binary partition: counts land exactly in the two cells
  std::vector<WordRecord> verbs;
  for (int i = 0; i < 1411 / 10; ++i) {
    WordRecord r;
    r.fusion = 0.0;
    verbs.push_back(r);
  }
  for (int i = 0; i < 4822 / 10; ++i) {
    WordRecord r;
    r.fusion = 0.1 + 0.1 * (i % 8);
    verbs.push_back(r);
  }
  StratifiedReport split = stratify(verbs, {StratAxis::FusionBinary}, 30);
  ASSERT_EQ(split.cells.size(), 2u);
  EXPECT_EQ(split.cells[0].labels[0].second, "fusion=0");
  EXPECT_EQ(split.cells[0].n, 141u);
  EXPECT_EQ(split.cells[1].labels[0].second, "fusion>0");
  EXPECT_EQ(split.cells[1].n, 482u);
}

// 10. End-to-end golden run on the bundled corpus, byte-identical across
// reruns.
TEST_F(Acceptance, EndToEndGoldenRun) {
  criterion(10, "end-to-end-golden-run");
  const auto start = std::chrono::steady_clock::now();
  const std::string toy = std::string(MORPHTYP_TEST_DATA_DIR) + "/toy";

  testing::TempDir dir_a, dir_b;
  for (const auto& entry : fs::directory_iterator(toy)) {
    fs::copy_file(entry.path(), fs::path(dir_a.path()) / entry.path().filename());
    fs::copy_file(entry.path(), fs::path(dir_b.path()) / entry.path().filename());
  }
  RunReport run_a = run_pipeline(dir_a.file("run.json"));
  ASSERT_TRUE(run_a.ok) << run_a.failed_stage << ": " << run_a.error;
  RunReport run_b = run_pipeline(dir_b.file("run.json"));
  ASSERT_TRUE(run_b.ok);

  const char* expected_outputs[] = {
      "models/bpe.json",  "models/unigram.json", "alignments.pharaoh", "records.csv",
      "stratified.csv",   "stratified.json",     "predictors.csv",     "fit_bleu.json",
      "fit_chrf.json",    "significance.csv",    "charts/accuracy.svg",
      "charts/significance.svg", "manifest.json"};
  for (const char* rel : expected_outputs) {
    fs::path pa = fs::path(dir_a.path()) / "out" / rel;
    fs::path pb = fs::path(dir_b.path()) / "out" / rel;
    ASSERT_TRUE(fs::exists(pa)) << rel;
    ASSERT_TRUE(fs::exists(pb)) << rel;
    EXPECT_EQ(testing::slurp(pa.string()), testing::slurp(pb.string())) << rel;
  }

  // rerunning in place reproduces the same bytes
  std::string manifest_before = testing::slurp((fs::path(dir_a.path()) / "out/manifest.json").string());
  RunReport rerun = run_pipeline(dir_a.file("run.json"));
  ASSERT_TRUE(rerun.ok);
  EXPECT_EQ(testing::slurp((fs::path(dir_a.path()) / "out/manifest.json").string()),
            manifest_before);

  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 120.0);
}

}  // namespace
}  // namespace morphtyp

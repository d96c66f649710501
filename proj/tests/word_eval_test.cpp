#include "morphtyp/word_eval.hpp"

#include <gtest/gtest.h>

#include <random>

#include "morphtyp/errors.hpp"
#include "test_util.hpp"

namespace morphtyp {
namespace {

using testing::TempDir;

Sentence tagged(std::string id, const std::vector<std::pair<std::string, std::string>>& words) {
  Sentence s;
  s.id = std::move(id);
  for (const auto& [surface, pos] : words) {
    Token t;
    t.surface = surface;
    t.upos = pos;
    s.tokens.push_back(std::move(t));
    if (!s.raw.empty()) s.raw.push_back(' ');
    s.raw += surface;
  }
  return s;
}

SentenceAlignment links(std::string id, std::initializer_list<std::pair<int, int>> pairs) {
  SentenceAlignment a;
  a.sentence_id = std::move(id);
  for (const auto& p : pairs) a.links.insert(p);
  return a;
}

const std::set<std::string> kNv = {"NOUN", "VERB"};

TEST(WordAccuracy, ExactMatchScoresOne) {
  Sentence ref = tagged("1", {{"evler", "NOUN"}, {"geldi", "VERB"}});
  Sentence hyp = tagged("1", {{"evler", "NOUN"}, {"gitti", "VERB"}});
  std::vector<WordRecord> records = word_accuracy(ref, hyp, links("1", {{0, 0}, {1, 1}}), kNv);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].accuracy, 1);
  EXPECT_EQ(records[0].aligned_hyp_surface, "evler");
  EXPECT_EQ(records[1].accuracy, 0);
  EXPECT_EQ(records[1].aligned_hyp_surface, "gitti");
}

TEST(WordAccuracy, InflectionMismatchFailsExactMatch) {
  Sentence ref = tagged("1", {{"evler", "NOUN"}});
  Sentence hyp = tagged("1", {{"evleri", "NOUN"}});
  std::vector<WordRecord> records = word_accuracy(ref, hyp, links("1", {{0, 0}}), kNv);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].accuracy, 0);
}

TEST(WordAccuracy, UnalignedTokenScoresZeroWithEmptySurface) {
  Sentence ref = tagged("1", {{"geldi", "VERB"}});
  Sentence hyp = tagged("1", {{"x", "X"}});
  std::vector<WordRecord> records = word_accuracy(ref, hyp, links("1", {}), kNv);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].accuracy, 0);
  EXPECT_TRUE(records[0].aligned_hyp_surface.empty());
}

TEST(WordAccuracy, PosFilterAndMultiLinkAnyMatch) {
  Sentence ref = tagged("1", {{"la", "DET"}, {"casa", "NOUN"}});
  Sentence hyp = tagged("1", {{"the", "DET"}, {"house", "NOUN"}, {"casa", "NOUN"}});
  std::vector<WordRecord> records =
      word_accuracy(ref, hyp, links("1", {{1, 1}, {1, 2}}), kNv);
  ASSERT_EQ(records.size(), 1u);  // DET filtered out
  EXPECT_EQ(records[0].accuracy, 1);  // any linked token matching counts
  EXPECT_EQ(records[0].aligned_hyp_surface, "casa");
}

TEST(WordAccuracy, CasefoldFlag) {
  Sentence ref = tagged("1", {{"Casa", "NOUN"}});
  Sentence hyp = tagged("1", {{"casa", "NOUN"}});
  EXPECT_EQ(word_accuracy(ref, hyp, links("1", {{0, 0}}), kNv)[0].accuracy, 0);
  EXPECT_EQ(word_accuracy(ref, hyp, links("1", {{0, 0}}), kNv, true)[0].accuracy, 1);
}

TEST(WordAccuracy, OutOfBoundsLinkThrows) {
  Sentence ref = tagged("1", {{"a", "NOUN"}});
  Sentence hyp = tagged("1", {{"b", "NOUN"}});
  EXPECT_THROW(word_accuracy(ref, hyp, links("1", {{0, 5}}), kNv), InputError);
}

TEST(AnnotateRecords, FillsFreqVocabMorphsAndFusion) {
  std::vector<WordRecord> records(2);
  records[0].sentence_id = "1";
  records[0].ref_index = 0;
  records[0].surface = "evler";
  records[1].sentence_id = "1";
  records[1].ref_index = 2;
  records[1].surface = "zzz";

  FrequencyTable freq;
  freq.add("evler", 150);
  std::set<std::string> vocab = {"evler"};
  ExternalSegmentation seg("ext", {{"evler", {"ev", "ler"}}});
  std::map<std::string, std::map<int, double>> fusion = {{"1", {{0, 0.8}}}};

  AnnotateOptions opts;
  opts.freq = &freq;
  opts.model_vocab = &vocab;
  opts.segmenter = &seg;
  opts.fusion = &fusion;
  annotate_records(records, opts);

  EXPECT_EQ(records[0].train_freq, 150);
  EXPECT_TRUE(records[0].in_vocab);
  ASSERT_TRUE(records[0].morph_count.has_value());
  EXPECT_EQ(*records[0].morph_count, 2);
  ASSERT_TRUE(records[0].fusion.has_value());
  EXPECT_DOUBLE_EQ(*records[0].fusion, 0.8);

  EXPECT_EQ(records[1].train_freq, 0);  // unseen word
  EXPECT_FALSE(records[1].in_vocab);
  EXPECT_FALSE(records[1].morph_count.has_value());
  EXPECT_FALSE(records[1].fusion.has_value());
}

std::vector<WordRecord> synthetic_records(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<WordRecord> records;
  for (int i = 0; i < n; ++i) {
    WordRecord r;
    r.sentence_id = std::to_string(i / 10 + 1);
    r.ref_index = i % 10;
    r.surface = "w" + std::to_string(i);
    r.pos = "NOUN";
    r.train_freq = static_cast<std::int64_t>(rng() % 2000);
    r.in_vocab = rng() % 2 == 0;
    if (rng() % 5 != 0) r.morph_count = 1 + static_cast<int>(rng() % 6);
    if (rng() % 3 != 0) r.fusion = (rng() % 2 == 0) ? 0.0 : 0.5;
    r.accuracy = rng() % 2;
    records.push_back(std::move(r));
  }
  return records;
}

TEST(Stratify, SuppressesSmallCells) {
  std::vector<WordRecord> records;
  for (int i = 0; i < 29; ++i) {
    WordRecord r;
    r.in_vocab = true;
    r.accuracy = 1;
    records.push_back(r);
  }
  StratifiedReport report = stratify(records, {StratAxis::InVocab});
  ASSERT_EQ(report.cells.size(), 1u);
  EXPECT_TRUE(report.cells[0].suppressed);  // 29 < 30
  EXPECT_EQ(report.cells[0].n, 29u);

  records.push_back(records.back());
  report = stratify(records, {StratAxis::InVocab});
  EXPECT_FALSE(report.cells[0].suppressed);
  EXPECT_DOUBLE_EQ(report.cells[0].mean_accuracy, 1.0);
}

TEST(Stratify, AllAccurateGivesMeanOne) {
  std::vector<WordRecord> records = synthetic_records(200, 3);
  for (WordRecord& r : records) r.accuracy = 1;
  StratifiedReport report = stratify(records, {StratAxis::FreqBin}, 1);
  for (const StratCell& c : report.cells) {
    EXPECT_DOUBLE_EQ(c.mean_accuracy, 1.0);
  }
}

// Independent group-by oracle on 500 records, plus the total-count
// invariant and order invariance.
TEST(Stratify, MatchesBruteForceGroupBy) {
  std::vector<WordRecord> records = synthetic_records(500, 17);
  std::vector<StratAxis> axes = {StratAxis::FreqBin, StratAxis::InVocab,
                                 StratAxis::MorphCount};
  StratifiedReport report = stratify(records, axes, 30);

  std::map<std::string, std::pair<int, int>> oracle;  // key -> (n, correct)
  for (const WordRecord& r : records) {
    std::string key = "freq_bin=" + frequency_bin_label(frequency_bin(r.train_freq));
    key += std::string("|in_vocab=") + (r.in_vocab ? "in_vocab" : "not_in_vocab");
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
    EXPECT_EQ(c.n, static_cast<std::size_t>(n));
    if (!c.suppressed) {
      EXPECT_DOUBLE_EQ(c.mean_accuracy, static_cast<double>(correct) / n);
    } else {
      EXPECT_LT(c.n, 30u);
    }
    total += c.n;
  }
  EXPECT_EQ(total, records.size());

  std::mt19937 rng(4);
  std::shuffle(records.begin(), records.end(), rng);
  StratifiedReport shuffled = stratify(records, axes, 30);
  ASSERT_EQ(shuffled.cells.size(), report.cells.size());
  for (std::size_t i = 0; i < report.cells.size(); ++i) {
    EXPECT_EQ(shuffled.cells[i].key(), report.cells[i].key());
    EXPECT_EQ(shuffled.cells[i].n, report.cells[i].n);
  }
}

TEST(Stratify, FusionBinarySplit) {
  std::vector<WordRecord> records;
  for (int i = 0; i < 14; ++i) {
    WordRecord r;
    r.fusion = 0.0;
    records.push_back(r);
  }
  for (int i = 0; i < 48; ++i) {
    WordRecord r;
    r.fusion = 0.3 + 0.1 * (i % 3);
    records.push_back(r);
  }
  WordRecord na;
  records.push_back(na);
  StratifiedReport report = stratify(records, {StratAxis::FusionBinary}, 5);
  ASSERT_EQ(report.cells.size(), 3u);
  EXPECT_EQ(report.cells[0].labels[0].second, "fusion=0");
  EXPECT_EQ(report.cells[0].n, 14u);
  EXPECT_EQ(report.cells[1].labels[0].second, "fusion>0");
  EXPECT_EQ(report.cells[1].n, 48u);
  EXPECT_EQ(report.cells[2].labels[0].second, "na");
  EXPECT_EQ(report.cells[2].n, 1u);
}

TEST(Stratify, SingleAxisTotalsAlwaysSumToRecordCount) {
  std::vector<WordRecord> records = synthetic_records(337, 23);
  for (StratAxis axis : {StratAxis::MorphCount, StratAxis::FusionBinary, StratAxis::FreqBin,
                         StratAxis::InVocab}) {
    StratifiedReport report = stratify(records, {axis}, 30);
    std::size_t total = 0;
    for (const StratCell& c : report.cells) total += c.n;
    EXPECT_EQ(total, records.size()) << strat_axis_name(axis);
  }
}

TEST(RecordsCsv, RoundTrip) {
  TempDir dir;
  std::vector<WordRecord> records = synthetic_records(50, 9);
  records[0].surface = "with,comma";
  records[1].aligned_hyp_surface = "quote\"inside";
  save_records_csv(records, dir.file("records.csv"));
  std::vector<WordRecord> loaded = load_records_csv(dir.file("records.csv"));
  ASSERT_EQ(loaded.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(loaded[i].surface, records[i].surface);
    EXPECT_EQ(loaded[i].accuracy, records[i].accuracy);
    EXPECT_EQ(loaded[i].morph_count.has_value(), records[i].morph_count.has_value());
    EXPECT_EQ(loaded[i].train_freq, records[i].train_freq);
  }
}

TEST(HumanScores, LoadValidatesRanges) {
  TempDir dir;
  testing::write_text(dir.file("scores.tsv"), "1\t0\t4\t3\n1\t1\t1\t1\n");
  std::vector<HumanScore> scores = load_human_scores(dir.file("scores.tsv"));
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_EQ(scores[0].semantic, 4);

  testing::write_text(dir.file("bad.tsv"), "1\t0\t5\t3\n");
  EXPECT_THROW(load_human_scores(dir.file("bad.tsv")), ParseError);
  testing::write_text(dir.file("bad2.tsv"), "1\t0\t4\t0\n");
  EXPECT_THROW(load_human_scores(dir.file("bad2.tsv")), ParseError);
  testing::write_text(dir.file("empty.tsv"), "");
  EXPECT_TRUE(load_human_scores(dir.file("empty.tsv")).empty());
}

TEST(HumanScores, AggregationCountsZeroAccuracyOverlap) {
  std::vector<WordRecord> records(2);
  records[0].sentence_id = "1";
  records[0].ref_index = 0;
  records[0].accuracy = 0;
  records[0].in_vocab = true;
  records[1].sentence_id = "1";
  records[1].ref_index = 1;
  records[1].accuracy = 1;
  records[1].in_vocab = true;

  std::vector<HumanScore> scores = {{"1", 0, 4, 3}, {"1", 1, 4, 2}, {"2", 0, 1, 1}};
  HumanReport report = aggregate_human_scores(scores, records, {StratAxis::InVocab});
  EXPECT_EQ(report.joined, 2u);
  EXPECT_EQ(report.skipped, 1u);  // unknown record

  // semantic score 4 was given twice; one of those records had accuracy 0
  bool found = false;
  for (const HumanScoreCell& c : report.cells) {
    if (c.scale == "semantic" && c.score == 4) {
      EXPECT_EQ(c.count, 2u);
      EXPECT_EQ(c.zero_accuracy, 1u);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace morphtyp

#include "morphtyp/indices.hpp"

#include <algorithm>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/segmenter.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

std::size_t synthesis_word(const std::vector<std::string>& morphs) {
  if (morphs.empty()) throw InputError("synthesis_word: empty morpheme list");
  return morphs.size();
}

double synthesis_text(const std::vector<Sentence>& corpus, const Segmenter& segmenter,
                      std::size_t* skipped) {
  std::size_t words = 0;
  std::size_t morphs = 0;
  std::size_t miss = 0;
  for (const Sentence& sent : corpus) {
    for (const Token& tok : sent.tokens) {
      if (tok.has_upos()) {
        if (tok.upos == "PUNCT" || tok.upos == "NUM" || tok.upos == "SYM") continue;
      } else if (!is_word_surface(tok.surface)) {
        continue;
      }
      std::optional<std::vector<std::string>> pieces = segmenter.try_segment(tok.surface);
      if (!pieces) {
        ++miss;
        continue;
      }
      ++words;
      morphs += pieces->size();
    }
  }
  if (skipped) *skipped = miss;
  if (words == 0) throw InputError("synthesis_text: no scorable word tokens");
  return static_cast<double>(morphs) / static_cast<double>(words);
}

namespace {

void validate_profile(const MorphFeatureProfile& profile) {
  if (profile.empty()) throw InputError("morph profile: empty");
  bool has_root = false;
  for (const MorphRecord& r : profile) {
    if (r.feature_count < 0) throw InputError("morph profile: negative feature count");
    if (r.morpheme.empty()) throw InputError("morph profile: empty morpheme");
    has_root = has_root || r.carries_root;
  }
  if (!has_root) throw InputError("morph profile: no morpheme carries the root");
}

}  // namespace

JointTally word_joints(const MorphFeatureProfile& profile) {
  validate_profile(profile);
  JointTally tally;
  for (const MorphRecord& r : profile) {
    std::int64_t load = r.feature_count + (r.carries_root ? 1 : 0);
    tally.fusional_joints += std::max<std::int64_t>(load - 1, 0);
  }
  tally.explicit_boundaries = static_cast<std::int64_t>(profile.size()) - 1;
  return tally;
}

FusionValue fusion_word(const MorphFeatureProfile& profile) {
  JointTally tally = word_joints(profile);
  if (tally.total() == 0) return {0.0, true};
  return {static_cast<double>(tally.fusional_joints) / static_cast<double>(tally.total()), false};
}

FusionValue fusion_text(const std::vector<MorphFeatureProfile>& profiles) {
  JointTally sum;
  for (const MorphFeatureProfile& p : profiles) sum += word_joints(p);
  if (sum.total() == 0) return {0.0, true};
  return {static_cast<double>(sum.fusional_joints) / static_cast<double>(sum.total()), false};
}

std::vector<ProfileRow> load_profiles(const std::string& path) {
  std::vector<ProfileRow> rows;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(path, i + 1, "expected word<TAB>morphs<TAB>featcounts<TAB>rootflags");
    }
    std::vector<std::string> morphs = split(cols[1], '|');
    std::vector<std::string> counts = split(cols[2], ',');
    std::vector<std::string> roots = split(cols[3], ',');
    if (counts.size() != morphs.size() || roots.size() != morphs.size()) {
      throw ParseError(path, i + 1, "feature count / root flag lists do not match morphemes");
    }
    ProfileRow row;
    row.word = cols[0];
    for (std::size_t k = 0; k < morphs.size(); ++k) {
      MorphRecord rec;
      rec.morpheme = morphs[k];
      try {
        rec.feature_count = std::stoi(counts[k]);
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "bad feature count: " + counts[k]);
      }
      if (roots[k] != "0" && roots[k] != "1") {
        throw ParseError(path, i + 1, "root flag must be 0 or 1: " + roots[k]);
      }
      rec.carries_root = roots[k] == "1";
      row.profile.push_back(std::move(rec));
    }
    validate_profile(row.profile);
    rows.push_back(std::move(row));
  }
  return rows;
}

void save_profiles(const std::vector<ProfileRow>& rows, const std::string& path) {
  std::string out;
  for (const ProfileRow& row : rows) {
    out += row.word;
    out.push_back('\t');
    for (std::size_t i = 0; i < row.profile.size(); ++i) {
      if (i) out.push_back('|');
      out += row.profile[i].morpheme;
    }
    out.push_back('\t');
    for (std::size_t i = 0; i < row.profile.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(row.profile[i].feature_count);
    }
    out.push_back('\t');
    for (std::size_t i = 0; i < row.profile.size(); ++i) {
      if (i) out.push_back(',');
      out += row.profile[i].carries_root ? "1" : "0";
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

}  // namespace morphtyp

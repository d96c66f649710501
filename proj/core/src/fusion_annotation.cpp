#include "morphtyp/fusion_annotation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

const std::set<std::string> kDefaultVerbPos = {"VERB", "AUX"};

std::string termination_label(Termination t) {
  switch (t) {
    case Termination::Ar: return "-ar";
    case Termination::Er: return "-er";
    case Termination::Ir: return "-ir";
    case Termination::Other: return "other";
  }
  return "other";
}

std::optional<Termination> parse_termination(std::string_view label) {
  if (label == "-ar") return Termination::Ar;
  if (label == "-er") return Termination::Er;
  if (label == "-ir") return Termination::Ir;
  if (label == "other") return Termination::Other;
  return std::nullopt;
}

Termination termination_of_lemma(std::string_view lemma) {
  std::string low = lowercase(lemma);
  if (ends_with(low, "ar") || ends_with(low, "ár")) return Termination::Ar;
  if (ends_with(low, "er") || ends_with(low, "ér")) return Termination::Er;
  if (ends_with(low, "ir") || ends_with(low, "ír")) return Termination::Ir;
  return Termination::Other;
}

namespace {

std::string upper_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// UD feature -> UniMorph-style atoms, covering the Spanish verb inflection
// dimensions. Spanish simple past is perfective, imperfect is
// imperfective; bare participles count as past participles.
std::vector<std::string> ud_atom_to_unimorph(const std::string& key, const std::string& value) {
  if (key == "Mood") {
    if (value == "Ind") return {"IND"};
    if (value == "Sub") return {"SBJV"};
    if (value == "Cnd") return {"COND"};
    if (value == "Imp") return {"IMP"};
  } else if (key == "Tense") {
    if (value == "Pres") return {"PRS"};
    if (value == "Fut") return {"FUT"};
    if (value == "Past") return {"PST", "PFV"};
    if (value == "Imp") return {"PST", "IPFV"};
    if (value == "Pqp") return {"PST", "PRF"};
  } else if (key == "Person") {
    if (value == "1" || value == "2" || value == "3") return {value};
  } else if (key == "Number") {
    if (value == "Sing") return {"SG"};
    if (value == "Plur") return {"PL"};
  } else if (key == "Gender") {
    if (value == "Fem") return {"FEM"};
    if (value == "Masc") return {"MASC"};
  } else if (key == "Aspect") {
    if (value == "Perf") return {"PFV"};
    if (value == "Imp") return {"IPFV"};
    if (value == "Prog") return {"PROG"};
  } else if (key == "VerbForm") {
    if (value == "Fin") return {};  // finiteness is carried by mood/tense
    if (value == "Part") return {"PTCP", "PST"};
    if (value == "Inf") return {"NFIN"};
    if (value == "Ger") return {"GER"};
  }
  return {key + "=" + value};
}

// Pure part-of-speech atoms carry no inflection and are dropped.
bool is_pos_atom(const std::string& atom) {
  static const std::set<std::string> kPos = {"V", "N", "ADJ", "ADV", "AUX"};
  return kPos.count(atom) > 0;
}

std::vector<std::string> unimorph_atom(const std::string& raw) {
  std::string atom = upper_ascii(trim(raw));
  if (atom.empty() || is_pos_atom(atom)) return {};
  if (atom == "V.PTCP") return {"PTCP"};
  if (atom == "V.CVB" || atom == "V.GER") return {"GER"};
  if (atom == "V.MSDR") return {"MSDR"};
  return {atom};
}

std::string join_sorted(std::set<std::string> atoms) {
  std::string out;
  for (const std::string& a : atoms) {
    if (!out.empty()) out.push_back(';');
    out += a;
  }
  return out;
}

}  // namespace

std::string canonical_bundle(const std::map<std::string, std::string>& feats) {
  std::set<std::string> atoms;
  for (const auto& [key, value] : feats) {
    for (std::string& atom : ud_atom_to_unimorph(key, value)) atoms.insert(std::move(atom));
  }
  return join_sorted(std::move(atoms));
}

std::string canonical_bundle(std::string_view bundle) {
  std::string s = trim(bundle);
  if (s.empty() || s == "_") return "";
  std::set<std::string> atoms;
  if (s.find('=') != std::string::npos) {
    // UD style
    for (const std::string& item : split(s, '|')) {
      std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InputError("malformed feature item: " + item);
      }
      for (std::string& atom :
           ud_atom_to_unimorph(trim(std::string_view(item).substr(0, eq)),
                               trim(std::string_view(item).substr(eq + 1)))) {
        atoms.insert(std::move(atom));
      }
    }
  } else {
    for (const std::string& item : split(s, ';')) {
      for (std::string& atom : unimorph_atom(item)) atoms.insert(std::move(atom));
    }
  }
  return join_sorted(std::move(atoms));
}

ExtractResult extract_unique_paradigms(const std::vector<Sentence>& corpus,
                                       const std::set<std::string>& pos_filter) {
  struct Stats {
    std::map<std::string, std::int64_t> form_counts;
    std::int64_t total = 0;
  };
  std::map<ParadigmKey, Stats> grouped;
  ExtractResult result;

  for (const Sentence& sent : corpus) {
    for (const Token& tok : sent.tokens) {
      if (!tok.has_upos() || pos_filter.count(tok.upos) == 0) continue;
      ParadigmKey key;
      key.bundle = canonical_bundle(tok.feats);
      if (tok.has_lemma()) {
        key.termination = termination_of_lemma(tok.lemma);
      } else {
        key.termination = Termination::Other;
        ++result.missing_lemma;
      }
      Stats& st = grouped[key];
      ++st.form_counts[tok.surface];
      ++st.total;
    }
  }

  for (const auto& [key, st] : grouped) {
    ParadigmEntry entry;
    entry.key = key;
    entry.occurrences = st.total;
    std::int64_t best = 0;
    for (const auto& [form, count] : st.form_counts) {  // ordered map: ties lexicographic
      if (count > best) {
        best = count;
        entry.sample_form = form;
      }
    }
    result.entries.push_back(std::move(entry));
  }
  return result;
}

namespace {

constexpr const char* kSheetHeader =
    "paradigm_id\tfeatures\ttermination\tsample_form\tsegmentation\tper_morph_features\troot_flags";

std::string morphs_joined(const MorphFeatureProfile& profile) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) out.push_back('-');
    out += profile[i].morpheme;
  }
  return out;
}

}  // namespace

void emit_annotation_sheet(const std::vector<ParadigmEntry>& entries, const std::string& path) {
  std::string out = kSheetHeader;
  out.push_back('\n');
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const ParadigmEntry& e = entries[i];
    out += "p" + std::to_string(i + 1);
    out.push_back('\t');
    out += e.key.bundle;
    out.push_back('\t');
    out += termination_label(e.key.termination);
    out.push_back('\t');
    out += e.sample_form;
    out += "\t\t\t\n";  // segmentation, per_morph_features, root_flags left blank
  }
  write_file(path, out);
}

IngestResult ingest_annotation_sheet(const std::string& path) {
  IngestResult result;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    if (i == 0 && starts_with(line, "paradigm_id\t")) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 7 && cols.size() != 8) {
      result.rejected.push_back({i + 1, "expected 7 or 8 tab-separated columns"});
      continue;
    }
    const std::string& features = cols[1];
    const std::string& termination = cols[2];
    const std::string& sample = cols[3];
    const std::string& segmentation = cols[4];
    const std::string& per_morph = cols[5];
    const std::string& root_flags = cols[6];
    if (segmentation.empty() || per_morph.empty()) {
      result.rejected.push_back({i + 1, "unfilled annotation columns"});
      continue;
    }

    std::optional<Termination> term = parse_termination(termination);
    if (!term) {
      result.rejected.push_back({i + 1, "unknown termination: " + termination});
      continue;
    }
    std::vector<std::string> morphs = split(segmentation, '-');
    std::string concat;
    for (const std::string& m : morphs) concat += m;
    if (concat != sample) {
      result.rejected.push_back({i + 1, "segmentation does not concatenate to " + sample});
      continue;
    }
    std::vector<std::string> count_items = split(per_morph, ',');
    if (count_items.size() != morphs.size()) {
      result.rejected.push_back({i + 1, "feature count list does not match morpheme count"});
      continue;
    }
    std::vector<std::string> root_items;
    if (root_flags.empty()) {
      // default: the first morpheme carries the root
      root_items.assign(morphs.size(), "0");
      root_items[0] = "1";
    } else {
      root_items = split(root_flags, ',');
    }
    if (root_items.size() != morphs.size()) {
      result.rejected.push_back({i + 1, "root flag list does not match morpheme count"});
      continue;
    }

    ParadigmAnnotation ann;
    ann.key.bundle = canonical_bundle(features);
    ann.key.termination = *term;
    ann.sample_form = sample;
    bool bad = false;
    for (std::size_t k = 0; k < morphs.size(); ++k) {
      MorphRecord rec;
      rec.morpheme = morphs[k];
      try {
        rec.feature_count = std::stoi(count_items[k]);
      } catch (const std::exception&) {
        bad = true;
        break;
      }
      rec.carries_root = trim(root_items[k]) == "1";
      ann.profile.push_back(std::move(rec));
    }
    if (bad || std::none_of(ann.profile.begin(), ann.profile.end(),
                            [](const MorphRecord& r) { return r.carries_root; })) {
      result.rejected.push_back({i + 1, "bad feature counts or no root morpheme"});
      continue;
    }

    FusionValue fv = fusion_word(ann.profile);
    ann.fusion = fv.value;
    ann.jointless = fv.jointless;
    if (cols.size() == 8 && !cols[7].empty()) {
      double provided;
      try {
        provided = std::stod(cols[7]);
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "bad fusion value: " + cols[7]);
      }
      // Annotation inconsistency is a hard error; 0.01 absorbs sheets that
      // round or truncate to two decimals (e.g. 0.66 for 2/3).
      if (std::fabs(provided - ann.fusion) > 0.01) {
        throw ParseError(path, i + 1,
                         "provided fusion " + cols[7] + " disagrees with recomputed " +
                             format_number(ann.fusion));
      }
    }
    result.annotations.push_back(std::move(ann));
  }
  return result;
}

void write_annotations(const std::vector<ParadigmAnnotation>& annotations,
                       const std::string& path) {
  std::vector<const ParadigmAnnotation*> sorted;
  for (const auto& a : annotations) sorted.push_back(&a);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->key < b->key; });

  std::string out = kSheetHeader;
  out += "\tfusion\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const ParadigmAnnotation& a = *sorted[i];
    out += "p" + std::to_string(i + 1);
    out.push_back('\t');
    out += a.key.bundle;
    out.push_back('\t');
    out += termination_label(a.key.termination);
    out.push_back('\t');
    out += a.sample_form;
    out.push_back('\t');
    out += morphs_joined(a.profile);
    out.push_back('\t');
    for (std::size_t k = 0; k < a.profile.size(); ++k) {
      if (k) out.push_back(',');
      out += std::to_string(a.profile[k].feature_count);
    }
    out.push_back('\t');
    for (std::size_t k = 0; k < a.profile.size(); ++k) {
      if (k) out.push_back(',');
      out += a.profile[k].carries_root ? "1" : "0";
    }
    out.push_back('\t');
    out += format_number(a.fusion);
    out.push_back('\n');
  }
  write_file(path, out);
}

OverrideTable load_overrides(const std::string& path) {
  OverrideTable table;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 4) {
      throw ParseError(path, i + 1, "expected sentence_id<TAB>token_index<TAB>UPOS<TAB>FEATS");
    }
    TokenRef ref;
    ref.sentence_id = cols[0];
    try {
      ref.token_index = std::stoi(cols[1]);
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "bad token index: " + cols[1]);
    }
    Override ov;
    ov.upos = cols[2];
    if (!cols[3].empty() && cols[3] != "_") {
      for (const std::string& item : split(cols[3], '|')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ParseError(path, i + 1, "malformed FEATS item: " + item);
        }
        ov.feats[item.substr(0, eq)] = item.substr(eq + 1);
      }
    }
    table[ref] = std::move(ov);
  }
  return table;
}

std::vector<LemmaException> load_lemma_exceptions(const std::string& path) {
  std::vector<LemmaException> out;
  IngestResult raw;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    if (i == 0 && starts_with(line, "paradigm_id\t")) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 7 && cols.size() != 8) {
      throw ParseError(path, i + 1, "expected 7 or 8 tab-separated columns");
    }
    std::vector<std::string> morphs = split(cols[4], '-');
    std::vector<std::string> counts = split(cols[5], ',');
    if (cols[4].empty() || counts.size() != morphs.size()) {
      throw ParseError(path, i + 1, "unfilled or inconsistent annotation columns");
    }
    std::vector<std::string> roots;
    if (cols[6].empty()) {
      roots.assign(morphs.size(), "0");
      roots[0] = "1";
    } else {
      roots = split(cols[6], ',');
      if (roots.size() != morphs.size()) throw ParseError(path, i + 1, "bad root flags");
    }
    MorphFeatureProfile profile;
    for (std::size_t k = 0; k < morphs.size(); ++k) {
      MorphRecord rec;
      rec.morpheme = morphs[k];
      try {
        rec.feature_count = std::stoi(counts[k]);
      } catch (const std::exception&) {
        throw ParseError(path, i + 1, "bad feature count: " + counts[k]);
      }
      rec.carries_root = trim(roots[k]) == "1";
      profile.push_back(std::move(rec));
    }
    LemmaException ex;
    ex.bundle = canonical_bundle(cols[1]);
    ex.lemma = cols[2];  // termination column holds the lemma here
    ex.fusion = fusion_word(profile).value;
    out.push_back(std::move(ex));
  }
  return out;
}

ProjectionResult project_fusion(const std::vector<Sentence>& corpus,
                                const std::vector<ParadigmAnnotation>& annotations,
                                const OverrideTable& overrides,
                                const std::vector<LemmaException>& exceptions,
                                const std::set<std::string>& pos_filter) {
  std::map<std::string, double> by_key;
  for (const ParadigmAnnotation& a : annotations) by_key[a.key.canonical()] = a.fusion;
  std::map<std::pair<std::string, std::string>, double> by_lemma;
  for (const LemmaException& e : exceptions) by_lemma[{e.bundle, lowercase(e.lemma)}] = e.fusion;

  std::map<std::string, const Sentence*> by_id;
  for (const Sentence& sent : corpus) by_id[sent.id] = &sent;
  for (const auto& [ref, ov] : overrides) {
    auto it = by_id.find(ref.sentence_id);
    if (it == by_id.end()) {
      throw InputError("override refers to unknown sentence id: " + ref.sentence_id);
    }
    if (ref.token_index < 0 ||
        static_cast<std::size_t>(ref.token_index) >= it->second->tokens.size()) {
      throw InputError("override token index out of range in sentence " + ref.sentence_id);
    }
  }

  ProjectionResult result;
  for (const Sentence& sent : corpus) {
    for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
      const Token* tok = &sent.tokens[t];
      Token patched;
      TokenRef ref{sent.id, static_cast<int>(t)};
      auto ov = overrides.find(ref);
      if (ov != overrides.end()) {
        patched = *tok;
        patched.upos = ov->second.upos;
        patched.feats = ov->second.feats;
        tok = &patched;
      }
      if (!tok->has_upos() || pos_filter.count(tok->upos) == 0) continue;
      ++result.verbs;

      std::string bundle = canonical_bundle(tok->feats);
      if (tok->has_lemma()) {
        auto ex = by_lemma.find({bundle, lowercase(tok->lemma)});
        if (ex != by_lemma.end()) {
          result.assignments[ref] = ex->second;
          ++result.covered;
          continue;
        }
      }
      ParadigmKey key;
      key.bundle = std::move(bundle);
      key.termination =
          tok->has_lemma() ? termination_of_lemma(tok->lemma) : Termination::Other;
      auto hit = by_key.find(key.canonical());
      if (hit != by_key.end()) {
        result.assignments[ref] = hit->second;
        ++result.covered;
      } else {
        result.uncovered.push_back(ref);
      }
    }
  }
  return result;
}

}  // namespace morphtyp

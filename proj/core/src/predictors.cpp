#include "morphtyp/predictors.hpp"

#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

namespace {

bool counts_as_word(const Token& tok) {
  if (tok.has_upos()) {
    return tok.upos != "PUNCT" && tok.upos != "NUM" && tok.upos != "SYM";
  }
  return is_word_surface(tok.surface);
}

bool is_noun_or_verb(const Token& tok) {
  return tok.upos == "NOUN" || tok.upos == "VERB";
}

// Length of the space-joined tokens in code points.
double char_count(const Sentence& sentence) {
  std::size_t chars = 0;
  for (const Token& tok : sentence.tokens) chars += utf8_length(tok.surface);
  if (!sentence.tokens.empty()) chars += sentence.tokens.size() - 1;
  return static_cast<double>(chars);
}

// Total subword pieces over the sentence's word tokens, or nullopt if any
// word is not segmentable by the model.
std::optional<double> subword_count(const Sentence& sentence, const Segmenter& model) {
  std::size_t pieces = 0;
  for (const Token& tok : sentence.tokens) {
    if (!counts_as_word(tok)) continue;
    std::optional<std::vector<std::string>> seg = model.try_segment(tok.surface);
    if (!seg) return std::nullopt;
    pieces += seg->size();
  }
  return static_cast<double>(pieces);
}

double feat_count(const Sentence& sentence) {
  std::size_t feats = 0;
  for (const Token& tok : sentence.tokens) feats += tok.feats.size();
  return static_cast<double>(feats);
}

}  // namespace

std::map<std::string, double> compute_predictors_synthesis(const Sentence& sentence,
                                                           const Segmenter* analyzer,
                                                           const NamedSegmenters& models) {
  std::map<std::string, double> out;
  double words = 0, nv_words = 0;
  std::optional<double> morphs = 0.0, nv_morphs = 0.0;
  for (const Token& tok : sentence.tokens) {
    if (!counts_as_word(tok)) continue;
    words += 1;
    std::optional<std::vector<std::string>> seg =
        analyzer ? analyzer->try_segment(tok.surface) : std::nullopt;
    if (analyzer && !seg) morphs = std::nullopt;  // uncovered word: undefined
    if (morphs && analyzer) *morphs += static_cast<double>(seg->size());
    if (is_noun_or_verb(tok)) {
      nv_words += 1;
      if (analyzer && !seg) nv_morphs = std::nullopt;
      if (nv_morphs && analyzer) *nv_morphs += static_cast<double>(seg->size());
    }
  }
  if (words == 0) return out;  // row excluded

  out["char.count"] = char_count(sentence);
  out["word.count"] = words;
  if (analyzer && morphs) {
    out["morph.count"] = *morphs;
    out["synthesis"] = *morphs / words;
  }
  out["N+V.word.count"] = nv_words;
  if (analyzer && nv_morphs) {
    out["N+V.morph.count"] = *nv_morphs;
    if (nv_words > 0) out["N+V.synthesis"] = *nv_morphs / nv_words;
  }
  for (const auto& [name, model] : models) {
    std::optional<double> sw = subword_count(sentence, *model);
    if (!sw) continue;
    out["sw" + name + ".count"] = *sw;
    out["syn.sw" + name] = *sw / words;
  }
  return out;
}

std::map<std::string, double> compute_predictors_fusion(const Sentence& sentence,
                                                        const std::map<int, double>& verb_fusion,
                                                        const NamedSegmenters& models,
                                                        const std::set<std::string>& pos_filter) {
  std::map<std::string, double> out;
  double words = 0, verbs = 0;
  std::optional<double> fusion = 0.0;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& tok = sentence.tokens[i];
    if (counts_as_word(tok)) words += 1;
    if (tok.has_upos() && pos_filter.count(tok.upos) > 0) {
      verbs += 1;
      auto it = verb_fusion.find(static_cast<int>(i));
      if (it == verb_fusion.end()) {
        fusion = std::nullopt;  // uncovered verb: fusion predictors undefined
      } else if (fusion) {
        *fusion += it->second;
      }
    }
  }
  if (words == 0) return out;  // row excluded

  out["char.count"] = char_count(sentence);
  out["word.count"] = words;
  out["verb.count"] = verbs;
  if (fusion) {
    out["fusion"] = *fusion;
    if (verbs > 0) out["R.fusion.verb"] = *fusion / verbs;
    out["R.fusion.word"] = *fusion / words;
  }
  for (const auto& [name, model] : models) {
    std::optional<double> sw = subword_count(sentence, *model);
    if (!sw) continue;
    out["sw" + name + ".count"] = *sw;
    if (fusion && *sw > 0) out["R.fusion.sw" + name] = *fusion / *sw;
  }
  return out;
}

std::map<std::string, double> compute_predictors_bilingual(const Sentence& src,
                                                           const Sentence& ref,
                                                           const NamedSegmenters& models) {
  std::map<std::string, double> out;
  double src_words = 0, ref_words = 0;
  for (const Token& tok : src.tokens) src_words += counts_as_word(tok) ? 1 : 0;
  for (const Token& tok : ref.tokens) ref_words += counts_as_word(tok) ? 1 : 0;
  if (src_words == 0 || ref_words == 0) return out;  // row excluded

  out["src.char.count"] = char_count(src);
  out["ref.char.count"] = char_count(ref);
  out["src.word.count"] = src_words;
  out["ref.word.count"] = ref_words;

  for (const auto& [name, model] : models) {
    std::optional<double> src_sw = subword_count(src, *model);
    std::optional<double> ref_sw = subword_count(ref, *model);
    if (src_sw) {
      out["src." + name + ".count"] = *src_sw;
      out["src.SYN." + name] = *src_sw / src_words;
    }
    if (ref_sw) {
      out["ref." + name + ".count"] = *ref_sw;
      out["ref.SYN." + name] = *ref_sw / ref_words;
    }
  }

  double src_feats = feat_count(src);
  double ref_feats = feat_count(ref);
  out["src.feat.count"] = src_feats;
  out["ref.feat.count"] = ref_feats;
  double src_ratio = src_feats / src_words;
  double ref_ratio = ref_feats / ref_words;
  out["src.R.feat.token"] = src_ratio;
  out["ref.R.feat.token"] = ref_ratio;
  out["src-ref.feat.count"] = src_feats - ref_feats;
  out["ref-src.feat.count"] = ref_feats - src_feats;
  out["src-ref.R.feat.token"] = src_ratio - ref_ratio;
  out["ref-src.R.feat.token"] = ref_ratio - src_ratio;
  return out;
}

}  // namespace morphtyp

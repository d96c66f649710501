#include "morphtyp/segmenter.hpp"

#include <nlohmann/json.hpp>

#include "morphtyp/bpe.hpp"
#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/morfessor.hpp"
#include "morphtyp/text_util.hpp"
#include "morphtyp/unigram.hpp"

namespace morphtyp {

using nlohmann::json;

std::vector<std::string> apply_marker(std::vector<std::string> pieces, std::string_view marker) {
  if (marker.empty()) return pieces;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    pieces[i] = std::string(marker) + pieces[i];
  }
  return pieces;
}

std::vector<std::string> strip_markers(std::vector<std::string> pieces, std::string_view marker) {
  if (marker.empty()) return pieces;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (starts_with(pieces[i], marker)) pieces[i] = pieces[i].substr(marker.size());
  }
  return pieces;
}

std::string concat_pieces(const std::vector<std::string>& pieces, std::string_view marker) {
  std::string out;
  std::vector<std::string> stripped = strip_markers(pieces, marker);
  for (const std::string& p : stripped) out += p;
  return out;
}

std::vector<std::string> Segmenter::segment(std::string_view word) const {
  if (word.empty()) throw InputError("segment: empty word");
  std::optional<std::vector<std::string>> pieces = try_segment(word);
  if (!pieces) {
    throw InputError("segment: word not covered by " + method() + " segmenter: " +
                     std::string(word));
  }
  return *pieces;
}

ExternalSegmentation ExternalSegmentation::load_tsv(const std::string& path, std::string name,
                                                    std::vector<RejectedRow>* rejected) {
  GoldLexiconLoadResult loaded = load_gold_segmentations(path);
  if (rejected) *rejected = loaded.rejected;
  return ExternalSegmentation(std::move(name), std::move(loaded.lexicon.entries));
}

std::optional<std::vector<std::string>> ExternalSegmentation::try_segment(
    std::string_view word) const {
  auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, std::int64_t> word_type_counts(const std::vector<Sentence>& corpus) {
  std::map<std::string, std::int64_t> types;
  for (const Sentence& sent : corpus) {
    for (const Token& tok : sent.tokens) ++types[tok.surface];
  }
  return types;
}

// Serialization of the trained model types. Keeps json out of the public
// headers.
class ModelIo {
 public:
  static json to_json(const Segmenter& model) {
    json j;
    j["method"] = model.method();
    j["version"] = 1;
    if (const auto* bpe = dynamic_cast<const BpeModel*>(&model)) {
      j["marker"] = bpe->marker_;
      json merges = json::array();
      for (const auto& [a, b] : bpe->merges_) merges.push_back(json::array({a, b}));
      j["merges"] = std::move(merges);
      j["vocab"] = bpe->vocab_;
    } else if (const auto* uni = dynamic_cast<const UnigramModel*>(&model)) {
      j["marker"] = uni->marker_;
      j["pieces"] = uni->pieces_;
    } else if (const auto* mor = dynamic_cast<const MorfessorModel*>(&model)) {
      j["analyses"] = mor->analyses_;
      j["word_counts"] = mor->word_counts_;
      j["char_cost"] = mor->char_cost_;
    } else if (const auto* ext = dynamic_cast<const ExternalSegmentation*>(&model)) {
      j["name"] = ext->name();
      j["entries"] = ext->entries();
    } else {
      throw InputError("cannot serialize segmenter of method " + model.method());
    }
    return j;
  }

  static std::unique_ptr<Segmenter> from_json(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("method") || !j.contains("version")) {
      throw InputError("not a model file: " + path);
    }
    if (j.at("version").get<int>() != 1) {
      throw InputError("unsupported model version in " + path);
    }
    const std::string method = j.at("method").get<std::string>();
    if (method == "bpe") {
      auto model = std::make_unique<BpeModel>();
      model->marker_ = j.at("marker").get<std::string>();
      for (const auto& pair : j.at("merges")) {
        model->merges_.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<std::string>());
      }
      model->vocab_ = j.at("vocab").get<std::set<std::string>>();
      return model;
    }
    if (method == "unigram") {
      auto model = std::make_unique<UnigramModel>(
          j.at("pieces").get<std::map<std::string, double>>(),
          j.at("marker").get<std::string>());
      return model;
    }
    if (method == "morfessor") {
      auto model = std::make_unique<MorfessorModel>();
      model->analyses_ = j.at("analyses").get<std::map<std::string, std::vector<std::string>>>();
      model->word_counts_ = j.at("word_counts").get<std::map<std::string, std::int64_t>>();
      model->char_cost_ = j.at("char_cost").get<double>();
      for (const auto& [word, analysis] : model->analyses_) {
        for (const std::string& m : analysis) model->add_morph(m, 1);
      }
      return model;
    }
    if (method == "external") {
      return std::make_unique<ExternalSegmentation>(
          j.at("name").get<std::string>(),
          j.at("entries").get<std::map<std::string, std::vector<std::string>>>());
    }
    throw InputError("unknown segmenter method in " + path + ": " + method);
  }
};

void save_model(const Segmenter& model, const std::string& path) {
  write_file(path, ModelIo::to_json(model).dump(2) + "\n");
}

std::unique_ptr<Segmenter> load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError("cannot parse model file " + path + ": " + e.what());
  }
  try {
    return ModelIo::from_json(j, path);
  } catch (const json::exception& e) {
    throw InputError("malformed model file " + path + ": " + e.what());
  }
}

}  // namespace morphtyp

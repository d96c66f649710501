#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "morphtyp/corpus.hpp"

namespace morphtyp {

inline constexpr std::string_view kDefaultMarker = "##";

// Prefixes the continuation marker to every non-initial piece.
std::vector<std::string> apply_marker(std::vector<std::string> pieces, std::string_view marker);

// Removes a leading continuation marker from every piece.
std::vector<std::string> strip_markers(std::vector<std::string> pieces, std::string_view marker);

std::string concat_pieces(const std::vector<std::string>& pieces, std::string_view marker);

class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual std::string method() const = 0;
  virtual std::string_view marker() const { return {}; }

  // nullopt only for external-lexicon misses, which is distinct from a
  // one-morpheme segmentation.
  virtual std::optional<std::vector<std::string>> try_segment(std::string_view word) const = 0;

  // Throws InputError on empty words and external misses.
  std::vector<std::string> segment(std::string_view word) const;

  // Marker-stripped morpheme count.
  std::size_t morph_count(std::string_view word) const { return segment(word).size(); }
};

// Imported segmentations (e.g. output of an external supervised model),
// served behind the same interface as the trained segmenters.
class ExternalSegmentation : public Segmenter {
 public:
  ExternalSegmentation() = default;
  ExternalSegmentation(std::string name, std::map<std::string, std::vector<std::string>> entries)
      : name_(std::move(name)), entries_(std::move(entries)) {}

  // Same TSV format and concatenation validation as gold segmentations.
  static ExternalSegmentation load_tsv(const std::string& path, std::string name,
                                       std::vector<RejectedRow>* rejected = nullptr);

  std::string method() const override { return "external"; }
  const std::string& name() const { return name_; }
  std::optional<std::vector<std::string>> try_segment(std::string_view word) const override;

  const std::map<std::string, std::vector<std::string>>& entries() const { return entries_; }

 private:
  std::string name_;
  std::map<std::string, std::vector<std::string>> entries_;
};

// Versioned JSON model files: {"method": ..., "version": 1, ...payload}.
void save_model(const Segmenter& model, const std::string& path);
std::unique_ptr<Segmenter> load_model(const std::string& path);

// Word-type counts over token surfaces; the unit every trainer consumes.
std::map<std::string, std::int64_t> word_type_counts(const std::vector<Sentence>& corpus);

}  // namespace morphtyp

#include "morphtyp/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

std::vector<Sentence> load_plain_text(const std::string& path) {
  std::vector<Sentence> sentences;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    std::size_t bad = utf8_invalid_at(line);
    if (bad != std::string::npos) {
      throw ParseError(path, i + 1, "invalid UTF-8 at byte offset " + std::to_string(bad));
    }
    std::vector<std::string> forms = split_whitespace(line);
    if (forms.empty()) continue;
    Sentence sent;
    sent.id = std::to_string(i + 1);
    sent.raw = line;
    sent.tokens.reserve(forms.size());
    for (auto& f : forms) {
      Token tok;
      tok.surface = std::move(f);
      sent.tokens.push_back(std::move(tok));
    }
    sentences.push_back(std::move(sent));
  }
  return sentences;
}

namespace {

std::map<std::string, std::string> parse_feats(const std::string& feats,
                                               const std::string& path,
                                               std::size_t line_no) {
  std::map<std::string, std::string> out;
  if (feats.empty() || feats == "_") return out;
  for (const std::string& item : split(feats, '|')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(path, line_no, "malformed FEATS item: " + item);
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

bool is_skippable_id(const std::string& id) {
  // Multiword-token ranges ("2-4") and empty nodes ("2.1").
  return id.find('-') != std::string::npos || id.find('.') != std::string::npos;
}

}  // namespace

std::vector<Sentence> load_conllu(const std::string& path) {
  std::vector<Sentence> sentences;
  const std::vector<std::string> lines = read_lines(path);

  Sentence current;
  std::string pending_id;
  std::string pending_text;
  std::size_t auto_id = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) {
      pending_id.clear();
      pending_text.clear();
      return;
    }
    ++auto_id;
    current.id = pending_id.empty() ? std::to_string(auto_id) : pending_id;
    if (!pending_text.empty()) {
      current.raw = pending_text;
    } else {
      std::string joined;
      for (std::size_t i = 0; i < current.tokens.size(); ++i) {
        if (i) joined.push_back(' ');
        joined += current.tokens[i].surface;
      }
      current.raw = joined;
    }
    sentences.push_back(std::move(current));
    current = Sentence{};
    pending_id.clear();
    pending_text.clear();
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      std::string body = trim(std::string_view(line).substr(1));
      if (starts_with(body, "sent_id")) {
        std::size_t eq = body.find('=');
        if (eq != std::string::npos) pending_id = trim(std::string_view(body).substr(eq + 1));
      } else if (starts_with(body, "text")) {
        std::size_t eq = body.find('=');
        if (eq != std::string::npos) pending_text = trim(std::string_view(body).substr(eq + 1));
      }
      continue;
    }
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(path, i + 1,
                       "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (is_skippable_id(cols[0])) continue;
    Token tok;
    tok.surface = cols[1];
    if (tok.surface.empty()) throw ParseError(path, i + 1, "empty FORM column");
    if (cols[2] != "_") tok.lemma = cols[2];
    if (cols[3] != "_") tok.upos = cols[3];
    tok.feats = parse_feats(cols[5], path, i + 1);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

void FrequencyTable::add(std::string_view form, std::int64_t n) {
  counts_[std::string(form)] += n;
  total_ += n;
}

std::int64_t FrequencyTable::count(std::string_view form) const {
  auto it = counts_.find(std::string(form));
  return it == counts_.end() ? 0 : it->second;
}

void FrequencyTable::save_tsv(const std::string& path) const {
  std::vector<std::pair<std::string, std::int64_t>> sorted(counts_.begin(), counts_.end());
  std::sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& [form, n] : sorted) {
    out += form;
    out.push_back('\t');
    out += std::to_string(n);
    out.push_back('\n');
  }
  write_file(path, out);
}

FrequencyTable FrequencyTable::load_tsv(const std::string& path) {
  FrequencyTable table;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> cols = split(lines[i], '\t');
    if (cols.size() != 2) throw ParseError(path, i + 1, "expected form<TAB>count");
    std::int64_t n = 0;
    try {
      n = std::stoll(cols[1]);
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "bad count: " + cols[1]);
    }
    if (n < 0) throw ParseError(path, i + 1, "negative count");
    table.add(cols[0], n);
  }
  return table;
}

FrequencyTable build_frequency_table(const std::vector<Sentence>& corpus, bool lowercase_forms) {
  FrequencyTable table;
  for (const Sentence& sent : corpus) {
    for (const Token& tok : sent.tokens) {
      table.add(lowercase_forms ? lowercase(tok.surface) : tok.surface);
    }
  }
  return table;
}

const std::vector<std::int64_t> kDefaultFrequencyBinEdges = {0, 100, 1000};

std::size_t frequency_bin(std::int64_t count, const std::vector<std::int64_t>& edges) {
  if (count < 0) throw InputError("frequency_bin: negative count");
  if (edges.empty()) throw InputError("frequency_bin: empty edge list");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw InputError("frequency_bin: edges must be strictly ascending");
  }
  std::size_t bin = 0;
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (count >= edges[i]) bin = i;
  }
  return bin;
}

std::string frequency_bin_label(std::size_t bin, const std::vector<std::int64_t>& edges) {
  if (bin + 1 < edges.size()) {
    return "[" + std::to_string(edges[bin]) + "," + std::to_string(edges[bin + 1]) + ")";
  }
  return ">=" + std::to_string(edges[bin]);
}

namespace {

std::string normalized_concat(const std::vector<std::string>& morphs,
                              std::string_view alternation_markers) {
  std::string joined;
  for (const std::string& m : morphs) {
    for (char c : m) {
      if (alternation_markers.find(c) != std::string_view::npos) continue;
      joined.push_back(c);
    }
  }
  return lowercase(joined);
}

}  // namespace

GoldLexiconLoadResult load_gold_segmentations(const std::string& path,
                                              std::string_view alternation_markers) {
  GoldLexiconLoadResult result;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 2) {
      result.rejected.push_back({i + 1, "expected word<TAB>morphemes"});
      continue;
    }
    const std::string& word = cols[0];
    std::vector<std::string> morphs = split_whitespace(cols[1]);
    if (word.empty() || morphs.empty()) {
      result.rejected.push_back({i + 1, "empty word or morpheme list"});
      continue;
    }
    if (normalized_concat(morphs, alternation_markers) != lowercase(word)) {
      result.rejected.push_back({i + 1, "morphemes do not concatenate to word: " + word});
      continue;
    }
    result.lexicon.entries[word] = std::move(morphs);
  }
  return result;
}

void save_gold_segmentations(const GoldSegmentationLexicon& lexicon, const std::string& path) {
  std::string out;
  for (const auto& [word, morphs] : lexicon.entries) {
    out += word;
    out.push_back('\t');
    for (std::size_t i = 0; i < morphs.size(); ++i) {
      if (i) out.push_back(' ');
      out += morphs[i];
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

}  // namespace morphtyp

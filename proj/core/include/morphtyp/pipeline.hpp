#pragma once

#include <string>
#include <utility>
#include <vector>

namespace morphtyp {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

struct RunReport {
  bool ok = false;
  std::string manifest_path;
  std::vector<std::string> outputs;  // paths written, in order
  std::string failed_stage;
  std::string error;
};

// Executes the stage set named by a JSON run-configuration file. Stages run
// in dependency order (eval-seg, segment, align, word-eval, predictors,
// fit, chart); all required inputs are checked before any stage runs. A
// manifest with input/output hashes and the embedded config is written
// beside the outputs; reruns with identical inputs are byte-identical.
// `overrides` are dotted-path config overrides, e.g.
// {"params.vocab_size", "200"}.
RunReport run_pipeline(const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

}  // namespace morphtyp

#pragma once

#include <string>

#include "morphtyp/linear_model.hpp"
#include "morphtyp/word_eval.hpp"

namespace morphtyp {

// Deterministic SVG renderers. Charts are views of the report structures:
// every number drawn also exists in the corresponding CSV/JSON.

// One bar per stratification cell, mean accuracy as height, n printed
// above; suppressed cells render as a hatched placeholder with the n label
// and no bar height.
std::string render_grouped_bars_svg(const StratifiedReport& report,
                                    const std::string& title = {});

// Score histogram bubbles per stratum and scale; the inner bubble is the
// zero-accuracy share.
std::string render_bubble_svg(const HumanReport& report, const std::string& title = {});

// System-by-predictor significance grid; filled cells carry the signed t.
std::string render_grid_svg(const SignificanceGrid& grid, const std::string& title = {});

void render_chart_to_file(const std::string& style, const std::string& report_path,
                          const std::string& out_path, const std::string& title = {});

}  // namespace morphtyp

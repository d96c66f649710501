#include "morphtyp/chart.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "morphtyp/csv.hpp"
#include "morphtyp/errors.hpp"
#include "morphtyp/text_util.hpp"

namespace morphtyp {

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) { return format_number(std::round(v * 100.0) / 100.0); }

std::string svg_header(double width, double height) {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                    "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
                    num(height) + "\">\n";
  out +=
      "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" "
      "patternTransform=\"rotate(45)\" patternUnits=\"userSpaceOnUse\">"
      "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#999999\" stroke-width=\"2\"/>"
      "</pattern></defs>\n";
  return out;
}

std::string text_el(double x, double y, const std::string& s, int size = 11,
                    const std::string& anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + xml_escape(s) +
         "</text>\n";
}

std::string rect_el(double x, double y, double w, double h, const std::string& fill,
                    const std::string& stroke = "#333333") {
  return "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" +
         num(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

}  // namespace

std::string render_grouped_bars_svg(const StratifiedReport& report, const std::string& title) {
  if (report.cells.empty()) throw InputError("render chart: empty report");

  const double bar_w = 34, gap = 14, left = 50, bottom = 70, top = 40;
  const double plot_h = 180;
  const double width = left + report.cells.size() * (bar_w + gap) + 20;
  const double height = top + plot_h + bottom;

  std::string svg = svg_header(width, height);
  if (!title.empty()) svg += text_el(width / 2, 20, title, 13);

  // y axis: accuracy 0..1
  svg += "<line x1=\"" + num(left - 6) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left - 6) +
         "\" y2=\"" + num(top + plot_h) + "\" stroke=\"#333333\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    double frac = tick / 4.0;
    double y = top + plot_h * (1.0 - frac);
    svg += text_el(left - 10, y + 4, format_number(frac), 9, "end");
  }

  double x = left;
  for (const StratCell& cell : report.cells) {
    if (cell.suppressed) {
      svg += rect_el(x, top + plot_h - 24, bar_w, 24, "url(#hatch)", "#999999");
      svg += text_el(x + bar_w / 2, top + plot_h - 30, "n=" + std::to_string(cell.n), 9);
    } else {
      double h = plot_h * cell.mean_accuracy;
      svg += rect_el(x, top + plot_h - h, bar_w, h, "#4477aa");
      svg += text_el(x + bar_w / 2, top + plot_h - h - 14, num(cell.mean_accuracy), 9);
      svg += text_el(x + bar_w / 2, top + plot_h - h - 4, "n=" + std::to_string(cell.n), 9);
    }
    // stacked cell labels under the bar
    double label_y = top + plot_h + 12;
    for (const auto& [axis, value] : cell.labels) {
      svg += text_el(x + bar_w / 2, label_y, value, 8);
      label_y += 10;
    }
    x += bar_w + gap;
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_bubble_svg(const HumanReport& report, const std::string& title) {
  if (report.cells.empty()) throw InputError("render chart: empty report");

  std::vector<std::string> strata;
  for (const HumanScoreCell& c : report.cells) {
    if (std::find(strata.begin(), strata.end(), c.stratum) == strata.end()) {
      strata.push_back(c.stratum);
    }
  }
  std::size_t max_count = 1;
  for (const HumanScoreCell& c : report.cells) max_count = std::max(max_count, c.count);

  const double cell_w = 64, cell_h = 48, left = 160, top = 60;
  const int semantic_rows = 4, grammar_rows = 3;
  const double section_gap = 30;
  const double width = left + strata.size() * cell_w + 30;
  const double height =
      top + (semantic_rows + grammar_rows) * cell_h + section_gap + 60;

  std::string svg = svg_header(width, height);
  if (!title.empty()) svg += text_el(width / 2, 20, title, 13);

  auto section = [&](const std::string& scale, int rows, double y0) {
    svg += text_el(10, y0 - 8, scale, 12, "start");
    for (int score = 1; score <= rows; ++score) {
      double cy = y0 + (rows - score) * cell_h + cell_h / 2;
      svg += text_el(left - 12, cy + 4, "score " + std::to_string(score), 10, "end");
      for (std::size_t s = 0; s < strata.size(); ++s) {
        const HumanScoreCell* cell = nullptr;
        for (const HumanScoreCell& c : report.cells) {
          if (c.stratum == strata[s] && c.scale == scale && c.score == score) {
            cell = &c;
            break;
          }
        }
        if (!cell || cell->count == 0) continue;
        double cx = left + s * cell_w + cell_w / 2;
        double r = 4.0 + 16.0 * std::sqrt(static_cast<double>(cell->count) /
                                          static_cast<double>(max_count));
        svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
               "\" fill=\"#88bbdd\" stroke=\"#336699\"/>\n";
        if (cell->zero_accuracy > 0) {
          double ri = r * std::sqrt(static_cast<double>(cell->zero_accuracy) /
                                    static_cast<double>(cell->count));
          svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(ri) +
                 "\" fill=\"#ee8833\"/>\n";
        }
        svg += text_el(cx, cy + 3, std::to_string(cell->count), 8);
      }
    }
  };
  section("semantic", semantic_rows, top);
  double grammar_y = top + semantic_rows * cell_h + section_gap;
  section("grammar", grammar_rows, grammar_y);

  double label_y = grammar_y + grammar_rows * cell_h + 16;
  for (std::size_t s = 0; s < strata.size(); ++s) {
    svg += text_el(left + s * cell_w + cell_w / 2, label_y, strata[s], 8);
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_grid_svg(const SignificanceGrid& grid, const std::string& title) {
  if (grid.systems.empty() || grid.predictors.empty()) {
    throw InputError("render chart: empty report");
  }
  const double cell_w = 72, cell_h = 26, left = 190, top = 70;
  const double width = left + grid.systems.size() * cell_w + 20;
  const double height = top + grid.predictors.size() * cell_h + 30;

  std::string svg = svg_header(width, height);
  if (!title.empty()) svg += text_el(width / 2, 20, title, 13);

  for (std::size_t c = 0; c < grid.systems.size(); ++c) {
    svg += text_el(left + c * cell_w + cell_w / 2, top - 10, grid.systems[c], 10);
  }
  for (std::size_t r = 0; r < grid.predictors.size(); ++r) {
    double y = top + r * cell_h;
    svg += text_el(left - 8, y + cell_h / 2 + 4, grid.predictors[r], 10, "end");
    auto row = grid.cells.find(grid.predictors[r]);
    for (std::size_t c = 0; c < grid.systems.size(); ++c) {
      double x = left + c * cell_w;
      std::string fill = "#eeeeee";
      std::string label;
      if (row != grid.cells.end()) {
        auto it = row->second.find(grid.systems[c]);
        if (it != row->second.end()) {
          fill = it->second >= 0 ? "#4477aa" : "#cc6677";
          label = num(it->second);
        }
      }
      svg += rect_el(x, y, cell_w, cell_h, fill, "#ffffff");
      if (!label.empty()) {
        svg += "<text x=\"" + num(x + cell_w / 2) + "\" y=\"" + num(y + cell_h / 2 + 4) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" "
               "fill=\"#ffffff\">" +
               xml_escape(label) + "</text>\n";
      }
    }
  }
  svg += "</svg>\n";
  return svg;
}

namespace {

StratifiedReport stratified_from_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError("cannot parse report " + path + ": " + e.what());
  }
  StratifiedReport report;
  report.min_samples = j.value("min_samples", 30);
  report.total = j.value("total", 0);
  for (const auto& row : j.at("cells")) {
    StratCell cell;
    for (const auto& [axis, value] : row.at("labels").items()) {
      cell.labels.emplace_back(axis, value.get<std::string>());
    }
    cell.n = row.at("n").get<std::size_t>();
    cell.suppressed = row.at("suppressed").get<bool>();
    if (!cell.suppressed) cell.mean_accuracy = row.at("mean_accuracy").get<double>();
    report.cells.push_back(std::move(cell));
  }
  return report;
}

HumanReport human_from_csv(const std::string& path) {
  HumanReport report;
  const std::vector<std::string> lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    if (i == 0 && starts_with(lines[i], "stratum,")) continue;
    std::vector<std::string> cols = csv_split(lines[i]);
    if (cols.size() != 5) throw ParseError(path, i + 1, "expected 5 columns");
    HumanScoreCell cell;
    cell.stratum = cols[0];
    cell.scale = cols[1];
    try {
      cell.score = std::stoi(cols[2]);
      cell.count = static_cast<std::size_t>(std::stoull(cols[3]));
      cell.zero_accuracy = static_cast<std::size_t>(std::stoull(cols[4]));
    } catch (const std::exception&) {
      throw ParseError(path, i + 1, "malformed histogram row");
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace

void render_chart_to_file(const std::string& style, const std::string& report_path,
                          const std::string& out_path, const std::string& title) {
  std::string svg;
  if (style == "grouped-bars") {
    svg = render_grouped_bars_svg(stratified_from_json(report_path), title);
  } else if (style == "bubble") {
    svg = render_bubble_svg(human_from_csv(report_path), title);
  } else if (style == "grid") {
    svg = render_grid_svg(SignificanceGrid::load_csv(report_path), title);
  } else {
    throw InputError("unknown chart style: " + style);
  }
  write_file(out_path, svg);
}

}  // namespace morphtyp

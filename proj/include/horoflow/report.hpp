#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "horoflow/imcf.hpp"
#include "horoflow/shitam.hpp"

namespace horoflow {

// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

// One row per flow record. The u and w columns stay empty when no lapse is given.
void write_trace_csv(const std::filesystem::path& path, const FlowTrace& trace,
                     const ShiTamResult* lapse);

// Pretty JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::string sha256_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it into place.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

// Deterministic SVG line chart.
std::string render_line_plot(const std::string& title, const std::string& xlabel,
                             const std::vector<PlotSeries>& series);

// m_H, log10 sup|H^2 - 4|, log10 sup|A - H g/2|^2, sup|Khat - 1| and, with a lapse,
// the w envelope. Returns the file names written.
std::vector<std::string> emit_plots(const FlowTrace& trace, const ShiTamResult* lapse,
                                    const std::filesystem::path& dir);

}  // namespace horoflow

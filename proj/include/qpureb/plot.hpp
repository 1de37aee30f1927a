// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

// Minimal SVG line and polar plots plus CSV output helpers.

#pragma once

#include <string>
#include <vector>

namespace qpureb {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 640;
  int height = 480;
};

// Cartesian line plot. With log_y, non-positive values are dropped.
std::string line_plot_svg(const std::vector<Series>& series, const PlotOptions& opts);

// Polar plot: x holds angles in radians, y radii.
std::string polar_plot_svg(const std::vector<Series>& series, const PlotOptions& opts);

void write_text_file(const std::string& path, const std::string& content);

// Shortest round-trip decimal representation.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

}  // namespace qpureb

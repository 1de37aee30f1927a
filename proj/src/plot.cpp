// Copyright 2026 The qpureb Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "qpureb/plot.hpp"

#include "qpureb/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace qpureb {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                    "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Frame {
  double left = 70, right = 20, top = 40, bottom = 55;
};

void header(std::ostringstream& os, const PlotOptions& opts) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    os << "<text x=\"" << opts.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(opts.title) << "</text>\n";
  }
}

void legend(std::ostringstream& os, const std::vector<Series>& series, double x, double y) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double yy = y + 16.0 * i;
    os << "<line x1=\"" << x << "\" y1=\"" << yy << "\" x2=\"" << x + 18 << "\" y2=\"" << yy << "\" stroke=\""
       << kPalette[i % 8] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << x + 24 << "\" y=\"" << yy + 4 << "\">" << escape(series[i].label) << "</text>\n";
  }
}

}  // namespace

std::string line_plot_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  const Frame f;
  const double pw = opts.width - f.left - f.right, ph = opts.height - f.top - f.bottom;
  const auto ty = [&](double v) { return opts.log_y ? std::log10(v) : v; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (opts.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (opts.log_y) y0 = std::floor(y0), y1 = std::ceil(y1);
  if (x1 - x0 < 1e-300) x1 = x0 + 1;
  if (y1 - y0 < 1e-300) y1 = y0 + 1;
  const auto px = [&](double v) { return f.left + (v - x0) / (x1 - x0) * pw; };
  const auto py = [&](double v) { return f.top + (1.0 - (ty(v) - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  header(os, opts);
  os << "<rect x=\"" << f.left << "\" y=\"" << f.top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double xp = f.left + pw * i / 5.0;
    os << "<line x1=\"" << xp << "\" y1=\"" << f.top + ph << "\" x2=\"" << xp << "\" y2=\"" << f.top + ph + 5
       << "\" stroke=\"black\"/>\n<text x=\"" << xp << "\" y=\"" << f.top + ph + 18 << "\" text-anchor=\"middle\">"
       << num(xv) << "</text>\n";
  }
  const int yticks = opts.log_y ? static_cast<int>(y1 - y0) : 5;
  for (int i = 0; i <= yticks; ++i) {
    const double yv = y0 + (y1 - y0) * i / std::max(yticks, 1);
    const double yp = f.top + ph * (1.0 - static_cast<double>(i) / std::max(yticks, 1));
    const std::string label = opts.log_y ? "1e" + num(yv) : num(yv);
    os << "<line x1=\"" << f.left - 5 << "\" y1=\"" << yp << "\" x2=\"" << f.left << "\" y2=\"" << yp
       << "\" stroke=\"black\"/>\n<text x=\"" << f.left - 8 << "\" y=\"" << yp + 4 << "\" text-anchor=\"end\">"
       << label << "</text>\n";
  }
  os << "<text x=\"" << f.left + pw / 2 << "\" y=\"" << opts.height - 12 << "\" text-anchor=\"middle\">"
     << escape(opts.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << f.top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(opts.y_label) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[k % 8] << "\" stroke-width=\"1.5\" points=\"";
    const auto& s = series[k];
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (opts.log_y && !(s.y[i] > 0.0)) continue;
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << px(s.x[i]) << "," << py(s.y[i]) << " ";
    }
    os << "\"/>\n";
  }
  legend(os, series, f.left + pw - 120, f.top + 16);
  os << "</svg>\n";
  return os.str();
}

std::string polar_plot_svg(const std::vector<Series>& series, const PlotOptions& opts) {
  double rmax = 0.0;
  for (const auto& s : series)
    for (double r : s.y)
      if (std::isfinite(r)) rmax = std::max(rmax, r);
  if (rmax <= 0.0) rmax = 1.0;
  const double cx = opts.width / 2.0, cy = opts.height / 2.0 + 10;
  const double scale = (std::min(opts.width, opts.height) / 2.0 - 50) / rmax;

  std::ostringstream os;
  header(os, opts);
  for (int i = 1; i <= 4; ++i) {
    os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << scale * rmax * i / 4
       << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  }
  os << "<text x=\"" << cx + scale * rmax + 4 << "\" y=\"" << cy - 4 << "\">" << num(rmax) << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    os << "<polygon fill=\"none\" stroke=\"" << kPalette[k % 8] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << cx + scale * s.y[i] * std::cos(s.x[i]) << "," << cy - scale * s.y[i] * std::sin(s.x[i]) << " ";
    }
    os << "\"/>\n";
  }
  legend(os, series, 20, 50);
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw ContractViolation("CsvWriter: wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

}  // namespace qpureb

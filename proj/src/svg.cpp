#include "sgaudit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sgaudit/errors.hpp"
#include "sgaudit/matrix_io.hpp"

namespace sgaudit {

namespace {

constexpr double kW = 720, kH = 480;
constexpr double kL = 80, kR = 30, kT = 50, kB = 60;  // margins

const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                 "#9467bd", "#ff7f0e", "#8c564b"};
  return colors[i % 6];
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

std::string num(double v) {
  std::ostringstream ss;
  ss.precision(2);
  ss << std::fixed << v;
  return ss.str();
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  bool log;
  double tx(double x) const {
    const double u = log ? std::log10(x) : x;
    const double lo = log ? std::log10(x_lo) : x_lo;
    const double hi = log ? std::log10(x_hi) : x_hi;
    return kL + (u - lo) / (hi - lo) * (kW - kL - kR);
  }
  double ty(double y) const {
    const double u = log ? std::log10(y) : y;
    const double lo = log ? std::log10(y_lo) : y_lo;
    const double hi = log ? std::log10(y_hi) : y_hi;
    return kH - kB - (u - lo) / (hi - lo) * (kH - kT - kB);
  }
};

std::string tick_label(double v, bool log) {
  if (!log) return num(v);
  const double e = std::log10(v);
  std::ostringstream ss;
  ss << "1e" << static_cast<long>(std::lround(e));
  return ss.str();
}

void axis_ticks(std::ostringstream& svg, const Frame& f, const std::string& xlabel,
                const std::string& ylabel) {
  svg << "<rect x='" << kL << "' y='" << kT << "' width='" << (kW - kL - kR)
      << "' height='" << (kH - kT - kB)
      << "' fill='none' stroke='#444' stroke-width='1'/>\n";
  auto emit_x = [&](double v) {
    const double px = f.tx(v);
    svg << "<line x1='" << num(px) << "' y1='" << (kH - kB) << "' x2='" << num(px)
        << "' y2='" << (kH - kB + 5) << "' stroke='#444'/>\n"
        << "<text x='" << num(px) << "' y='" << (kH - kB + 20)
        << "' text-anchor='middle' font-size='11'>" << tick_label(v, f.log)
        << "</text>\n";
  };
  auto emit_y = [&](double v) {
    const double py = f.ty(v);
    svg << "<line x1='" << (kL - 5) << "' y1='" << num(py) << "' x2='" << kL
        << "' y2='" << num(py) << "' stroke='#444'/>\n"
        << "<text x='" << (kL - 8) << "' y='" << num(py + 4)
        << "' text-anchor='end' font-size='11'>" << tick_label(v, f.log)
        << "</text>\n";
  };
  if (f.log) {
    for (double v = std::pow(10.0, std::ceil(std::log10(f.x_lo))); v <= f.x_hi * 1.0001;
         v *= 10.0)
      emit_x(v);
    for (double v = std::pow(10.0, std::ceil(std::log10(f.y_lo))); v <= f.y_hi * 1.0001;
         v *= 10.0)
      emit_y(v);
  } else {
    for (int i = 0; i <= 4; ++i) {
      emit_x(f.x_lo + (f.x_hi - f.x_lo) * i / 4.0);
      emit_y(f.y_lo + (f.y_hi - f.y_lo) * i / 4.0);
    }
  }
  svg << "<text x='" << (kL + (kW - kL - kR) / 2) << "' y='" << (kH - 15)
      << "' text-anchor='middle' font-size='13'>" << esc(xlabel) << "</text>\n";
  svg << "<text x='18' y='" << (kT + (kH - kT - kB) / 2)
      << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 "
      << (kT + (kH - kT - kB) / 2) << ")'>" << esc(ylabel) << "</text>\n";
}

void write_svg_impl(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool log) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log && (x <= 0.0 || y <= 0.0)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (!(x_lo <= x_hi)) throw InputError("SVG plot has no drawable points");
  if (x_lo == x_hi) { x_lo *= 0.5; x_hi *= 2.0; }
  if (y_lo == y_hi) {
    y_lo = log ? y_lo * 0.5 : y_lo - 1.0;
    y_hi = log ? y_hi * 2.0 : y_hi + 1.0;
  }
  if (!log) {
    const double padx = 0.05 * (x_hi - x_lo), pady = 0.05 * (y_hi - y_lo);
    x_lo -= padx; x_hi += padx; y_lo -= pady; y_hi += pady;
  } else {
    x_lo /= 1.3; x_hi *= 1.3; y_lo /= 1.3; y_hi *= 1.3;
  }
  Frame f{x_lo, x_hi, y_lo, y_hi, log};
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
      << "' viewBox='0 0 " << kW << " " << kH << "'>\n"
      << "<rect width='100%' height='100%' fill='white'/>\n"
      << "<text x='" << kW / 2 << "' y='28' text-anchor='middle' font-size='15'>"
      << esc(title) << "</text>\n";
  axis_ticks(svg, f, xlabel, ylabel);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    std::ostringstream pl;
    bool any = false;
    for (auto [x, y] : s.pts) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (log && (x <= 0.0 || y <= 0.0)) continue;
      pl << num(f.tx(x)) << "," << num(f.ty(y)) << " ";
      any = true;
    }
    if (!any) continue;
    svg << "<polyline points='" << pl.str() << "' fill='none' stroke='" << palette(i)
        << "' stroke-width='1.6'";
    if (s.dashed) svg << " stroke-dasharray='6 4'";
    svg << "/>\n";
    if (s.markers)
      for (auto [x, y] : s.pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if (log && (x <= 0.0 || y <= 0.0)) continue;
        svg << "<circle cx='" << num(f.tx(x)) << "' cy='" << num(f.ty(y))
            << "' r='3' fill='" << palette(i) << "'/>\n";
      }
    const double ly = kT + 18 + 16 * static_cast<double>(i);
    svg << "<line x1='" << (kL + 12) << "' y1='" << num(ly - 4) << "' x2='" << (kL + 36)
        << "' y2='" << num(ly - 4) << "' stroke='" << palette(i) << "' stroke-width='2'";
    if (s.dashed) svg << " stroke-dasharray='6 4'";
    svg << "/>\n<text x='" << (kL + 42) << "' y='" << num(ly)
        << "' font-size='11'>" << esc(s.label) << "</text>\n";
  }
  svg << "</svg>\n";
  write_file_atomic(path, svg.str());
}

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series) {
  write_svg_impl(path, title, xlabel, ylabel, series, true);
}

void write_xy_svg(const std::string& path, const std::string& title,
                  const std::string& xlabel, const std::string& ylabel,
                  const std::vector<PlotSeries>& series) {
  write_svg_impl(path, title, xlabel, ylabel, series, false);
}

}  // namespace sgaudit

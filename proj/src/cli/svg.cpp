#include "svg.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "table_io.hpp"

namespace garma::cli {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};
constexpr const char* kMarked = "#d62728";

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return {buf, ptr};
}

std::string tick_text(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
  return {buf, ptr};
}

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

// Round step of roughly span / 5.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

struct Panel {
  double left, top, width, height;
  double x0, x1, y0, y1;

  double px(double x) const { return left + (x - x0) / (x1 - x0) * width; }
  double py(double y) const { return top + height - (y - y0) / (y1 - y0) * height; }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
}

void draw_axes(std::ostream& s, const Panel& p, const std::string& title, bool x_ticks = true) {
  s << "<rect x=\"" << num(p.left) << "\" y=\"" << num(p.top) << "\" width=\"" << num(p.width)
    << "\" height=\"" << num(p.height) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  s << "<text x=\"" << num(p.left + p.width / 2) << "\" y=\"" << num(p.top - 8)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(title) << "</text>\n";
  const double ys = nice_step(p.y1 - p.y0);
  for (double v = std::ceil(p.y0 / ys) * ys; v <= p.y1; v += ys) {
    s << "<line x1=\"" << num(p.left - 4) << "\" y1=\"" << num(p.py(v)) << "\" x2=\"" << num(p.left)
      << "\" y2=\"" << num(p.py(v)) << "\" stroke=\"#333\"/>"
      << "<text x=\"" << num(p.left - 6) << "\" y=\"" << num(p.py(v) + 4)
      << "\" text-anchor=\"end\" font-size=\"10\">" << tick_text(v) << "</text>\n";
  }
  if (!x_ticks) return;
  const double xs = nice_step(p.x1 - p.x0);
  for (double v = std::ceil(p.x0 / xs) * xs; v <= p.x1; v += xs) {
    const double y = p.top + p.height;
    s << "<line x1=\"" << num(p.px(v)) << "\" y1=\"" << num(y) << "\" x2=\"" << num(p.px(v)) << "\" y2=\""
      << num(y + 4) << "\" stroke=\"#333\"/>"
      << "<text x=\"" << num(p.px(v)) << "\" y=\"" << num(y + 16) << "\" text-anchor=\"middle\" font-size=\"10\">"
      << tick_text(v) << "</text>\n";
  }
}

void open_svg(std::ostream& s, double width, double height) {
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
    << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Stems for one intensity vector; `marked` (if < size) is drawn in red.
void draw_stems(std::ostream& s, const Panel& p, const IntensityVector& iv, std::size_t marked) {
  const std::size_t count = iv.values.size();
  const std::size_t label_every = std::max<std::size_t>(1, (count + 39) / 40);
  const double base = p.py(0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = p.px(static_cast<double>(i));
    const char* colour = i == marked ? kMarked : kPalette[0];
    s << "<line class=\"stem\" x1=\"" << num(x) << "\" y1=\"" << num(base) << "\" x2=\"" << num(x) << "\" y2=\""
      << num(p.py(iv.values[i])) << "\" stroke=\"" << colour << "\" stroke-width=\"2\" data-label=\""
      << iv.label(i) << "\" data-value=\"" << format_double(iv.values[i]) << "\"/>"
      << "<circle cx=\"" << num(x) << "\" cy=\"" << num(p.py(iv.values[i])) << "\" r=\"2.5\" fill=\"" << colour
      << "\"/>\n";
    if (i % label_every == 0) {
      const double ly = p.top + p.height + 8;
      s << "<text x=\"" << num(x) << "\" y=\"" << num(ly) << "\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-60 "
        << num(x) << ' ' << num(ly) << ")\">" << iv.label(i) << "</text>\n";
    }
  }
}

Panel stem_panel(const IntensityVector& iv, double left, double top, double width, double height) {
  double hi = iv.values.empty() ? 1.0 : *std::max_element(iv.values.begin(), iv.values.end());
  if (!(hi > 0.0)) hi = 1.0;
  const double count = static_cast<double>(iv.values.size());
  return {left, top, width, height, -0.5, count - 0.5, 0.0, hi * 1.08};
}

}  // namespace

std::string series_svg(const Eigen::MatrixXd& series) {
  const double width = 820, height = 480;
  double lo = INFINITY, hi = -INFINITY;
  for (Eigen::Index r = 0; r < series.rows(); ++r) {
    for (Eigen::Index c = 0; c < series.cols(); ++c) {
      const double v = series(r, c);
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  widen(lo, hi);
  const double m = static_cast<double>(series.cols());
  const Panel p{70, 40, width - 100, height - 90, 0.5, std::max(m, 1.0) + 0.5, lo, hi};

  std::ostringstream s;
  open_svg(s, width, height);
  draw_axes(s, p, "Generated series (" + std::to_string(series.rows()) + " x " + std::to_string(series.cols()) + ")");
  s << "<g fill=\"#bbbbbb\">\n";
  for (Eigen::Index r = 0; r < series.rows(); ++r) {
    for (Eigen::Index c = 0; c < series.cols(); ++c) {
      if (!std::isfinite(series(r, c))) continue;
      s << "<circle cx=\"" << num(p.px(double(c + 1))) << "\" cy=\"" << num(p.py(series(r, c))) << "\" r=\"1.8\"/>\n";
    }
  }
  s << "</g>\n";
  for (Eigen::Index r = 0; r < series.rows(); ++r) {
    s << "<polyline class=\"series\" fill=\"none\" stroke=\"" << kPalette[static_cast<std::size_t>(r) % kPalette.size()]
      << "\" stroke-width=\"1.2\" data-values=\"";
    for (Eigen::Index c = 0; c < series.cols(); ++c) s << (c ? "," : "") << format_double(series(r, c));
    s << "\" points=\"";
    bool first = true;
    for (Eigen::Index c = 0; c < series.cols(); ++c) {
      // Missing values are skipped; the line joins their neighbours.
      if (!std::isfinite(series(r, c))) continue;
      s << (first ? "" : " ") << num(p.px(double(c + 1))) << ',' << num(p.py(series(r, c)));
      first = false;
    }
    s << "\"/>\n";
  }
  s << "<text x=\"" << num(p.left + p.width / 2) << "\" y=\"" << num(height - 12)
    << "\" text-anchor=\"middle\" font-size=\"12\">time index</text>\n</svg>\n";
  return s.str();
}

std::string intensity_svg(const std::vector<IntensityVector>& rows) {
  const double width = 820, panel_height = 260, gap = 110;
  const double height = 30 + static_cast<double>(rows.size()) * (panel_height + gap);
  std::ostringstream s;
  open_svg(s, width, height);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& iv = rows[r];
    const Panel p = stem_panel(iv, 70, 40 + static_cast<double>(r) * (panel_height + gap), width - 100, panel_height);
    std::string title = "Intensity";
    if (rows.size() > 1) title += " (series " + std::to_string(r + 1) + ")";
    title += iv.scaled ? ", scaled" : "";
    title += iv.centred ? ", centred" : "";
    draw_axes(s, p, title, false);
    draw_stems(s, p, iv, iv.values.size());
  }
  s << "</svg>\n";
  return s.str();
}

std::string spectrum_test_svg(const SpectrumTestResult& result) {
  const double width = 1100, height = 460;
  std::ostringstream s;
  open_svg(s, width, height);

  const auto& iv = result.intensity;
  std::size_t marked = iv.values.size();
  for (std::size_t i = 1; i < iv.values.size(); ++i) {
    if (iv.values[i] == result.statistic) {
      marked = i;
      break;
    }
  }
  const Panel left = stem_panel(iv, 70, 50, 460, 300);
  draw_axes(s, left, "Scaled intensity", false);
  draw_stems(s, left, iv, marked);

  // Histogram of the null maxima.
  const auto& null = result.null_sample;
  double lo = result.statistic, hi = result.statistic;
  for (double v : null) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  const std::size_t bins = 40;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : null) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * double(bins));
    counts[std::min(b, bins - 1)]++;
  }
  const double peak = static_cast<double>(std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end())));
  const double density_scale = 1.0 / (static_cast<double>(null.size()) * (hi - lo) / double(bins));
  double x0 = lo, x1 = hi;
  widen(x0, x1);
  const Panel right{640, 50, 420, 300, x0, x1, 0.0, peak * density_scale * 1.08};
  draw_axes(s, right, "Simulated null distribution of the maximum");
  s << "<g fill=\"#9ecae1\" stroke=\"#4a7fa8\" stroke-width=\"0.5\">\n";
  for (std::size_t b = 0; b < bins; ++b) {
    const double a = lo + (hi - lo) * double(b) / double(bins);
    const double e = lo + (hi - lo) * double(b + 1) / double(bins);
    const double d = static_cast<double>(counts[b]) * density_scale;
    s << "<rect x=\"" << num(right.px(a)) << "\" y=\"" << num(right.py(d)) << "\" width=\""
      << num(right.px(e) - right.px(a)) << "\" height=\"" << num(right.py(0.0) - right.py(d)) << "\" data-count=\""
      << counts[b] << "\"/>\n";
  }
  s << "</g>\n";
  s << "<line class=\"observed\" x1=\"" << num(right.px(result.statistic)) << "\" y1=\"" << num(right.top)
    << "\" x2=\"" << num(right.px(result.statistic)) << "\" y2=\"" << num(right.top + right.height)
    << "\" stroke=\"" << kMarked << "\" stroke-width=\"2\" data-value=\"" << format_double(result.statistic)
    << "\"/>\n";

  s << "<text x=\"" << num(width / 2) << "\" y=\"" << num(height - 20) << "\" text-anchor=\"middle\" font-size=\"13\">"
    << "maximum scaled intensity = " << format_double(result.statistic)
    << ", p-value = " << format_double(result.p_value) << " (" << result.sims << " permutations)</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace garma::cli
